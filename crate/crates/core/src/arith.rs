//! Exact scalars, Laurent polynomials in one variable `q`, and rational
//! functions of `q` with exact cancellation of `(q - 1)` factors.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use dashu_int::ops::Gcd;
use dashu_int::UBig;
use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision rational number, always kept in lowest terms with a
/// positive denominator.
pub type ExactRational = BigRational;

/// `n / d` as an exact rational. Panics if `d == 0`.
pub fn rat(n: i64, d: i64) -> ExactRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> ExactRational {
    BigRational::from_integer(BigInt::from(n))
}

/// `base^exp` for any integer exponent.
pub fn pow(base: &ExactRational, exp: i64) -> Result<ExactRational> {
    if exp < 0 && base.is_zero() {
        return Err(Error::ZeroBaseWithNegativeExponent);
    }
    let e = exp.unsigned_abs() as u32;
    // numerator and denominator stay coprime under powers, so skip the gcd
    let p = BigRational::new_raw(base.numer().pow(e), base.denom().pow(e));
    Ok(if exp < 0 { p.recip() } else { p })
}

/// Like [`pow`], for callers that already guarantee `base != 0`.
pub(crate) fn pow_nz(base: &ExactRational, exp: i64) -> ExactRational {
    pow(base, exp).expect("nonzero base")
}

/// Greatest common divisor of the magnitudes. Routed through dashu's Lehmer
/// implementation: long exact sums spend most of their time here, and the
/// binary gcd of num-bigint is several times slower at a few thousand bits.
fn gcd(a: &BigInt, b: &BigInt) -> BigInt {
    let conv = |x: &BigInt| UBig::from_le_bytes(&x.magnitude().to_bytes_le());
    let g = Gcd::gcd(&conv(a), &conv(b));
    BigInt::from_biguint(Sign::Plus, BigUint::from_bytes_le(&g.to_le_bytes()))
}

/// `n / d` in lowest terms. `d` must be nonzero.
pub(crate) fn reduced(n: BigInt, d: BigInt) -> ExactRational {
    if n.is_zero() {
        return ExactRational::zero();
    }
    let g = gcd(&n, &d);
    let (n, d) = if g.is_one() { (n, d) } else { (n / &g, d / &g) };
    if d.is_negative() {
        BigRational::new_raw(-n, -d)
    } else {
        BigRational::new_raw(n, d)
    }
}

pub(crate) fn add(a: &ExactRational, b: &ExactRational) -> ExactRational {
    if a.denom() == b.denom() {
        return reduced(a.numer() + b.numer(), a.denom().clone());
    }
    reduced(
        a.numer() * b.denom() + b.numer() * a.denom(),
        a.denom() * b.denom(),
    )
}

pub(crate) fn sub(a: &ExactRational, b: &ExactRational) -> ExactRational {
    if a.denom() == b.denom() {
        return reduced(a.numer() - b.numer(), a.denom().clone());
    }
    reduced(
        a.numer() * b.denom() - b.numer() * a.denom(),
        a.denom() * b.denom(),
    )
}

/// Product of several rationals with a single reduction at the end.
pub(crate) fn product(factors: &[&ExactRational]) -> ExactRational {
    let mut n = BigInt::one();
    let mut d = BigInt::one();
    for f in factors {
        n *= f.numer();
        d *= f.denom();
    }
    reduced(n, d)
}

/// Running sum that keeps one shared denominator and reduces only in
/// [`LazySum::finish`]. Cheap when the denominators of the summands divide
/// one another, which holds for sums over growing powers of a fixed base.
#[derive(Clone, Debug)]
pub(crate) struct LazySum {
    num: BigInt,
    den: BigInt,
}

impl LazySum {
    pub(crate) fn new() -> Self {
        Self {
            num: BigInt::zero(),
            den: BigInt::one(),
        }
    }

    pub(crate) fn add(&mut self, x: &ExactRational) {
        self.add_parts(x.numer(), x.denom());
    }

    /// Adds `Π factors` without reducing it first.
    pub(crate) fn add_product(&mut self, factors: &[&ExactRational]) {
        let mut n = BigInt::one();
        let mut d = BigInt::one();
        for f in factors {
            n *= f.numer();
            d *= f.denom();
        }
        self.add_parts(&n, &d);
    }

    fn add_parts(&mut self, n: &BigInt, d: &BigInt) {
        if n.is_zero() {
            return;
        }
        let (quo, rem) = self.den.div_rem(d);
        if rem.is_zero() {
            self.num += n * quo;
            return;
        }
        let (quo, rem) = d.div_rem(&self.den);
        if rem.is_zero() {
            self.num = &self.num * quo + n;
            self.den = d.clone();
            return;
        }
        let g = gcd(&self.den, d);
        let grow = d / &g;
        self.num = &self.num * &grow + n * (&self.den / &g);
        self.den *= grow;
    }

    pub(crate) fn finish(self) -> ExactRational {
        reduced(self.num, self.den)
    }
}

/// Ordinary binomial coefficient `C(n, k)`, zero outside `0 <= k <= n`.
pub fn binomial(n: i64, k: i64) -> BigInt {
    if k < 0 || n < 0 || k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for j in 0..k {
        acc = acc * BigInt::from(n - j) / BigInt::from(j + 1);
    }
    acc
}

/// Exact `p/q` string form used at every I/O boundary.
pub fn to_fraction_string(x: &ExactRational) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

pub fn parse_fraction(s: &str) -> Result<ExactRational> {
    let bad = || Error::InvalidParameter(format!("not a rational: {s:?}"));
    let s = s.trim();
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: BigInt = n.parse().map_err(|_| bad())?;
    let d: BigInt = d.parse().map_err(|_| bad())?;
    if d.is_zero() {
        return Err(bad());
    }
    Ok(BigRational::new(n, d))
}

/// Decimal rendering with `digits` significant digits, rounding half to even.
/// Display only; never parsed back.
pub fn to_decimal_string(x: &ExactRational, digits: u32) -> String {
    if x.is_zero() {
        return "0".to_string();
    }
    let digits = digits.max(1) as i64;
    let neg = x.is_negative();
    let a = x.abs();
    // first guess for floor(log10 |x|) from digit counts, then correct
    let mut e = a.numer().to_string().len() as i64 - a.denom().to_string().len() as i64;
    let ten = int(10);
    loop {
        let lo = pow_nz(&ten, e);
        if a < lo {
            e -= 1;
        } else if a >= &lo * &ten {
            e += 1;
        } else {
            break;
        }
    }
    let scaled = &a * pow_nz(&ten, digits - 1 - e);
    let fl = scaled.floor();
    let frac = &scaled - &fl;
    let mut m = fl.to_integer();
    let half = rat(1, 2);
    if frac > half || (frac == half && (&m % 2u32) == BigInt::one()) {
        m += 1;
    }
    let mut s = m.to_string();
    if s.len() as i64 > digits {
        // rounding carried into a new digit
        s.pop();
        e += 1;
    }
    let (head, tail) = s.split_at(1);
    let tail = tail.trim_end_matches('0');
    let mut out = String::new();
    if neg {
        out.push('-');
    }
    out.push_str(head);
    if !tail.is_empty() {
        out.push('.');
        out.push_str(tail);
    }
    if e != 0 {
        out.push_str(&format!("e{e}"));
    }
    out
}

/// Finitely supported map from integer exponents of `q` to nonzero exact
/// coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LaurentPoly {
    terms: BTreeMap<i64, ExactRational>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(ExactRational::one())
    }

    pub fn constant(c: ExactRational) -> Self {
        Self::monomial(c, 0)
    }

    /// `c * q^k`
    pub fn monomial(c: ExactRational, k: i64) -> Self {
        let mut p = Self::zero();
        p.add_term(k, c);
        p
    }

    pub fn from_terms<I: IntoIterator<Item = (i64, ExactRational)>>(it: I) -> Self {
        let mut p = Self::zero();
        for (k, c) in it {
            p.add_term(k, c);
        }
        p
    }

    pub fn add_term(&mut self, k: i64, c: ExactRational) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(k).or_insert_with(ExactRational::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&k);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, k: i64) -> ExactRational {
        self.terms
            .get(&k)
            .cloned()
            .unwrap_or_else(ExactRational::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &ExactRational)> {
        self.terms.iter().map(|(k, c)| (*k, c))
    }

    pub fn min_exponent(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    pub fn max_exponent(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    pub fn scale(&self, c: &ExactRational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self {
            terms: self.terms.iter().map(|(k, v)| (*k, v * c)).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Exact value at `q0`.
    pub fn eval(&self, q0: &ExactRational) -> Result<ExactRational> {
        let Some(lo) = self.min_exponent() else {
            return Ok(ExactRational::zero());
        };
        if lo < 0 && q0.is_zero() {
            return Err(Error::ZeroBaseWithNegativeExponent);
        }
        if q0.is_zero() {
            return Ok(self.coeff(0));
        }
        // Horner on q0^lo * P(q0)
        let hi = self.max_exponent().unwrap();
        let mut acc = ExactRational::zero();
        for k in (lo..=hi).rev() {
            acc *= q0;
            if let Some(c) = self.terms.get(&k) {
                acc += c;
            }
        }
        Ok(acc * pow_nz(q0, lo))
    }

    /// Value at `q = 1`: the coefficient sum.
    pub fn eval_at_one(&self) -> ExactRational {
        self.terms
            .values()
            .fold(ExactRational::zero(), |a, c| a + c)
    }

    /// Exact quotient by `(q - 1)`. Requires `self(1) == 0`.
    fn div_q_minus_one(&self) -> Self {
        debug_assert!(self.eval_at_one().is_zero());
        let (Some(lo), Some(hi)) = (self.min_exponent(), self.max_exponent()) else {
            return Self::zero();
        };
        // synthetic division from the top: b_{k-1} = a_k + b_k
        let mut out = Self::zero();
        let mut carry = ExactRational::zero();
        for k in (lo + 1..=hi).rev() {
            carry += self.coeff(k);
            out.add_term(k - 1, carry.clone());
        }
        out
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (i, (k, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            match *k {
                0 => write!(f, "{c}")?,
                1 => write!(f, "({c})*q")?,
                _ => write!(f, "({c})*q^{k}")?,
            }
        }
        Ok(())
    }
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (k, c) in &rhs.terms {
            out.add_term(*k, c.clone());
        }
        out
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (k, c) in &rhs.terms {
            out.add_term(*k, -c);
        }
        out
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = LaurentPoly::zero();
        for (a, ca) in &self.terms {
            for (b, cb) in &rhs.terms {
                out.add_term(a + b, ca * cb);
            }
        }
        out
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly {
            terms: self.terms.iter().map(|(k, c)| (*k, -c)).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for LaurentPoly {
            type Output = LaurentPoly;
            fn $m(self, rhs: LaurentPoly) -> LaurentPoly {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

/// Quotient `num / den` of two Laurent polynomials.
#[derive(Clone, Debug)]
pub struct RationalFunction {
    num: LaurentPoly,
    den: LaurentPoly,
}

impl RationalFunction {
    pub fn new(num: LaurentPoly, den: LaurentPoly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        Ok(Self { num, den })
    }

    pub fn from_poly(p: LaurentPoly) -> Self {
        Self {
            num: p,
            den: LaurentPoly::one(),
        }
    }

    pub fn numerator(&self) -> &LaurentPoly {
        &self.num
    }

    pub fn denominator(&self) -> &LaurentPoly {
        &self.den
    }

    pub fn eval(&self, q0: &ExactRational) -> Result<ExactRational> {
        let d = self.den.eval(q0)?;
        if d.is_zero() {
            return Err(Error::ZeroDenominator);
        }
        Ok(self.num.eval(q0)? / d)
    }

    /// Divides every common `(q - 1)` factor out of numerator and denominator.
    pub fn reduce_at_one(&self) -> Self {
        let mut num = self.num.clone();
        let mut den = self.den.clone();
        while !num.is_zero() && num.eval_at_one().is_zero() && den.eval_at_one().is_zero() {
            num = -&num.div_q_minus_one();
            den = -&den.div_q_minus_one();
        }
        if num.is_zero() {
            // 0 / den is 0 / 1 once every (q - 1) is gone
            while den.eval_at_one().is_zero() {
                den = den.div_q_minus_one();
            }
        }
        Self { num, den }
    }

    /// Exact `lim_{q -> 1}`.
    pub fn limit_at_one(&self) -> Result<ExactRational> {
        let r = self.reduce_at_one();
        let d = r.den.eval_at_one();
        if d.is_zero() {
            return Err(Error::PoleAtOne);
        }
        Ok(r.num.eval_at_one() / d)
    }
}

impl PartialEq for RationalFunction {
    fn eq(&self, other: &Self) -> bool {
        &self.num * &other.den == &other.num * &self.den
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) / ({})", self.num, self.den)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> LaurentPoly {
        LaurentPoly::monomial(int(1), 1)
    }

    fn one_minus_q_pow(k: i64) -> LaurentPoly {
        LaurentPoly::from_terms([(0, int(1)), (k, int(-1))])
    }

    #[test]
    fn eval_examples() {
        assert_eq!(LaurentPoly::one().eval(&rat(7, 3)).unwrap(), int(1));
        let p = LaurentPoly::from_terms([(-1, int(1)), (1, int(1))]);
        assert_eq!(p.eval(&int(2)).unwrap(), rat(5, 2));
        assert_eq!(LaurentPoly::zero().eval(&rat(1, 2)).unwrap(), int(0));
        assert_eq!(p.eval(&int(0)), Err(Error::ZeroBaseWithNegativeExponent));
        assert_eq!(q().eval(&int(0)).unwrap(), int(0));
    }

    #[test]
    fn reduce_examples() {
        let f = RationalFunction::new(one_minus_q_pow(2), one_minus_q_pow(1)).unwrap();
        let r = f.reduce_at_one();
        assert_eq!(
            r.numerator(),
            &LaurentPoly::from_terms([(0, int(1)), (1, int(1))])
        );
        assert_eq!(r.denominator(), &LaurentPoly::one());

        let omq = one_minus_q_pow(1);
        let f = RationalFunction::new(omq.pow(2), omq.pow(3)).unwrap();
        let r = f.reduce_at_one();
        assert_eq!(r.numerator(), &LaurentPoly::one());
        assert_eq!(r.denominator(), &omq);

        let num = &one_minus_q_pow(3) * &LaurentPoly::monomial(int(1), -1);
        let f = RationalFunction::new(num, omq.clone()).unwrap();
        let r = f.reduce_at_one();
        let expected = LaurentPoly::from_terms([(-1, int(1)), (0, int(1)), (1, int(1))]);
        assert_eq!(r.numerator(), &expected);
        assert_eq!(r.denominator(), &LaurentPoly::one());
    }

    #[test]
    fn limit_examples() {
        let f = RationalFunction::new(one_minus_q_pow(2), one_minus_q_pow(1)).unwrap();
        assert_eq!(f.limit_at_one().unwrap(), int(2));
        let f = RationalFunction::new(one_minus_q_pow(5), one_minus_q_pow(1)).unwrap();
        assert_eq!(f.limit_at_one().unwrap(), int(5));
        let f = RationalFunction::new(LaurentPoly::one(), one_minus_q_pow(1)).unwrap();
        assert_eq!(f.limit_at_one(), Err(Error::PoleAtOne));
    }

    #[test]
    fn zero_denominator_rejected() {
        assert!(RationalFunction::new(LaurentPoly::one(), LaurentPoly::zero()).is_err());
    }

    #[test]
    fn rational_function_equality_cross_multiplies() {
        let a = RationalFunction::new(one_minus_q_pow(2), one_minus_q_pow(1)).unwrap();
        let b = RationalFunction::from_poly(LaurentPoly::from_terms([(0, int(1)), (1, int(1))]));
        assert_eq!(a, b);
    }

    #[test]
    fn decimal_rendering_rounds_half_even() {
        assert_eq!(to_decimal_string(&rat(-2, 3), 5), "-6.6667e-1");
        assert_eq!(to_decimal_string(&rat(5, 2), 1), "2");
        assert_eq!(to_decimal_string(&rat(7, 2), 1), "4");
        assert_eq!(to_decimal_string(&rat(999, 1), 2), "1e3");
        assert_eq!(to_decimal_string(&rat(1, 8), 20), "1.25e-1");
    }

    #[test]
    fn fraction_strings() {
        assert_eq!(to_fraction_string(&rat(-4, 6)), "-2/3");
        assert_eq!(parse_fraction(" -2/3 ").unwrap(), rat(-2, 3));
        assert_eq!(parse_fraction("5").unwrap(), int(5));
        assert!(parse_fraction("1/0").is_err());
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(5, 2), BigInt::from(10));
        assert_eq!(binomial(5, 6), BigInt::zero());
        assert_eq!(binomial(0, 0), BigInt::one());
    }

    fn small_rational() -> impl proptest::strategy::Strategy<Value = ExactRational> {
        use proptest::prelude::*;
        (-10_000i64..10_000, 1i64..10_000, 0u32..12)
            .prop_map(|(n, d, e)| pow_nz(&rat(n, d), e as i64))
    }

    proptest::proptest! {
        #[test]
        fn fast_operations_match_num_rational(
            a in small_rational(), b in small_rational(), c in small_rational()
        ) {
            // compare the stored parts, so a missed reduction shows up
            let parts = |x: ExactRational| (x.numer().clone(), x.denom().clone());
            proptest::prop_assert_eq!(parts(add(&a, &b)), parts(&a + &b));
            proptest::prop_assert_eq!(parts(sub(&a, &b)), parts(&a - &b));
            proptest::prop_assert_eq!(parts(product(&[&a, &b, &c])), parts(&a * &b * &c));
            let mut acc = LazySum::new();
            acc.add(&a);
            acc.add_product(&[&b, &c]);
            acc.add(&c);
            proptest::prop_assert_eq!(parts(acc.finish()), parts(&a + &b * &c + &c));
        }
    }
}
