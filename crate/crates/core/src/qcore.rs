//! q-numbers, q-factorials, Gaussian binomials and q-Pochhammer symbols at an
//! exact rational base, plus checkers for the finite q-binomial theorem and
//! its inverse series.

use num_traits::{One, Signed, Zero};

use crate::arith::{int, pow_nz, ExactRational, LaurentPoly, RationalFunction};
use crate::check::{ApproxCheckResult, CheckResult};
use crate::error::{Error, Result};

/// An exact base `q` with `q ∉ {0, 1, -1}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QContext {
    q: ExactRational,
}

impl QContext {
    pub fn new(q: ExactRational) -> Result<Self> {
        if q.is_zero() || q.abs().is_one() {
            return Err(Error::InvalidParameter(format!(
                "q must avoid 0 and ±1, got {q}"
            )));
        }
        Ok(Self { q })
    }

    /// Base restricted to the open unit interval, as required by every
    /// verification run.
    pub fn unit_interval(q: ExactRational) -> Result<Self> {
        if !(q.is_positive() && q < ExactRational::one()) {
            return Err(Error::InvalidParameter(format!(
                "q must lie in (0, 1), got {q}"
            )));
        }
        Ok(Self { q })
    }

    pub fn q(&self) -> &ExactRational {
        &self.q
    }

    pub fn in_unit_interval(&self) -> bool {
        self.q.is_positive() && self.q < ExactRational::one()
    }

    /// `q^k`
    pub fn pow(&self, k: i64) -> ExactRational {
        pow_nz(&self.q, k)
    }

    /// The context for base `q^k`, e.g. `q^{w}` in the symmetry identities.
    pub fn power_base(&self, k: i64) -> Result<Self> {
        Self::new(self.pow(k))
    }

    /// `[x]_q = (1 - q^x) / (1 - q)`
    pub fn q_number(&self, x: i64) -> ExactRational {
        (ExactRational::one() - self.pow(x)) / (ExactRational::one() - &self.q)
    }

    /// `[x + m]_q` with `t` standing for `q^x`: `(1 - q^m t) / (1 - q)`.
    pub fn q_number_shifted(&self, m: i64, t: &ExactRational) -> ExactRational {
        (ExactRational::one() - self.pow(m) * t) / (ExactRational::one() - &self.q)
    }

    pub fn q_factorial(&self, n: u32) -> ExactRational {
        (1..=n as i64).fold(ExactRational::one(), |acc, k| acc * self.q_number(k))
    }

    /// Gaussian binomial by the product form `[n]…[n-i+1] / [i]!`; zero when
    /// `i < 0` or `i > n`.
    pub fn gauss_binomial(&self, n: i64, i: i64) -> ExactRational {
        if n < 0 || i < 0 || i > n {
            return ExactRational::zero();
        }
        let i = i.min(n - i);
        let one = ExactRational::one();
        let mut num = ExactRational::one();
        let mut den = ExactRational::one();
        for k in 0..i {
            num *= &one - self.pow(n - k);
            den *= &one - self.pow(k + 1);
        }
        num / den
    }

    /// `(a; q)_n = Π_{k<n} (1 - a q^k)`
    pub fn pochhammer(&self, a: &ExactRational, n: u32) -> ExactRational {
        (0..n as i64).fold(ExactRational::one(), |acc, k| {
            acc * (ExactRational::one() - a * self.pow(k))
        })
    }

    /// `Π_{k=1}^{n-1} 1/(1 - q^k)`, the uniform bound on `binom(m+n-1, m)_q`
    /// for `q ∈ (0,1)`.
    pub(crate) fn gauss_binomial_ceiling(&self, n: i64) -> ExactRational {
        (1..n).fold(ExactRational::one(), |acc, k| {
            acc / (ExactRational::one() - self.pow(k))
        })
    }
}

/// `binom(n, i)_q` as an exact rational function of an indeterminate `q`.
pub fn gauss_binomial_symbolic(n: i64, i: i64) -> RationalFunction {
    if n < 0 || i < 0 || i > n {
        return RationalFunction::from_poly(LaurentPoly::zero());
    }
    let one_minus = |k: i64| LaurentPoly::from_terms([(0, int(1)), (k, int(-1))]);
    let mut num = LaurentPoly::one();
    let mut den = LaurentPoly::one();
    for k in 0..i {
        num = &num * &one_minus(n - k);
        den = &den * &one_minus(k + 1);
    }
    RationalFunction::new(num, den).expect("nonzero product")
}

/// Finite q-binomial theorem:
/// `(b; q)_n = Σ_{i=0}^{n} binom(n,i)_q q^{C(i,2)} (-1)^i b^i`.
pub fn check_q_binomial_finite(ctx: &QContext, b: &ExactRational, n: u32) -> CheckResult {
    let lhs = ctx.pochhammer(b, n);
    let mut rhs = ExactRational::zero();
    let mut b_pow = ExactRational::one();
    for i in 0..=n as i64 {
        let mut term = ctx.gauss_binomial(n as i64, i) * ctx.pow(i * (i - 1) / 2) * &b_pow;
        if i % 2 == 1 {
            term = -term;
        }
        rhs += term;
        b_pow *= b;
    }
    CheckResult::new(lhs, rhs)
}

/// Inverse q-binomial series `1/(b;q)_n = Σ_i binom(n+i-1, i)_q b^i`,
/// truncated after `i = terms` with a geometric tail bound.
pub fn check_q_binomial_inverse(
    ctx: &QContext,
    b: &ExactRational,
    n: u32,
    terms: usize,
) -> Result<ApproxCheckResult> {
    if n < 1 {
        return Err(Error::InvalidParameter(
            "inverse q-binomial needs n >= 1".into(),
        ));
    }
    if !ctx.in_unit_interval() {
        return Err(Error::InvalidParameter(
            "inverse q-binomial needs 0 < q < 1".into(),
        ));
    }
    let b_abs = b.abs();
    if b_abs >= ExactRational::one() {
        return Err(Error::DivergentSeries(format!("|b| = {b_abs} >= 1")));
    }
    let prod = ctx.pochhammer(b, n);
    if prod.is_zero() {
        return Err(Error::ZeroDenominator);
    }
    let exact = prod.recip();
    let n = n as i64;
    let mut partial = ExactRational::zero();
    let mut b_pow = ExactRational::one();
    for i in 0..=terms as i64 {
        partial += ctx.gauss_binomial(n + i - 1, i) * &b_pow;
        b_pow *= b;
    }
    // Σ_{i>M} binom(n+i-1,i)_q |b|^i <= K_n |b|^{M+1} / (1 - |b|)
    let tail = ctx.gauss_binomial_ceiling(n) * pow_nz(&b_abs, terms as i64 + 1)
        / (ExactRational::one() - &b_abs);
    Ok(ApproxCheckResult::new(exact, partial, tail))
}
