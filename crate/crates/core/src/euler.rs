//! Higher-order Euler polynomials and their q-extensions.
//!
//! The h-extended family `E_{n,q}^{(h,r)}(x)` has four representations that
//! are evaluated independently here:
//!
//! * [`q_euler_closed`]: the finite sum
//!   `2^r/(1-q)^n Σ_{l=0}^{n} C(n,l) (-q^x)^l / (-q^{h-r+l}; q)_r`;
//! * [`q_euler_series`]: `2^r Σ_m binom(m+r-1, m)_q (-q^{h-r})^m [m+x]_q^n`;
//! * [`q_euler_multisum`]: the `r`-fold sum
//!   `2^r Σ_{m_1..m_r} q^{Σ (h-l) m_l} (-1)^{Σ m_l} [Σ m_l + x]_q^n`;
//! * the fermionic-integral oracle in [`crate::fermionic`].
//!
//! The argument `x` never appears as a number. Every evaluation takes
//! `T = q^x` instead, which keeps fractional arguments exact.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::arith::{
    binomial, int, pow_nz, product, ExactRational, LaurentPoly, LazySum, RationalFunction,
};
use crate::check::CheckResult;
use crate::error::{Error, Result};
use crate::multi_index::{box_indices, box_size, compositions};
use crate::qcore::QContext;
use crate::series::{extrapolate, ApproxValue, Summation, TruncationBudget};

/// Largest number of multi-index terms a single enumeration may visit.
pub const ENUMERATION_LIMIT: u128 = 1_000_000;

/// Member `(n, h, r)` of the polynomial family.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct EulerParams {
    pub n: u32,
    pub h: i64,
    pub r: u32,
}

impl EulerParams {
    pub fn new(n: u32, h: i64, r: u32) -> Result<Self> {
        if r == 0 {
            return Err(Error::InvalidParameter("order r must be >= 1".into()));
        }
        Ok(Self { n, h, r })
    }

    /// Every weight `q^{(h-l) m_l}` decays, so the plain partial sums converge.
    pub fn weights_decay(&self) -> bool {
        self.h > self.r as i64
    }
}

/// Base `Q` together with `T`, which stands for `Q^x`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EvalPoint {
    pub base: QContext,
    pub t: ExactRational,
}

impl EvalPoint {
    /// Verification-grade point: `0 < Q < 1` and `T > 0`.
    pub fn new(q: ExactRational, t: ExactRational) -> Result<Self> {
        let base = QContext::unit_interval(q)?;
        if !t.is_positive() {
            return Err(Error::InvalidParameter(format!(
                "T must be positive, got {t}"
            )));
        }
        Ok(Self { base, t })
    }

    /// Point with an arbitrary admissible base and any `T`; the closed form
    /// reports singular factors instead of relying on the invariants.
    pub fn with_base(base: QContext, t: ExactRational) -> Self {
        Self { base, t }
    }

    /// The point `x` itself (integer), i.e. `T = Q^x`.
    pub fn at_integer(q: ExactRational, x: i64) -> Result<Self> {
        let base = QContext::unit_interval(q)?;
        let t = base.pow(x);
        Ok(Self { base, t })
    }

    pub fn q(&self) -> &ExactRational {
        self.base.q()
    }

    /// `[m + x]_Q^n`, with `0^0 = 1`.
    pub fn shifted_power(&self, m: i64, n: u32) -> ExactRational {
        if n == 0 {
            return ExactRational::one();
        }
        pow_nz(&self.base.q_number_shifted(m, &self.t), n as i64)
    }

    /// `max(1, T) / (1 - Q)`, which bounds `|[m + x]_Q|` for all `m >= 0`.
    fn q_number_ceiling(&self) -> ExactRational {
        let one = ExactRational::one();
        let top = if self.t > one {
            self.t.clone()
        } else {
            one.clone()
        };
        top / (one - self.q())
    }
}

fn two_pow(r: u32) -> ExactRational {
    ExactRational::from_integer(BigInt::from(2).pow(r))
}

fn sign(k: u64) -> ExactRational {
    if k.is_multiple_of(2) {
        int(1)
    } else {
        int(-1)
    }
}

/// Classical `E_n^{(r)}(x)` from `(2/(e^t+1))^r e^{xt}`, by forward
/// substitution in `Σ_k C(n,k) a_k E_{n-k}^{(r)}(x) = x^n`, where
/// `a_k = 2^{-r} Σ_j C(r,j) j^k` are the Taylor coefficients (times `k!`) of
/// `((e^t+1)/2)^r`.
pub fn classical_euler_poly(n: u32, r: u32, x: &ExactRational) -> ExactRational {
    let scale = two_pow(r).recip();
    let a: Vec<ExactRational> = (0..=n)
        .map(|k| {
            let s: BigInt = (0..=r as i64)
                .map(|j| binomial(r as i64, j) * BigInt::from(j).pow(k))
                .sum();
            ExactRational::from_integer(s) * &scale
        })
        .collect();
    let mut e: Vec<ExactRational> = Vec::with_capacity(n as usize + 1);
    let mut x_pow = ExactRational::one();
    for m in 0..=n as usize {
        let mut v = x_pow.clone();
        for k in 1..=m {
            v -= ExactRational::from_integer(binomial(m as i64, k as i64)) * &a[k] * &e[m - k];
        }
        e.push(v);
        x_pow *= x;
    }
    e.pop().unwrap()
}

/// Exact `E_{n,Q}^{(h,r)}(x)` from the finite closed form, with `T = Q^x`.
pub fn q_euler_closed(p: &EulerParams, pt: &EvalPoint) -> Result<ExactRational> {
    let ctx = &pt.base;
    let one = ExactRational::one();
    let one_minus_q = &one - ctx.q();
    let mut sum = ExactRational::zero();
    let mut t_pow = one.clone();
    for l in 0..=p.n as i64 {
        // (-Q^{h-r+l}; Q)_r = Π_k (1 + Q^{h-r+l+k})
        let den = ctx.pochhammer(&-ctx.pow(p.h - p.r as i64 + l), p.r);
        if den.is_zero() {
            return Err(Error::SingularDenominator(format!(
                "(-q^{}; q)_{} = 0",
                p.h - p.r as i64 + l,
                p.r
            )));
        }
        let mut term = ExactRational::from_integer(binomial(p.n as i64, l)) * &t_pow / den;
        if l % 2 == 1 {
            term = -term;
        }
        sum += term;
        t_pow *= &pt.t;
    }
    Ok(two_pow(p.r) * sum / pow_nz(&one_minus_q, p.n as i64))
}

fn check_budget(terms: usize, r: u32) -> Result<()> {
    let needed = box_size(terms as u64, r);
    if needed > ENUMERATION_LIMIT {
        return Err(Error::BudgetExceeded {
            needed,
            limit: ENUMERATION_LIMIT,
        });
    }
    Ok(())
}

fn require_unit_base(pt: &EvalPoint) -> Result<()> {
    if !pt.base.in_unit_interval() {
        return Err(Error::InvalidParameter(
            "series representations need 0 < Q < 1".into(),
        ));
    }
    Ok(())
}

/// Gaussian-binomial series, truncated at `m < M` when the weights decay and
/// extrapolated otherwise.
pub fn q_euler_series(
    p: &EulerParams,
    pt: &EvalPoint,
    budget: TruncationBudget,
) -> Result<ApproxValue> {
    require_unit_base(pt)?;
    let ctx = &pt.base;
    let r = p.r as i64;
    let scale = two_pow(p.r);
    let term = |m: usize| -> ExactRational {
        let m = m as i64;
        product(&[
            &scale,
            &sign(m as u64),
            &ctx.gauss_binomial(m + r - 1, m),
            &ctx.pow((p.h - r) * m),
            &pt.shifted_power(m, p.n),
        ])
    };
    let terms = budget.terms();
    if !p.weights_decay() {
        return extrapolate(terms, |m| Ok(term(m)));
    }
    let mut acc = LazySum::new();
    (0..terms).for_each(|m| acc.add(&term(m)));
    let value = acc.finish();
    // |term_m| <= 2^r K_r B^n ρ^m with ρ = Q^{h-r}
    let rho = ctx.pow(p.h - r);
    let majorant =
        &scale * ctx.gauss_binomial_ceiling(r) * pow_nz(&pt.q_number_ceiling(), p.n as i64);
    let tail_bound = majorant * pow_nz(&rho, terms as i64) / (ExactRational::one() - &rho);
    Ok(ApproxValue {
        value,
        tail_bound,
        method: Summation::Truncated,
        terms_used: terms,
    })
}

/// Rigorous bound on the part of the `r`-fold alternating sum outside the box
/// `[0, M)^r`, when every weight `ρ_l = Q^{h-l}` is below one:
/// `2^r B^n (Π 1/(1-ρ_l) - Π (1-ρ_l^M)/(1-ρ_l))`.
pub(crate) fn box_tail_bound(p: &EulerParams, pt: &EvalPoint, terms: usize) -> ExactRational {
    let one = ExactRational::one();
    let mut full = one.clone();
    let mut inside = one.clone();
    for l in 1..=p.r as i64 {
        let rho = pt.base.pow(p.h - l);
        let geo = (&one - &rho).recip();
        inside *= (&one - pow_nz(&rho, terms as i64)) * &geo;
        full *= geo;
    }
    two_pow(p.r) * pow_nz(&pt.q_number_ceiling(), p.n as i64) * (full - inside)
}

/// `r`-fold alternating sum. With decaying weights the box `[0, M)^r` is
/// summed and bounded; otherwise the diagonals `Σ_{|m| = s}` (all inside the
/// box for `s < M`) form a single series that is extrapolated.
pub fn q_euler_multisum(
    p: &EulerParams,
    pt: &EvalPoint,
    budget: TruncationBudget,
) -> Result<ApproxValue> {
    require_unit_base(pt)?;
    let terms = budget.terms();
    check_budget(terms, p.r)?;
    let ctx = &pt.base;
    let scale = two_pow(p.r);
    let h = p.h;

    if !p.weights_decay() {
        return extrapolate(terms, |s| {
            let weight = compositions(s as u32, p.r as usize)
                .iter()
                .fold(ExactRational::zero(), |acc, m| {
                    acc + ctx.pow(m.weighted(|l| h - l))
                });
            Ok(&scale * sign(s as u64) * weight * pt.shifted_power(s as i64, p.n))
        });
    }

    // group the box by (Σ m_l, Σ (h-l) m_l); both fit in i64 at this budget
    let mut counts: BTreeMap<(u64, i64), i64> = BTreeMap::new();
    for m in box_indices(terms as u32, p.r as usize) {
        *counts
            .entry((m.total(), m.weighted(|l| h - l)))
            .or_insert(0) += 1;
    }
    let mut by_total: BTreeMap<u64, LazySum> = BTreeMap::new();
    for ((s, e), c) in counts {
        by_total
            .entry(s)
            .or_insert_with(LazySum::new)
            .add_product(&[&int(c), &ctx.pow(e)]);
    }
    let mut acc = LazySum::new();
    for (s, w) in by_total {
        acc.add_product(&[&sign(s), &w.finish(), &pt.shifted_power(s as i64, p.n)]);
    }
    let value = acc.finish() * &scale;
    Ok(ApproxValue {
        value,
        tail_bound: box_tail_bound(p, pt, terms),
        method: Summation::Truncated,
        terms_used: terms,
    })
}

/// Brute force `Σ_{m_1+…+m_r = m} q^{Σ (h-l) m_l}` over all compositions.
pub fn composition_weight_sum(ctx: &QContext, h: i64, r: u32, m: u32) -> ExactRational {
    compositions(m, r as usize)
        .iter()
        .fold(ExactRational::zero(), |acc, idx| {
            acc + ctx.pow(idx.weighted(|l| h - l))
        })
}

/// The bridge between the multi-index and single-index series:
/// `Σ_{|m| = m} q^{Σ (h-l) m_l} = q^{(h-r)m} binom(m+r-1, m)_q`.
pub fn check_composition_collapse(ctx: &QContext, h: i64, r: u32, m: u32) -> CheckResult {
    let lhs = composition_weight_sum(ctx, h, r, m);
    let m = m as i64;
    let r = r as i64;
    let rhs = ctx.pow((h - r) * m) * ctx.gauss_binomial(m + r - 1, m);
    CheckResult::new(lhs, rhs)
}

/// Plain-binomial q-extension `E_{n,q}^{(r)}(x)` as the series
/// `2^r Σ_m C(m+r-1, m) (-1)^m [m+x]_q^n`. The terms never decay, so the
/// series is always extrapolated.
pub fn q_euler_plain(
    n: u32,
    r: u32,
    pt: &EvalPoint,
    budget: TruncationBudget,
) -> Result<ApproxValue> {
    require_unit_base(pt)?;
    if r == 0 {
        return Err(Error::InvalidParameter("order r must be >= 1".into()));
    }
    let scale = two_pow(r);
    extrapolate(budget.terms(), |m| {
        let c = ExactRational::from_integer(binomial(m as i64 + r as i64 - 1, m as i64));
        Ok(&scale * c * sign(m as u64) * pt.shifted_power(m as i64, n))
    })
}

/// Finite form of the plain-binomial family:
/// `2^r/(1-Q)^n Σ_l C(n,l) (-T)^l / (1 + Q^l)^r`.
pub fn q_euler_plain_closed(n: u32, r: u32, pt: &EvalPoint) -> Result<ExactRational> {
    let ctx = &pt.base;
    let one = ExactRational::one();
    let mut sum = ExactRational::zero();
    let mut t_pow = one.clone();
    for l in 0..=n as i64 {
        let den = pow_nz(&(&one + ctx.pow(l)), r as i64);
        if den.is_zero() {
            return Err(Error::SingularDenominator(format!("1 + q^{l} = 0")));
        }
        let mut term = ExactRational::from_integer(binomial(n as i64, l)) * &t_pow / den;
        if l % 2 == 1 {
            term = -term;
        }
        sum += term;
        t_pow *= &pt.t;
    }
    Ok(two_pow(r) * sum / pow_nz(&(&one - ctx.q()), n as i64))
}

/// The closed form with `T = q^x` as an exact rational function of `q`.
///
/// Over the common denominator `(1-q)^n Π_{e=h-r}^{h+n-1} (1 + q^e)`, the
/// `l`-th summand keeps the factors its own Pochhammer product lacks.
pub fn q_euler_symbolic(p: &EulerParams, x: u32) -> RationalFunction {
    let r = p.r as i64;
    let n = p.n as i64;
    let one_plus = |e: i64| LaurentPoly::from_terms([(0, int(1)), (e, int(1))]);
    let lo = p.h - r;
    let hi = p.h + n - 1;
    let mut num = LaurentPoly::zero();
    for l in 0..=n {
        let mut term = LaurentPoly::monomial(
            ExactRational::from_integer(binomial(n, l)) * sign(l as u64),
            x as i64 * l,
        );
        for e in (lo..=hi).filter(|e| !(lo + l..lo + l + r).contains(e)) {
            term = &term * &one_plus(e);
        }
        num = &num + &term;
    }
    let num = num.scale(&two_pow(p.r));
    let mut den = LaurentPoly::from_terms([(0, int(1)), (1, int(-1))]).pow(p.n);
    for e in lo..=hi {
        den = &den * &one_plus(e);
    }
    RationalFunction::new(num, den).expect("1 + q^e and 1 - q are nonzero polynomials")
}

/// Exact `lim_{q -> 1} E_{n,q}^{(h,r)}(x)`.
pub fn q_to_1_limit(p: &EulerParams, x: u32) -> Result<ExactRational> {
    q_euler_symbolic(p, x).limit_at_one()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;

    fn params(n: u32, h: i64, r: u32) -> EulerParams {
        EulerParams::new(n, h, r).unwrap()
    }

    fn point(q: ExactRational, t: ExactRational) -> EvalPoint {
        EvalPoint::new(q, t).unwrap()
    }

    fn budget(m: usize) -> TruncationBudget {
        TruncationBudget::new(m).unwrap()
    }

    /// `2 e^{xt}/(e^t+1)` raised to order `r` by truncated power series in
    /// `t`: independent of the triangular solve.
    fn classical_by_series(n: u32, r: u32, x: &ExactRational) -> ExactRational {
        let len = n as usize + 1;
        let mut fact = vec![ExactRational::one(); len];
        for k in 1..len {
            fact[k] = &fact[k - 1] * int(k as i64);
        }
        let mul = |a: &[ExactRational], b: &[ExactRational]| {
            let mut c = vec![ExactRational::zero(); len];
            for i in 0..len {
                for j in 0..len - i {
                    c[i + j] += &a[i] * &b[j];
                }
            }
            c
        };
        // (e^t + 1)/2
        let half: Vec<_> = (0..len)
            .map(|k| (if k == 0 { int(2) } else { int(1) }) / &fact[k] / int(2))
            .collect();
        // reciprocal by long division
        let mut inv = vec![ExactRational::zero(); len];
        inv[0] = half[0].recip();
        for k in 1..len {
            let s = (1..=k).fold(ExactRational::zero(), |a, j| a + &half[j] * &inv[k - j]);
            inv[k] = -s / &half[0];
        }
        let mut g = vec![ExactRational::zero(); len];
        g[0] = int(1);
        for _ in 0..r {
            g = mul(&g, &inv);
        }
        let ext: Vec<_> = (0..len).map(|k| pow_nz(x, k as i64) / &fact[k]).collect();
        let g = mul(&g, &ext);
        &g[n as usize] * &fact[n as usize]
    }

    #[test]
    fn classical_examples() {
        for r in 1..4 {
            assert_eq!(classical_euler_poly(0, r, &rat(3, 7)), int(1));
        }
        assert_eq!(classical_euler_poly(1, 1, &int(0)), rat(-1, 2));
        for x in 0..3 {
            let x = int(x);
            assert_eq!(classical_euler_poly(2, 1, &x), &x * &x - &x);
        }
    }

    #[test]
    fn classical_matches_power_series_oracle() {
        for n in 0..7 {
            for r in 1..4 {
                for x in [int(0), int(1), int(2), rat(-3, 2), rat(5, 3)] {
                    assert_eq!(
                        classical_euler_poly(n, r, &x),
                        classical_by_series(n, r, &x),
                        "n={n} r={r} x={x}"
                    );
                }
            }
        }
    }

    #[test]
    fn closed_form_examples() {
        for q in [rat(1, 2), rat(1, 5)] {
            for t in [int(1), rat(3, 4)] {
                assert_eq!(
                    q_euler_closed(&params(0, 1, 1), &point(q.clone(), t)).unwrap(),
                    int(1)
                );
            }
        }
        assert_eq!(
            q_euler_closed(&params(1, 1, 1), &point(rat(1, 2), int(1))).unwrap(),
            rat(-2, 3)
        );
        // root of (1 + Q - 2T) at T = (1+Q)/2
        for q in [rat(1, 2), rat(2, 7), rat(9, 10)] {
            let t = (int(1) + &q) / int(2);
            assert_eq!(
                q_euler_closed(&params(1, 1, 1), &point(q, t)).unwrap(),
                int(0)
            );
        }
    }

    #[test]
    fn series_examples() {
        let p = params(0, 1, 1);
        let v = q_euler_series(&p, &point(rat(1, 2), int(1)), budget(60)).unwrap();
        assert_eq!(v.value, int(1));
        let p = params(1, 1, 1);
        let v = q_euler_series(&p, &point(rat(1, 2), int(1)), budget(40)).unwrap();
        assert!(v.contains(&rat(-2, 3)));
        let p = params(0, 2, 2);
        let v = q_euler_series(&p, &point(rat(1, 3), int(1)), budget(60)).unwrap();
        assert_eq!(v.value, rat(3, 2));
        // decaying weights go through the truncated path with a real bound
        let p = params(2, 3, 1);
        let pt = point(rat(1, 2), rat(1, 2));
        let v = q_euler_series(&p, &pt, budget(60)).unwrap();
        assert_eq!(v.method, Summation::Truncated);
        assert!(v.tail_bound.is_positive());
        assert!(v.contains(&q_euler_closed(&p, &pt).unwrap()));
    }

    #[test]
    fn truncated_bound_is_not_vacuous() {
        let p = params(1, 3, 1);
        let pt = point(rat(1, 2), int(1));
        let v = q_euler_series(&p, &pt, budget(60)).unwrap();
        assert!(v.tail_bound < rat(1, 1 << 50));
        let exact = q_euler_closed(&p, &pt).unwrap();
        assert!(!v.contains(&(exact + rat(1, 1 << 40))));
    }

    #[test]
    fn multisum_single_index_matches_series() {
        let pt = point(rat(1, 3), rat(1, 3));
        for h in [-1, 1, 2, 3] {
            let p = params(2, h, 1);
            let a = q_euler_series(&p, &pt, budget(40)).unwrap();
            let b = q_euler_multisum(&p, &pt, budget(40)).unwrap();
            assert_eq!(a.value, b.value, "h={h}");
        }
    }

    #[test]
    fn multisum_examples() {
        let p = params(0, 2, 2);
        let pt = point(rat(1, 2), int(1));
        let v = q_euler_multisum(&p, &pt, budget(25)).unwrap();
        assert!(v.contains(&q_euler_closed(&p, &pt).unwrap()));
        let p = params(2, 4, 2);
        let v = q_euler_multisum(&p, &pt, budget(25)).unwrap();
        assert_eq!(v.method, Summation::Truncated);
        assert!(v.contains(&q_euler_closed(&p, &pt).unwrap()));
        assert!(matches!(
            q_euler_multisum(&params(0, 2, 4), &pt, budget(40)),
            Err(Error::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn composition_collapse_small_cases() {
        for q in [rat(1, 2), rat(2, 9), rat(5, 3)] {
            let c = QContext::new(q).unwrap();
            for r in 1..=3 {
                for h in -1..=3 {
                    for m in 0..=8 {
                        assert!(check_composition_collapse(&c, h, r, m).equal);
                    }
                }
            }
        }
    }

    #[test]
    fn plain_family_examples() {
        let pt = point(rat(1, 2), int(1));
        for r in 1..4 {
            assert_eq!(q_euler_plain_closed(0, r, &pt).unwrap(), int(1));
        }
        assert_eq!(q_euler_plain_closed(1, 1, &pt).unwrap(), rat(-2, 3));
        let v = q_euler_plain(1, 2, &pt, budget(40)).unwrap();
        assert!(v.contains(&q_euler_plain_closed(1, 2, &pt).unwrap()));
        // r = 1, h = 1: both families share their series term by term
        let a = q_euler_plain(3, 1, &pt, budget(40)).unwrap();
        let b = q_euler_series(&params(3, 1, 1), &pt, budget(40)).unwrap();
        assert_eq!(a.value, b.value);
    }

    #[test]
    fn symbolic_examples() {
        let f = q_euler_symbolic(&params(0, 1, 1), 0);
        for q in [rat(1, 2), rat(3, 7)] {
            assert_eq!(f.eval(&q).unwrap(), int(1));
        }
        let f = q_euler_symbolic(&params(1, 1, 1), 0);
        assert_eq!(f.eval(&rat(1, 2)).unwrap(), rat(-2, 3));
    }

    #[test]
    fn symbolic_agrees_with_closed_form() {
        let qs = [rat(1, 2), rat(1, 3), rat(2, 5), rat(7, 9), rat(1, 11)];
        for n in 0..=5 {
            for h in [-1, 0, 1, 2] {
                for r in 1..=3 {
                    let p = params(n, h, r);
                    for x in 0..=3u32 {
                        let f = q_euler_symbolic(&p, x);
                        for q in &qs {
                            let pt = EvalPoint::at_integer(q.clone(), x as i64).unwrap();
                            assert_eq!(f.eval(q).unwrap(), q_euler_closed(&p, &pt).unwrap());
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn limit_examples() {
        for r in 1..4 {
            assert_eq!(q_to_1_limit(&params(0, 2, r), 3).unwrap(), int(1));
        }
        for h in -1..=3 {
            assert_eq!(q_to_1_limit(&params(1, h, 1), 0).unwrap(), rat(-1, 2));
        }
    }
}
