//! Symmetry identities under `w1 ↔ w2` for odd `w1, w2`.
//!
//! Fractional arguments such as `w2 x + (w2/w1) Σ j_l` are only ever consumed
//! as powers of the inner base `q^{w1}`:
//! `(q^{w1})^{w2 x + (w2/w1) J} = T^{w1 w2} q^{w2 J}`, which is exact.
//!
//! Multi-indices are enumerated lexicographically and grouped by
//! `J = Σ j_l` and by their weight exponent, so each distinct polynomial
//! value is evaluated once.

use std::collections::BTreeMap;

use num_traits::{One, Signed, Zero};

use crate::arith::{binomial, int, pow_nz, ExactRational};
use crate::check::CheckResult;
use crate::error::{Error, Result};
use crate::euler::{q_euler_closed, EulerParams, EvalPoint, ENUMERATION_LIMIT};
use crate::fermionic::fermionic_integral_rd;
use crate::multi_index::{box_indices, box_size};
use crate::qcore::QContext;
use crate::series::{ApproxValue, TruncationBudget};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymmetryParams {
    pub w1: u32,
    pub w2: u32,
    pub p: EulerParams,
    pub q: QContext,
    /// stands for `q^x`
    pub t: ExactRational,
}

impl SymmetryParams {
    pub fn new(
        w1: u32,
        w2: u32,
        p: EulerParams,
        q: ExactRational,
        t: ExactRational,
    ) -> Result<Self> {
        for w in [w1, w2] {
            if w % 2 == 0 {
                return Err(Error::InvalidParameter(format!(
                    "w must be odd and >= 1, got {w}"
                )));
            }
        }
        let q = QContext::unit_interval(q)?;
        if !t.is_positive() {
            return Err(Error::InvalidParameter(format!(
                "T must be positive, got {t}"
            )));
        }
        Ok(Self { w1, w2, p, q, t })
    }

    pub fn swapped(&self) -> Self {
        Self {
            w1: self.w2,
            w2: self.w1,
            ..self.clone()
        }
    }
}

/// `J -> (exponent -> signed multiplicity)` over `[0, w)^r`, where the
/// exponent is `Σ_l coef(l) j_l` and the sign is `(-1)^J`.
type GroupedWeights = BTreeMap<u64, BTreeMap<i64, i64>>;

fn grouped_weights(w: u32, r: u32, coef: impl Fn(i64) -> i64) -> Result<GroupedWeights> {
    let needed = box_size(w as u64, r);
    if needed > ENUMERATION_LIMIT {
        return Err(Error::BudgetExceeded {
            needed,
            limit: ENUMERATION_LIMIT,
        });
    }
    let mut out = GroupedWeights::new();
    for j in box_indices(w, r as usize) {
        let total = j.total();
        let sign = if total % 2 == 0 { 1 } else { -1 };
        *out.entry(total)
            .or_default()
            .entry(j.weighted(&coef))
            .or_insert(0) += sign;
    }
    Ok(out)
}

fn weight_value(base: &QContext, scale: i64, exps: &BTreeMap<i64, i64>) -> ExactRational {
    exps.iter().fold(ExactRational::zero(), |acc, (e, c)| {
        acc + int(*c) * base.pow(scale * e)
    })
}

/// `T_{n,i,q}^{(h,r)}(w) = Σ_{j ∈ [0,w)^r} (-1)^{Σ j} q^{Σ_l (n+h-l-i) j_l} [Σ j]_q^i`,
/// with `[0]^0 = 1`.
pub fn t_sum(n: u32, i: u32, qc: &QContext, h: i64, r: u32, w: u32) -> Result<ExactRational> {
    let shift = n as i64 + h - i as i64;
    let groups = grouped_weights(w, r, |l| shift - l)?;
    Ok(groups
        .iter()
        .fold(ExactRational::zero(), |acc, (total, exps)| {
            let qn = if i == 0 {
                ExactRational::one()
            } else {
                pow_nz(&qc.q_number(*total as i64), i as i64)
            };
            acc + weight_value(qc, 1, exps) * qn
        }))
}

/// One side of the polynomial-level identity with inner base `q^{wa}` and
/// outer weight base `q^{wb}`:
/// `[wa]_q^n Σ_{j ∈ [0,wa)^r} (-1)^J q^{wb Σ (h-l) j_l} E_{n,q^{wa}}^{(h,r)}(wb x + (wb/wa) J)`.
fn thm3_side(sp: &SymmetryParams, wa: u32, wb: u32, flip_sign: bool) -> Result<ExactRational> {
    let p = &sp.p;
    let q = &sp.q;
    let inner = q.power_base(wa as i64)?;
    let t_inner = pow_nz(&sp.t, wa as i64 * wb as i64);
    let groups = grouped_weights(wa, p.r, |l| p.h - l)?;
    let mut sum = ExactRational::zero();
    for (total, exps) in &groups {
        let mut weight = weight_value(q, wb as i64, exps);
        if flip_sign && total % 2 == 1 {
            weight = -weight;
        }
        let pt = EvalPoint::with_base(inner.clone(), &t_inner * q.pow(wb as i64 * *total as i64));
        sum += weight * q_euler_closed(p, &pt)?;
    }
    Ok(pow_nz(&q.q_number(wa as i64), p.n as i64) * sum)
}

pub fn thm3_lhs(sp: &SymmetryParams) -> Result<ExactRational> {
    thm3_side(sp, sp.w1, sp.w2, false)
}

pub fn thm3_rhs(sp: &SymmetryParams) -> Result<ExactRational> {
    thm3_side(sp, sp.w2, sp.w1, false)
}

/// Deliberately broken right-hand side (`(-1)^J` replaced by `+1`), used to
/// confirm that the harness reports failures.
pub fn thm3_rhs_sign_flipped(sp: &SymmetryParams) -> Result<ExactRational> {
    thm3_side(sp, sp.w2, sp.w1, true)
}

pub fn check_thm3(sp: &SymmetryParams) -> Result<CheckResult> {
    Ok(CheckResult::new(thm3_lhs(sp)?, thm3_rhs(sp)?))
}

/// `Σ_i C(n,i) [wb]_q^i [wa]_q^{n-i} E_{n-i,q^{wa}}^{(h,r)}(wb x) T_{n,i,q^{wb}}^{(h,r)}(wa)`
fn thm4_side(sp: &SymmetryParams, wa: u32, wb: u32) -> Result<ExactRational> {
    let p = &sp.p;
    let q = &sp.q;
    let inner = q.power_base(wa as i64)?;
    let outer = q.power_base(wb as i64)?;
    let pt = EvalPoint::with_base(inner, pow_nz(&sp.t, wa as i64 * wb as i64));
    let qa = q.q_number(wa as i64);
    let qb = q.q_number(wb as i64);
    let mut sum = ExactRational::zero();
    for i in 0..=p.n {
        let lower = EulerParams::new(p.n - i, p.h, p.r)?;
        let c = ExactRational::from_integer(binomial(p.n as i64, i as i64));
        let e = q_euler_closed(&lower, &pt)?;
        let ts = t_sum(p.n, i, &outer, p.h, p.r, wa)?;
        sum += c * pow_nz(&qb, i as i64) * pow_nz(&qa, (p.n - i) as i64) * e * ts;
    }
    Ok(sum)
}

pub fn thm4_lhs(sp: &SymmetryParams) -> Result<ExactRational> {
    thm4_side(sp, sp.w1, sp.w2)
}

pub fn thm4_rhs(sp: &SymmetryParams) -> Result<ExactRational> {
    thm4_side(sp, sp.w2, sp.w1)
}

/// Convolution-level identity plus the side-by-side lemma tying each
/// convolution to the matching polynomial-level side.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Thm4Check {
    pub convolution: CheckResult,
    pub lemma_lhs: CheckResult,
    pub lemma_rhs: CheckResult,
}

impl Thm4Check {
    pub fn holds(&self) -> bool {
        self.convolution.equal && self.lemma_lhs.equal && self.lemma_rhs.equal
    }
}

pub fn check_thm4(sp: &SymmetryParams) -> Result<Thm4Check> {
    let l4 = thm4_lhs(sp)?;
    let r4 = thm4_rhs(sp)?;
    Ok(Thm4Check {
        convolution: CheckResult::new(l4.clone(), r4.clone()),
        lemma_lhs: CheckResult::new(l4, thm3_lhs(sp)?),
        lemma_rhs: CheckResult::new(r4, thm3_rhs(sp)?),
    })
}

/// Integral-level identity evaluated through the multivariate oracle.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cor2Check {
    pub lhs: ApproxValue,
    pub rhs: ApproxValue,
    pub thm3_lhs: ExactRational,
    pub thm3_rhs: ExactRational,
    pub pass: bool,
}

impl Cor2Check {
    pub fn combined_bound(&self) -> ExactRational {
        &self.lhs.tail_bound + &self.rhs.tail_bound
    }
}

fn cor2_side(
    sp: &SymmetryParams,
    wa: u32,
    wb: u32,
    budget: TruncationBudget,
) -> Result<ApproxValue> {
    let p = &sp.p;
    let q = &sp.q;
    let inner = q.pow(wa as i64);
    let t_inner = pow_nz(&sp.t, wa as i64 * wb as i64);
    let groups = grouped_weights(wa, p.r, |l| p.h - l)?;
    let mut value = ExactRational::zero();
    let mut bound = ExactRational::zero();
    let mut method = None;
    let mut terms_used = 0;
    for (total, exps) in &groups {
        let weight = weight_value(q, wb as i64, exps);
        let pt = EvalPoint::new(inner.clone(), &t_inner * q.pow(wb as i64 * *total as i64))?;
        let v = fermionic_integral_rd(p, &pt, budget)?;
        value += &weight * &v.value;
        bound += weight.abs() * &v.tail_bound;
        method = Some(v.method);
        terms_used = terms_used.max(v.terms_used);
    }
    let scale = pow_nz(&q.q_number(wa as i64), p.n as i64);
    Ok(ApproxValue {
        value: &value * &scale,
        tail_bound: bound * scale.abs(),
        method: method.expect("at least one multi-index"),
        terms_used,
    })
}

pub fn check_cor2(sp: &SymmetryParams, budget: TruncationBudget) -> Result<Cor2Check> {
    let lhs = cor2_side(sp, sp.w1, sp.w2, budget)?;
    let rhs = cor2_side(sp, sp.w2, sp.w1, budget)?;
    let thm3_lhs = thm3_lhs(sp)?;
    let thm3_rhs = thm3_rhs(sp)?;
    let bound = &lhs.tail_bound + &rhs.tail_bound;
    let pass = (&lhs.value - &rhs.value).abs() <= bound
        && lhs.contains(&thm3_lhs)
        && rhs.contains(&thm3_rhs);
    Ok(Cor2Check {
        lhs,
        rhs,
        thm3_lhs,
        thm3_rhs,
        pass,
    })
}

/// Soundness of certifying the polynomial-level identity by random exact
/// evaluation.
///
/// After multiplying `LHS - RHS` by `(1-q)^n`, by every factor
/// `1 + q^{w e}` of both sides' denominators and by a power of `q`, the
/// difference is a polynomial `P(q, T)` with `deg_T <= w1 w2 n` and the
/// `q`-degree bounded by [`PitCertificate::degree_q`]. For independent draws
/// of `q` and `T` whose largest point masses are `p_q` and `p_T`, a nonzero
/// `P` vanishes at one sample with probability at most
/// `deg_q p_q + deg_T p_T`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PitCertificate {
    pub degree_q: u64,
    pub degree_t: u64,
    pub per_point_failure: ExactRational,
    pub points: u32,
    pub failure_bound: ExactRational,
}

impl PitCertificate {
    pub fn new(
        sp: &SymmetryParams,
        mass_q: &ExactRational,
        mass_t: &ExactRational,
        points: u32,
    ) -> Self {
        let (degree_q, degree_t) = pit_degrees(sp.w1, sp.w2, &sp.p);
        let raw = int(degree_q as i64) * mass_q + int(degree_t as i64) * mass_t;
        let per_point_failure = if raw > ExactRational::one() {
            ExactRational::one()
        } else {
            raw
        };
        let failure_bound = pow_nz(&per_point_failure, points as i64);
        Self {
            degree_q,
            degree_t,
            per_point_failure,
            points,
            failure_bound,
        }
    }
}

/// `(deg_q, deg_T)` bounds of the cleared difference polynomial.
pub fn pit_degrees(w1: u32, w2: u32, p: &EulerParams) -> (u64, u64) {
    let r = p.r as i64;
    let n = p.n as i64;
    let (w1, w2) = (w1 as i64, w2 as i64);
    // monomial exponents of one side before clearing: weight wb Σ(h-l) j_l
    // plus wb J l from T'^l
    let side_range = |wa: i64, wb: i64| -> (i64, i64) {
        let mut lo = 0;
        let mut hi = 0;
        for l in 1..=r {
            let c = wb * (p.h - l) * (wa - 1);
            lo += c.min(0);
            hi += c.max(0);
        }
        hi += wb * r * (wa - 1) * n;
        (lo, hi)
    };
    let (lo1, hi1) = side_range(w1, w2);
    let (lo2, hi2) = side_range(w2, w1);
    let span = hi1.max(hi2) - lo1.min(lo2);
    let factors: i64 = (p.h - r..=p.h + n - 1).map(|e| (w1 + w2) * e.abs()).sum();
    let degree_q = span + 2 * factors;
    (degree_q as u64, (w1 * w2 * n) as u64)
}
