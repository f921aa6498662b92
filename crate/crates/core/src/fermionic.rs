//! Brute-force oracles for the fermionic integral
//! `I_{-1}(f) = 2 · Σ_{y >= 0} (-1)^y f(y)` (summed in the sense of
//! [`crate::series`]) over integrands `y ↦ Q^{a y} [y + x]_Q^n`.
//!
//! The multivariate oracle integrates one variable at a time, outermost
//! variable first, and shares no summation code with
//! [`crate::euler::q_euler_multisum`]. Inner integrals are cached by the
//! sum of the outer variables, which is all they depend on.

use std::cell::RefCell;
use std::collections::HashMap;

use num_traits::{One, Zero};

use crate::arith::{int, pow_nz, product, ExactRational, LazySum};
use crate::check::ApproxCheckResult;
use crate::error::{Error, Result};
use crate::euler::{box_tail_bound, EulerParams, EvalPoint, ENUMERATION_LIMIT};
use crate::multi_index::box_size;
use crate::qcore::QContext;
use crate::series::{extrapolate, ApproxValue, Summation, TruncationBudget};

/// Integrand `y ↦ Q^{a·y} [y + x]_Q^n` with `Q^x` given as `c_t`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntegrandSpec {
    pub a: i64,
    pub n: u32,
    pub c_t: ExactRational,
}

impl IntegrandSpec {
    pub fn new(a: i64, n: u32, c_t: ExactRational) -> Self {
        Self { a, n, c_t }
    }

    pub fn eval(&self, ctx: &QContext, y: i64) -> ExactRational {
        let base =
            (ExactRational::one() - ctx.pow(y) * &self.c_t) / (ExactRational::one() - ctx.q());
        ctx.pow(self.a * y) * pow_nz(&base, self.n as i64)
    }
}

fn alternating(y: usize) -> ExactRational {
    if y.is_multiple_of(2) {
        int(2)
    } else {
        int(-2)
    }
}

fn unit_base(ctx: &QContext) -> Result<()> {
    if !ctx.in_unit_interval() {
        return Err(Error::InvalidParameter(
            "fermionic oracle needs 0 < Q < 1".into(),
        ));
    }
    Ok(())
}

/// One-variable oracle `2 Σ_{y<M} (-1)^y f(y)`.
pub fn fermionic_integral_1d(
    spec: &IntegrandSpec,
    ctx: &QContext,
    budget: TruncationBudget,
) -> Result<ApproxValue> {
    unit_base(ctx)?;
    let m = budget.terms();
    if spec.a < 1 {
        return extrapolate(m, |y| Ok(alternating(y) * spec.eval(ctx, y as i64)));
    }
    let mut acc = LazySum::new();
    for y in 0..m {
        acc.add_product(&[&alternating(y), &spec.eval(ctx, y as i64)]);
    }
    let value = acc.finish();
    // |f(y)| <= B^n ρ^y with ρ = Q^a, B = max(1, c_t)/(1-Q)
    let one = ExactRational::one();
    let rho = ctx.pow(spec.a);
    let top = if spec.c_t > one {
        spec.c_t.clone()
    } else {
        one.clone()
    };
    let ceiling = pow_nz(&(top / (&one - ctx.q())), spec.n as i64);
    let tail_bound = int(2) * ceiling * pow_nz(&rho, m as i64) / (one - rho);
    Ok(ApproxValue {
        value,
        tail_bound,
        method: Summation::Truncated,
        terms_used: m,
    })
}

/// `r`-fold oracle `2^r Σ_{y_1..y_r} Q^{Σ (h-l) y_l} (-1)^{Σ y_l} [x + Σ y_l]_Q^n`,
/// computed as iterated one-variable integrals with `y_r` outermost.
pub fn fermionic_integral_rd(
    p: &EulerParams,
    pt: &EvalPoint,
    budget: TruncationBudget,
) -> Result<ApproxValue> {
    unit_base(&pt.base)?;
    let m = budget.terms();
    let needed = box_size(m as u64, p.r);
    if needed > ENUMERATION_LIMIT {
        return Err(Error::BudgetExceeded {
            needed,
            limit: ENUMERATION_LIMIT,
        });
    }
    let integrator = Iterated {
        pt,
        p,
        terms: m,
        truncate: p.weights_decay(),
        memo: RefCell::new(HashMap::new()),
    };
    let value = integrator.level(p.r, 0)?;
    if integrator.truncate {
        Ok(ApproxValue {
            value,
            tail_bound: box_tail_bound(p, pt, m),
            method: Summation::Truncated,
            terms_used: m,
        })
    } else {
        Ok(ApproxValue {
            value,
            tail_bound: ExactRational::zero(),
            method: Summation::Extrapolated,
            terms_used: m,
        })
    }
}

struct Iterated<'a> {
    pt: &'a EvalPoint,
    p: &'a EulerParams,
    terms: usize,
    truncate: bool,
    /// inner integrals depend on the outer variables only through their sum
    memo: RefCell<HashMap<(u32, u64), ExactRational>>,
}

impl Iterated<'_> {
    /// Integral over `y_1..y_k` of `Q^{Σ_{l<=k} (h-l) y_l} [x + s + Σ y_l]^n`,
    /// where `s` is the sum of the outer variables.
    fn level(&self, k: u32, s: u64) -> Result<ExactRational> {
        if k == 0 {
            return Ok(self.pt.shifted_power(s as i64, self.p.n));
        }
        if let Some(v) = self.memo.borrow().get(&(k, s)) {
            return Ok(v.clone());
        }
        let ctx = &self.pt.base;
        let weight = self.p.h - k as i64;
        let factors = |y: usize| -> Result<[ExactRational; 3]> {
            let inner = self.level(k - 1, s + y as u64)?;
            Ok([alternating(y), ctx.pow(weight * y as i64), inner])
        };
        let value = if self.truncate {
            let mut acc = LazySum::new();
            for y in 0..self.terms {
                let [a, b, c] = factors(y)?;
                acc.add_product(&[&a, &b, &c]);
            }
            acc.finish()
        } else {
            let term = |y: usize| -> Result<ExactRational> {
                let [a, b, c] = factors(y)?;
                Ok(product(&[&a, &b, &c]))
            };
            extrapolate(self.terms, term)?.value
        };
        self.memo.borrow_mut().insert((k, s), value.clone());
        Ok(value)
    }
}

/// `I(f_s) + (-1)^{s-1} I(f) = 2 Σ_{l<s} (-1)^{s-l-1} f(l)` with both
/// integrals from the oracle; `f_s(y) = f(y+s) = Q^{a s} · (integrand with
/// c_t scaled by Q^s)`.
pub fn check_functional_equation(
    spec: &IntegrandSpec,
    ctx: &QContext,
    shift: u32,
    budget: TruncationBudget,
) -> Result<ApproxCheckResult> {
    if shift == 0 {
        return Err(Error::InvalidParameter("shift must be >= 1".into()));
    }
    let s = shift as i64;
    let plain = fermionic_integral_1d(spec, ctx, budget)?;
    let moved = IntegrandSpec::new(spec.a, spec.n, &spec.c_t * ctx.pow(s));
    let shifted = fermionic_integral_1d(&moved, ctx, budget)?.scaled(&ctx.pow(spec.a * s));

    let sign = if shift % 2 == 1 { int(1) } else { int(-1) };
    let lhs = &shifted.value + &sign * &plain.value;
    let bound = &shifted.tail_bound + &plain.tail_bound;
    let mut rhs = ExactRational::zero();
    for l in 0..s {
        let term = int(2) * spec.eval(ctx, l);
        if (s - l - 1) % 2 == 0 {
            rhs += term;
        } else {
            rhs -= term;
        }
    }
    Ok(ApproxCheckResult::new(rhs, lhs, bound))
}
