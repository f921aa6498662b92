//! Summation of the alternating series behind the q-Euler representations.
//!
//! Two regimes:
//!
//! * **Truncated**: the terms are dominated by a geometric sequence with
//!   ratio below one. The partial sum is returned together with a rigorous
//!   tail bound supplied by the caller from that majorant.
//! * **Extrapolated**: the terms do not decay (weights `q^{(h-l)m}` with
//!   `h <= l`). The series is then summed in the regularized sense (its Abel
//!   sum when the terms stay bounded, the analytic continuation of the
//!   geometric components otherwise). Every series handled here has terms
//!   that are finite sums of `poly(m) * λ^m` with `λ != 1`, so the Wynn
//!   epsilon table applied to the exact partial sums becomes exactly constant
//!   once enough terms are in. Stabilization is required on three
//!   consecutive entries; the spread of those entries (zero) is reported as
//!   the bound.

use num_traits::{Signed, Zero};

use crate::arith::{add, sub, ExactRational};
use crate::error::{Error, Result};

/// Per-summation-variable cutoff: indices run over `0..terms`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TruncationBudget {
    terms: usize,
}

impl TruncationBudget {
    pub fn new(terms: usize) -> Result<Self> {
        if terms == 0 {
            return Err(Error::InvalidParameter(
                "truncation budget must be >= 1".into(),
            ));
        }
        Ok(Self { terms })
    }

    pub fn terms(&self) -> usize {
        self.terms
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Summation {
    Truncated,
    Extrapolated,
}

/// A series value with an error bound: `|true value - value| <= tail_bound`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ApproxValue {
    pub value: ExactRational,
    pub tail_bound: ExactRational,
    pub method: Summation,
    /// Number of terms (per summation variable) that entered the value.
    pub terms_used: usize,
}

impl ApproxValue {
    pub fn scaled(self, c: &ExactRational) -> Self {
        Self {
            value: &self.value * c,
            tail_bound: &self.tail_bound * c.abs(),
            ..self
        }
    }

    pub fn contains(&self, x: &ExactRational) -> bool {
        (&self.value - x).abs() <= self.tail_bound
    }
}

/// Entries of an even epsilon column that must agree before the
/// extrapolated value is accepted.
const STABLE_RUN: usize = 3;

/// Wynn epsilon extrapolation over lazily produced terms.
///
/// `term(m)` yields the `m`-th term; at most `max_terms` are requested.
pub fn extrapolate<F>(max_terms: usize, mut term: F) -> Result<ApproxValue>
where
    F: FnMut(usize) -> Result<ExactRational>,
{
    let mut partials = Vec::with_capacity(max_terms);
    let mut table = EpsilonTable::default();
    let mut offset = 0;
    let mut acc = ExactRational::zero();
    for m in 0..max_terms {
        acc = add(&acc, &term(m)?);
        partials.push(acc.clone());
        table.push(acc.clone());
        if table.spurious_block() {
            // an isolated coincidence (e.g. a zero term) stalled the table;
            // restart it one partial sum later
            offset += 1;
            table = EpsilonTable::default();
            for s in &partials[offset..] {
                table.push(s.clone());
            }
        }
        if let Some(value) = table.stable_value() {
            return Ok(ApproxValue {
                value,
                tail_bound: ExactRational::zero(),
                method: Summation::Extrapolated,
                terms_used: m + 1,
            });
        }
    }
    Err(Error::NonDecreasingTail { terms: max_terms })
}

/// Epsilon table stored by columns; column `k` holds `ε_k^{(j)}` for
/// `j = 0..len`. Columns stop growing past a zero difference.
#[derive(Default)]
struct EpsilonTable {
    cols: Vec<Vec<ExactRational>>,
    /// index of the first column that can no longer be extended
    blocked_at: Option<usize>,
}

impl EpsilonTable {
    fn push(&mut self, s: ExactRational) {
        if self.cols.is_empty() {
            self.cols.push(Vec::new());
        }
        self.cols[0].push(s);
        let mut k = 0;
        loop {
            if self.blocked_at.is_some_and(|b| k >= b) {
                break;
            }
            let len = self.cols[k].len();
            if len < 2 {
                break;
            }
            let diff = sub(&self.cols[k][len - 1], &self.cols[k][len - 2]);
            if diff.is_zero() {
                // ε_{k+1} would be infinite; column k has converged or broken down
                self.blocked_at = Some(k);
                break;
            }
            let next = if k == 0 {
                diff.recip()
            } else {
                add(&self.cols[k - 1][len - 1], &diff.recip())
            };
            if self.cols.len() == k + 1 {
                self.cols.push(Vec::new());
            }
            self.cols[k + 1].push(next);
            k += 1;
        }
    }

    /// The blocked column moved again after its zero difference.
    fn spurious_block(&self) -> bool {
        self.blocked_at.is_some_and(|b| {
            let col = &self.cols[b];
            col.len() >= 2 && col[col.len() - 1] != col[col.len() - 2]
        })
    }

    fn stable_value(&self) -> Option<ExactRational> {
        self.cols.iter().step_by(2).find_map(|col| {
            let n = col.len();
            if n < STABLE_RUN {
                return None;
            }
            let last = &col[n - 1];
            col[n - STABLE_RUN..]
                .iter()
                .all(|v| v == last)
                .then(|| last.clone())
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{int, pow_nz, rat};

    #[test]
    fn budget_must_be_positive() {
        assert!(TruncationBudget::new(0).is_err());
        assert_eq!(TruncationBudget::new(5).unwrap().terms(), 5);
    }

    #[test]
    fn grandi_series_regularizes_to_one_half() {
        let v = extrapolate(20, |m| Ok(if m % 2 == 0 { int(1) } else { int(-1) })).unwrap();
        assert_eq!(v.value, rat(1, 2));
        assert_eq!(v.method, Summation::Extrapolated);
    }

    #[test]
    fn growing_geometric_series_continues_analytically() {
        // Σ (-3)^m -> 1/(1+3)
        let v = extrapolate(20, |m| Ok(pow_nz(&int(-3), m as i64))).unwrap();
        assert_eq!(v.value, rat(1, 4));
    }

    #[test]
    fn polynomial_times_alternating_sign() {
        // Σ (m+1)(-1)^m = 1/(1+1)^2
        let v = extrapolate(30, |m| {
            Ok(int(if m % 2 == 0 { 1 } else { -1 } * (m as i64 + 1)))
        })
        .unwrap();
        assert_eq!(v.value, rat(1, 4));
    }

    #[test]
    fn mixture_of_components_is_summed_exactly() {
        // Σ [2(-1/2)^m + 5(-2/3)^m - (-4)^m] = 2/(3/2) + 5/(5/3) - 1/5
        let v = extrapolate(40, |m| {
            let m = m as i64;
            Ok(
                int(2) * pow_nz(&rat(-1, 2), m) + int(5) * pow_nz(&rat(-2, 3), m)
                    - pow_nz(&int(-4), m),
            )
        })
        .unwrap();
        assert_eq!(v.value, rat(4, 3) + int(3) - rat(1, 5));
    }

    #[test]
    fn finite_support_needs_stable_run() {
        let v = extrapolate(10, |m| Ok(if m == 0 { int(7) } else { int(0) })).unwrap();
        assert_eq!(v.value, int(7));
        assert_eq!(v.terms_used, STABLE_RUN);
    }

    #[test]
    fn survives_an_isolated_zero_term() {
        // geometric series with the m=1 term knocked out
        let v = extrapolate(30, |m| {
            Ok(if m == 1 {
                int(0)
            } else {
                pow_nz(&rat(-1, 2), m as i64)
            })
        })
        .unwrap();
        // Σ (-1/2)^m minus the m=1 term (-1/2)
        assert_eq!(v.value, rat(2, 3) + rat(1, 2));
    }

    #[test]
    fn gives_up_when_budget_is_too_small() {
        let r = extrapolate(4, |m| {
            Ok(pow_nz(&rat(-1, 2), m as i64) + pow_nz(&rat(-1, 3), m as i64))
        });
        assert_eq!(r, Err(Error::NonDecreasingTail { terms: 4 }));
    }
}
