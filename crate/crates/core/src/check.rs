use num_traits::Signed;
use serde::Serialize;

use crate::arith::ExactRational;

/// Outcome of an exact identity check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckResult {
    pub lhs: ExactRational,
    pub rhs: ExactRational,
    pub equal: bool,
}

impl CheckResult {
    pub fn new(lhs: ExactRational, rhs: ExactRational) -> Self {
        let equal = lhs == rhs;
        Self { lhs, rhs, equal }
    }
}

/// Outcome of comparing an exact value against a truncated or extrapolated one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ApproxCheckResult {
    pub exact_side: ExactRational,
    pub approx_side: ExactRational,
    pub tail_bound: ExactRational,
    pub pass: bool,
}

impl ApproxCheckResult {
    pub fn new(
        exact_side: ExactRational,
        approx_side: ExactRational,
        tail_bound: ExactRational,
    ) -> Self {
        let pass = (&exact_side - &approx_side).abs() <= tail_bound;
        Self {
            exact_side,
            approx_side,
            tail_bound,
            pass,
        }
    }

    pub fn residual(&self) -> ExactRational {
        (&self.exact_side - &self.approx_side).abs()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    PassExact,
    PassWithinBound,
    Fail,
}

impl From<&CheckResult> for Status {
    fn from(c: &CheckResult) -> Self {
        if c.equal {
            Status::PassExact
        } else {
            Status::Fail
        }
    }
}

impl From<&ApproxCheckResult> for Status {
    fn from(c: &ApproxCheckResult) -> Self {
        if c.exact_side == c.approx_side {
            Status::PassExact
        } else if c.pass {
            Status::PassWithinBound
        } else {
            Status::Fail
        }
    }
}
