//! Exact evaluation of the h-extended higher-order q-Euler polynomials
//! `E_{n,q}^{(h,r)}(x)` in all of their representations, brute-force
//! fermionic-integral oracles, and exact verification of the `w1 ↔ w2`
//! symmetry identities they satisfy.
//!
//! All arithmetic is over arbitrary-precision rationals. The argument `x`
//! enters only through `T = q^x`.

pub mod arith;
pub mod check;
pub mod error;
pub mod euler;
pub mod fermionic;
pub mod multi_index;
pub mod qcore;
pub mod series;
pub mod symmetry;
pub mod verify;

pub use arith::{ExactRational, LaurentPoly, RationalFunction};
pub use check::{ApproxCheckResult, CheckResult, Status};
pub use error::{Error, Result};
pub use euler::{EulerParams, EvalPoint};
pub use fermionic::IntegrandSpec;
pub use qcore::QContext;
pub use series::{ApproxValue, Summation, TruncationBudget};
pub use symmetry::SymmetryParams;
