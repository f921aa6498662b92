use thiserror::Error;

/// Failures raised by the exact kernels, the series oracles and the
/// verification harness.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("zero base raised to a negative exponent")]
    ZeroBaseWithNegativeExponent,
    #[error("rational function has a pole at q = 1")]
    PoleAtOne,
    #[error("denominator vanishes")]
    ZeroDenominator,
    #[error("singular denominator factor in closed form: {0}")]
    SingularDenominator(String),
    #[error("series diverges: {0}")]
    DivergentSeries(String),
    #[error("no convergent tail or stable extrapolation within {terms} terms")]
    NonDecreasingTail { terms: usize },
    #[error("enumeration budget exceeded: {needed} terms > {limit}")]
    BudgetExceeded { needed: u128, limit: u128 },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("configuration error: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;
