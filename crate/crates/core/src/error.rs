use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("not a power series: denominator vanishes at x = 0")]
    NotPowerSeries,
    #[error("the zero series has no order")]
    ZeroOrder,
    #[error("cannot parse scalar {input:?}: {reason}")]
    Parse { input: String, reason: String },
    #[error("invalid path parameters: {0}")]
    InvalidPathParams(String),
    #[error("invalid i-t-config: {0}")]
    InvalidConfig(String),
    #[error("enumeration budget of {budget} exceeded")]
    BudgetExceeded { budget: u64 },
    #[error("sequence too short: need {needed} terms, have {available}")]
    InsufficientTerms { needed: usize, available: usize },
    #[error("no canonical form: {0}")]
    Canonicalize(CanonicalizeError),
    #[error("quadratic transformation requires u(0) = 1")]
    NotNormalized,
    #[error("invalid functional equation: {0}")]
    InvalidEquation(String),
    #[error("unknown acceptance criterion {0:?}")]
    UnknownCriterion(String),
}

/// Why a quadratic form could not be put into the form F = x^d / (u + x^k v F).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum CanonicalizeError {
    #[error("b(0) = 0, no power-series branch is singled out")]
    LinearTermVanishesAtZero,
    #[error("a = 0, the equation is linear and its solution is rational")]
    Linear,
    #[error("c = 0, the only power-series solution is 0")]
    ZeroSolution,
    #[error("k = 0, the solution is not unique")]
    NonUnique,
}

impl From<CanonicalizeError> for Error {
    fn from(e: CanonicalizeError) -> Self {
        Error::Canonicalize(e)
    }
}

pub type Result<T> = std::result::Result<T, Error>;
