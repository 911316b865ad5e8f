use thiserror::Error;

/// Failures of the exact-arithmetic engine.
///
/// Verification outcomes are never errors; they come back as reports with
/// `equal = false` and a witness.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("scalar domain mismatch: {0} vs {1}")]
    DomainMismatch(String, String),
    #[error("invalid scalar domain: {0}")]
    InvalidDomain(String),
    #[error("{value} is not an element of {domain}")]
    NotInDomain { value: String, domain: String },
    #[error("{value} is not a unit in {domain}")]
    NotAUnit { value: String, domain: String },
    #[error("cannot divide {value} by {divisor} in {domain}")]
    NonInvertibleDenominator {
        value: String,
        divisor: String,
        domain: String,
    },
    #[error("constant term must be {expected}, found {found}")]
    BadConstantTerm { expected: String, found: String },
    #[error("negative exponent {0} requires the negative-exponent flag")]
    NegativeExponent(i64),
    #[error("truncation order {have} is below the required {need}")]
    InsufficientTruncation { have: usize, need: usize },
    #[error("weight budget {budget} exceeded (needs {need})")]
    WeightBudgetExceeded { budget: u32, need: u32 },
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
