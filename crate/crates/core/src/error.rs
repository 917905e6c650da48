use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("invalid group: {0}")]
    InvalidGroup(String),

    #[error("field index {index} out of range for first stratum of dimension {dim}")]
    FieldIndex { index: usize, dim: usize },

    #[error("non-finite value while evaluating {what} at {point:?}")]
    NonFinite { what: String, point: Vec<f64> },

    #[error("non-smooth point {point:?}: {reason}")]
    NonSmoothPoint { point: Vec<f64>, reason: String },

    #[error("domain violation at {point:?}: {reason}")]
    DomainViolation { point: Vec<f64>, reason: String },

    #[error("sign violation at {point:?}: {reason}")]
    SignViolation { point: Vec<f64>, reason: String },

    #[error("field `{0}` is declared C1 only; a second derivative was requested")]
    NotTwiceDifferentiable(String),

    #[error("invalid exponent: {0}")]
    InvalidExponent(String),

    #[error("alpha out of range: {0}")]
    AlphaOutOfRange(String),

    #[error("empty sample: {0}")]
    EmptySample(String),

    #[error("invalid domain: {0}")]
    InvalidDomain(String),

    #[error("degenerate domain: {0}")]
    DegenerateDomain(String),

    #[error("unsupported excision for tensor quadrature: {0}")]
    UnsupportedExcision(String),

    #[error("singularity {point:?} lies inside the non-excised region")]
    SingularityInDomain { point: Vec<f64> },

    #[error("zero denominator: {0}")]
    ZeroDenominator(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("parse error in `{input}`: {reason}")]
    Parse { input: String, reason: String },
}

impl Error {
    pub(crate) fn parse(input: &str, reason: impl Into<String>) -> Self {
        Error::Parse {
            input: input.to_string(),
            reason: reason.into(),
        }
    }

    /// Errors raised by the pointwise guards; samplers count these as excluded.
    pub fn is_guard_exclusion(&self) -> bool {
        matches!(self, Error::NonSmoothPoint { .. })
    }
}
