use thiserror::Error;

/// Errors raised anywhere in the library.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("polynomial is reducible over Q; factor {factor}")]
    Reducible { factor: String },

    #[error("root certification failed at {bits} bits: {reason}")]
    Precision { bits: u32, reason: String },

    #[error("unsupported prime {p}: {reason}")]
    UnsupportedPrime { p: u64, reason: String },

    #[error("valuation of zero is infinite")]
    InfiniteValuation,

    #[error("operation not supported: {0}")]
    Unsupported(String),

    #[error("matrix is singular")]
    Singular,

    #[error("degenerate eigenvalue: {0}")]
    DegenerateEigenvalue(String),

    #[error("classification indeterminate at working precision: {0}")]
    Indeterminate(String),

    #[error("invalid quaternion algebra data: {0}")]
    Algebra(String),

    #[error("field mismatch: {0}")]
    FieldMismatch(String),

    #[error("parse error in {field}: {reason}")]
    Parse { field: String, reason: String },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn param(msg: impl Into<String>) -> Self {
        Error::Parameter(msg.into())
    }
}
