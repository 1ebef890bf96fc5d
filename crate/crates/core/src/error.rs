use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid dimension: {0}")]
    InvalidDimension(String),

    #[error("index out of range: {0}")]
    IndexOutOfRange(String),

    #[error("shape mismatch: expected {expected}, found {found}")]
    Shape { expected: String, found: String },

    #[error("matrix is singular")]
    SingularMatrix,

    #[error("matrix is not in sp(2n): {0}")]
    NotInSp(String),

    #[error("matrix is not nilpotent")]
    NotNilpotent,

    /// The prime divides a stored denominator; retry with another prime.
    #[error("prime {prime} divides a denominator")]
    PrimeDividesDenominator { prime: u64 },

    #[error("{0} is not a prime")]
    NotPrime(u64),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
