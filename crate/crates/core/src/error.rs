use thiserror::Error;

/// Errors raised by constructions and checks.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("argument error: {0}")]
    Argument(String),
    #[error("degree mismatch: {0}")]
    DegreeMismatch(String),
    #[error("invariant violation: {0}")]
    InvariantViolation(String),
    #[error("characteristic {0} divides {1}!")]
    UnsupportedCharacteristic(u64, usize),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("cutoff mismatch: {0} vs {1}")]
    CutoffMismatch(usize, usize),
    #[error("algebra mismatch: {0}")]
    AlgebraMismatch(String),
    #[error("schema violation: {0}")]
    Schema(String),
    #[error("level dimension {dim} exceeds the cap {cap}")]
    DimensionCap { dim: usize, cap: usize },
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Schema(e.to_string())
    }
}
