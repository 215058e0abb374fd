use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("input of {got} bits exceeds code input length {max}")]
    InputSize { got: u64, max: u64 },

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: u64, got: u64 },

    #[error("malformed bit-string file at byte offset {offset}: {reason}")]
    Format { offset: u64, reason: String },

    #[error("instance too large for exact evaluation: m = {m} exceeds cap {cap}")]
    Capacity { m: u64, cap: u64 },

    #[error("argument outside domain: {0}")]
    Domain(String),

    #[error("degenerate parameters: {0}")]
    Degenerate(String),

    #[error("infeasible target: {0}")]
    Infeasible(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn param(msg: impl Into<String>) -> Self {
        Error::Parameter(msg.into())
    }
}
