use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("invalid label `{0}`")]
    InvalidLabel(String),

    #[error("label index {index} out of range for domain of size {size}")]
    LabelOutOfRange { index: usize, size: usize },

    #[error("domain mismatch: {0}")]
    DomainMismatch(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("malformed network: {0}")]
    Network(String),

    #[error("malformed encoding: {0}")]
    Encoding(String),

    #[error("malformed linear system: {0}")]
    LinSystem(String),

    #[error("instance too large: {0}")]
    TooLarge(String),

    #[error("unknown name `{0}`")]
    UnknownName(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("internal consistency check failed: {0}")]
    Internal(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
