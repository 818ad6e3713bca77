use thiserror::Error;

/// Errors raised by channel construction, scheme builders, verification and rate evaluation.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: String, found: String },

    #[error("infeasible channel for {scheme}: failed conditions [{}]", failed.join(", "))]
    Infeasible { scheme: String, failed: Vec<String> },

    #[error("degenerate configuration: {0}")]
    Degenerate(String),

    #[error("receiver {receiver} has no interference-free dimension for stream {stream}")]
    NoNullSpace { receiver: usize, stream: usize },

    #[error("search space too large for exhaustive enumeration: {0}")]
    SearchSpaceExceeded(String),

    #[error("unknown channel kind `{0}`")]
    UnknownChannelKind(String),

    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;
