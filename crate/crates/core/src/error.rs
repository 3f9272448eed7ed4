use thiserror::Error;

/// Errors raised by numerical routines when their preconditions fail.
#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix contains non-finite entries")]
    NonFinite,

    #[error("dimension error: {0}")]
    Dimension(String),

    #[error("right-hand side vector is zero")]
    ZeroVector,

    #[error("unknown problem name: {0:?}")]
    UnknownProblem(String),

    #[error("index out of range: {0}")]
    OutOfRange(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("numerical breakdown: {0}")]
    Breakdown(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
