use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid profile: {0}")]
    InvalidProfile(String),
    #[error("invalid context: {0}")]
    InvalidContext(String),
    #[error("unsupported case: {0}")]
    UnsupportedCase(String),
    #[error("truncation violation: {0}")]
    Truncation(String),
    #[error("invalid window: {0}")]
    InvalidWindow(String),
    #[error("ideal is not squarefree: {0}")]
    NotSquarefree(String),
    #[error("size limit exceeded: {0}")]
    SizeLimit(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
