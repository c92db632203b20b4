use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("dimension error: {0}")]
    Dimension(String),
    #[error("algebra mismatch: {0}")]
    AlgebraMismatch(String),
    #[error("invalid field: {0}")]
    InvalidField(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid structure: {0}")]
    Invalid(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("window too small: {0}")]
    Window(String),
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
