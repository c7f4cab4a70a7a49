use thiserror::Error;

/// Crate-wide error type.
///
/// `Validation` covers malformed inputs (a failed congruence or divisibility
/// condition names the offending data); `Internal` flags arithmetic
/// postconditions that can only fail on an implementation bug, such as a
/// rationality or integrality assertion.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("validation: {0}")]
    Validation(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("fixture required: {0}")]
    FixtureRequired(String),
    #[error("not applicable: {0}")]
    Inapplicable(String),
    #[error("internal: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn validation(msg: impl Into<String>) -> Self {
        Error::Validation(msg.into())
    }

    pub fn internal(msg: impl Into<String>) -> Self {
        Error::Internal(msg.into())
    }

    /// Exit code the CLI maps this error to: 2 for bad input, 3 for bugs.
    pub fn exit_code(&self) -> u8 {
        match self {
            Error::Internal(_) => 3,
            _ => 2,
        }
    }
}
