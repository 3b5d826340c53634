use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An argument violates a documented precondition (dimensions, ranges, index sets).
    #[error("parameter error: {0}")]
    Parameter(String),

    /// A matrix lacks the structure an operation depends on.
    #[error("structure error: {0}")]
    Structure(String),

    /// SC decoding landed outside the t-ball around the received word.
    #[error("decryption failure: residual weight {residual} exceeds error weight {t}")]
    DecryptionFailure { residual: usize, t: usize },

    /// Reading or writing a report or file failed.
    #[error("i/o error: {0}")]
    Io(String),

    /// An internal consistency check failed; indicates a bug.
    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn param<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Parameter(msg.into()))
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
