use thiserror::Error;

/// Errors for dataset construction, estimation, and detection.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),

    #[error("sequence too short: {0} samples (need at least 2)")]
    SequenceTooShort(usize),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn invalid_input(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    pub fn invalid_state(msg: impl Into<String>) -> Self {
        Error::InvalidState(msg.into())
    }

    /// True for errors caused by bad user input rather than runtime failure.
    /// The CLI maps these to exit code 1 and everything else to exit code 2.
    pub fn is_invalid_input(&self) -> bool {
        !matches!(self, Error::Io(_))
    }
}
