use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    /// A constructed object failed its exact post-verification.
    #[error("construction failed: {0}")]
    Construction(String),

    #[error("format error: {0}")]
    Format(String),

    #[error("insufficient shares: need at least {needed}, got {got}")]
    InsufficientShares { needed: usize, got: usize },

    #[error("internal solver error: {0}")]
    Internal(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidArgument(msg.into()))
}
