use thiserror::Error;

pub type Result<T> = std::result::Result<T, PellError>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PellError {
    /// Input outside the domain of the operation (square `d`, `d < 2`, bad family parameters, ...).
    #[error("domain error: {0}")]
    Domain(String),
    /// An argument failed the equation it was promised to satisfy, or a
    /// computed result failed its post-check.
    #[error("contract violation: {0}")]
    Contract(String),
}

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(PellError::Domain(msg.into()))
}

pub(crate) fn contract<T>(msg: impl Into<String>) -> Result<T> {
    Err(PellError::Contract(msg.into()))
}
