use thiserror::Error;

/// Errors raised across the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Malformed or out-of-range input.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// The requested strategy mapping is not defined for this profile space.
    #[error("unsupported size: {0}")]
    UnsupportedSize(String),

    /// The operation is not defined for the supplied strategy (wrong recall, not deterministic, ...).
    #[error("unsupported: {0}")]
    Unsupported(String),

    /// A configured budget would be exceeded.
    #[error("resource budget exceeded: {what} requires {required}, budget is {budget}")]
    Resource {
        what: &'static str,
        required: String,
        budget: String,
    },

    /// A game or structure file could not be parsed.
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidInput(msg.into())
}
