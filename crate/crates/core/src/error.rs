//! Crate-wide error type.

use thiserror::Error;

/// Errors reported by the toolkit.
#[derive(Debug, Error)]
pub enum Error {
    /// Malformed input document or field validation failure.
    #[error("parse error: {0}")]
    Parse(String),

    /// A precondition of an operation does not hold for the given input.
    #[error("domain error: {0}")]
    Domain(String),

    /// Instance too large for an enumeration-backed operation.
    #[error("enumeration guard exceeded: n={n} > limit {limit} (set CARDCUT_GUARD_N to override in the CLI)")]
    Guard { n: usize, limit: usize },

    /// Internal consistency failure; indicates a bug, not bad input.
    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn parse(msg: impl Into<String>) -> Self {
        Error::Parse(msg.into())
    }

    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub fn internal(msg: impl Into<String>) -> Self {
        Error::Internal(msg.into())
    }
}
