//! Error type shared by every checker.

use thiserror::Error;

/// Failure modes surfaced to callers.
///
/// `InvalidInput` names the first violation found while parsing or
/// validating user data; `Internal` flags a broken invariant inside the
/// library. The command-line front end maps them to distinct exit codes
/// (1 and 2 respectively), while a successfully computed negative verdict is
/// not an error at all.
#[derive(Debug, Error)]
pub enum TfError {
    /// The input is malformed or violates a documented precondition.
    #[error("invalid input: {0}")]
    InvalidInput(String),
    /// An internal consistency check failed; this is a bug, not bad input.
    #[error("internal invariant breach: {0}")]
    Internal(String),
}

/// Convenience alias used across the crate.
pub type TfResult<T> = Result<T, TfError>;

/// Shorthand constructor for `TfError::InvalidInput`.
pub fn invalid(msg: impl Into<String>) -> TfError {
    TfError::InvalidInput(msg.into())
}

/// Shorthand constructor for `TfError::Internal`.
pub fn internal(msg: impl Into<String>) -> TfError {
    TfError::Internal(msg.into())
}
