//! Error type shared across the crate.

use thiserror::Error;

/// Errors reported by fallible constructors and operations.
#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// A parameter failed validation.
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter {
        /// Name of the offending parameter.
        name: &'static str,
        /// What the parameter must satisfy.
        reason: String,
    },

    /// Two arguments that must share a dimension do not.
    #[error("dimension mismatch: {context} (expected {expected}, got {got})")]
    DimensionMismatch {
        /// Where the mismatch was detected.
        context: &'static str,
        /// Expected dimension.
        expected: usize,
        /// Actual dimension.
        got: usize,
    },

    /// A string could not be parsed into the requested value.
    #[error("parse error for `{input}`: {reason}")]
    Parse {
        /// The offending input.
        input: String,
        /// Why it was rejected.
        reason: String,
    },

    /// Conditional quantities were requested for an event of probability zero.
    #[error("event has probability zero; conditional moments are undefined")]
    ZeroProbabilityEvent,
}

impl Error {
    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;
