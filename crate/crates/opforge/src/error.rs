//! Error type shared by all modules.

use thiserror::Error;

/// Errors raised by opforge operations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OpError {
    /// A value violates a named structural invariant.
    #[error("invariant violated ({invariant}): {detail}")]
    Invariant {
        invariant: &'static str,
        detail: String,
    },
    /// An index or parameter lies outside its admissible range.
    #[error("out of range: {0}")]
    OutOfRange(String),
    /// Two objects have incompatible colours or arities.
    #[error("colour mismatch: {0}")]
    Mismatch(String),
    /// Malformed textual input.
    #[error("parse error at line {line}, token {token}: {detail}")]
    Parse {
        line: usize,
        token: usize,
        detail: String,
    },
}

impl OpError {
    pub fn invariant(invariant: &'static str, detail: impl Into<String>) -> Self {
        OpError::Invariant {
            invariant,
            detail: detail.into(),
        }
    }

    pub fn parse(token: usize, detail: impl Into<String>) -> Self {
        OpError::Parse {
            line: 1,
            token,
            detail: detail.into(),
        }
    }

    /// True for malformed input, false for domain errors.
    pub fn is_parse(&self) -> bool {
        matches!(self, OpError::Parse { .. })
    }
}

pub type Result<T> = std::result::Result<T, OpError>;
