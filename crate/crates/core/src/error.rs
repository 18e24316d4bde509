use std::path::PathBuf;

use thiserror::Error;

/// Errors produced by the library and the `qpm` front end.
#[derive(Debug, Error)]
pub enum QpmError {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid structure: {field} {reason}")]
    InvalidStructure { field: &'static str, reason: String },

    #[error("segment list is empty")]
    EmptySegments,

    #[error("no twin pair found for group {group}")]
    TwinNotFound { group: i64 },

    #[error("configuration error in `{field}`: {reason}")]
    Config { field: String, reason: String },

    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("verification failed: {0}")]
    VerificationFailed(String),
}

impl QpmError {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        QpmError::Domain(msg.into())
    }

    pub(crate) fn config(field: impl Into<String>, reason: impl Into<String>) -> Self {
        QpmError::Config {
            field: field.into(),
            reason: reason.into(),
        }
    }

    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            QpmError::Io { .. } => 2,
            QpmError::VerificationFailed(_) => 3,
            _ => 1,
        }
    }
}

pub type Result<T> = std::result::Result<T, QpmError>;
