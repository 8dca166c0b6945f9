//! Crate-wide error type.
//!
//! Every fallible operation returns [`Error`]. The CLI maps the variants to
//! process exit codes: `BudgetExceeded` -> 2, `InvalidInput` / `Parse` -> 3,
//! everything else -> 1.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// A closure, enumeration or search outgrew its configured budget.
    /// `stage` names the computation that gave up.
    #[error("budget exceeded in {stage}: {detail} (limit {limit})")]
    BudgetExceeded {
        stage: &'static str,
        detail: String,
        limit: usize,
    },

    /// Structurally or semantically invalid input (bad container, unknown
    /// symbol, violated type invariant, ...).
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// Parse error with location information for container files.
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    /// An internal consistency check failed. Indicates a bug or an input
    /// outside the supported theory (reported honestly rather than masked).
    #[error("internal error: {0}")]
    Internal(String),
}

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    pub fn internal(msg: impl Into<String>) -> Self {
        Error::Internal(msg.into())
    }

    pub fn budget(stage: &'static str, detail: impl Into<String>, limit: usize) -> Self {
        Error::BudgetExceeded {
            stage,
            detail: detail.into(),
            limit,
        }
    }

    /// Exit code used by the CLI and the FFI layer.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::BudgetExceeded { .. } => 2,
            Error::InvalidInput(_) | Error::Parse { .. } => 3,
            Error::Internal(_) => 1,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
