use std::io;
use std::path::PathBuf;

use thiserror::Error;

/// Errors from the runner, each mapped to a process exit code.
#[derive(Debug, Error)]
pub enum CliError {
    /// A configuration value failed validation before any computation ran.
    #[error("invalid --{field}: {reason}")]
    Config {
        /// Flag name without the leading dashes.
        field: &'static str,
        /// What was wrong with it.
        reason: String,
    },
    /// Reading or writing an artifact failed.
    #[error("{path}: {source}")]
    Io {
        /// The file involved.
        path: PathBuf,
        /// Underlying error.
        #[source]
        source: io::Error,
    },
    /// A CSV file could not be parsed.
    #[error("{path}: {reason}")]
    Format {
        /// The file involved.
        path: PathBuf,
        /// What was wrong with it.
        reason: String,
    },
    /// A numerical routine rejected its input.
    #[error(transparent)]
    Numeric(#[from] opuc_core::Error),
}

impl CliError {
    pub(crate) fn config(field: &'static str, reason: impl Into<String>) -> Self {
        Self::Config {
            field,
            reason: reason.into(),
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: io::Error) -> Self {
        Self::Io {
            path: path.into(),
            source,
        }
    }

    /// Exit code: 2 for configuration errors, 4 for I/O and numerical failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config { .. } => exit::CONFIG,
            _ => exit::RUNTIME,
        }
    }
}

/// Process exit codes.
pub mod exit {
    /// Everything passed.
    pub const PASS: i32 = 0;
    /// A property check found a violation.
    pub const VIOLATION: i32 = 1;
    /// The configuration was rejected.
    pub const CONFIG: i32 = 2;
    /// A trend classification came out INCONCLUSIVE.
    pub const INCONCLUSIVE: i32 = 3;
    /// I/O or numerical failure.
    pub const RUNTIME: i32 = 4;
}

/// Result alias for the runner.
pub type Result<T> = std::result::Result<T, CliError>;
