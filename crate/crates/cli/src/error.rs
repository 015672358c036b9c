use std::path::PathBuf;

use thiserror::Error;

/// Failures of a CLI command, each mapped to a process exit code.
#[derive(Debug, Error)]
pub enum CliError {
    /// Malformed config, bad flag values, or input files that do not parse.
    #[error("{0}")]
    Invalid(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },

    #[error("{0}")]
    Infeasible(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Invalid(_) => 1,
            CliError::Io { .. } => 2,
            CliError::Infeasible(_) => 3,
        }
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }
}

impl From<gencat_core::Error> for CliError {
    fn from(e: gencat_core::Error) -> Self {
        if e.is_infeasible() {
            CliError::Infeasible(e.to_string())
        } else {
            CliError::Invalid(e.to_string())
        }
    }
}

/// Exit code for a command that finished but emitted warnings.
pub const EXIT_WARNINGS: i32 = 4;

pub type CliResult<T> = Result<T, CliError>;
