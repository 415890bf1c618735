use std::path::PathBuf;

use thiserror::Error;

/// Process exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExitCode {
    Success = 0,
    Failure = 1,
    Usage = 2,
    Violation = 3,
    Io = 4,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: line {line}: {message}")]
    Csv {
        path: PathBuf,
        line: u64,
        message: String,
    },

    #[error("{path}: {source}")]
    StateFile {
        path: PathBuf,
        #[source]
        source: tomobell_core::Error,
    },

    #[error(transparent)]
    Core(#[from] tomobell_core::Error),
}

impl CliError {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }

    pub fn exit_code(&self) -> ExitCode {
        match self {
            CliError::Usage(_) | CliError::StateFile { .. } | CliError::Csv { .. } => {
                ExitCode::Usage
            }
            CliError::Io { .. } => ExitCode::Io,
            CliError::Core(tomobell_core::Error::Io(_)) => ExitCode::Io,
            CliError::Core(_) => ExitCode::Failure,
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
