use std::path::PathBuf;

use thiserror::Error;

/// CLI failure classes; the variant decides the process exit code.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("cannot write {path}: {source}")]
    Write {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: line {line}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },
    #[error(transparent)]
    Domain(#[from] evtail_core::Error),
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    /// 1 for I/O and parse failures, 2 for domain and usage violations.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Io { .. } | CliError::Write { .. } | CliError::Parse { .. } => 1,
            CliError::Domain(_) | CliError::Usage(_) => 2,
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
