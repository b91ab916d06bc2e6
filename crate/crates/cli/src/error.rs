use std::path::Path;

use thiserror::Error;

/// Failure of a subcommand, classified by process exit code.
#[derive(Debug, Error)]
pub enum CliError {
    /// Bad or incompatible flags. Exit code 1.
    #[error("{0}")]
    Usage(String),
    /// Unreadable, malformed or inconsistent input, or a generator/builder
    /// rejecting its input. Exit code 2.
    #[error("{0}")]
    Data(String),
    /// An output failed its own post-write validation. Exit code 3.
    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Data(_) => 2,
            CliError::Invariant(_) => 3,
        }
    }

    pub(crate) fn io(path: &Path, err: impl std::fmt::Display) -> Self {
        CliError::Data(format!("{}: {err}", path.display()))
    }
}

impl From<xclust::Error> for CliError {
    fn from(err: xclust::Error) -> Self {
        match err {
            xclust::Error::InvalidArgument(_) => CliError::Usage(err.to_string()),
            _ => CliError::Data(err.to_string()),
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
