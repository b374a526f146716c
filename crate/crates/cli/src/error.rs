use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {message}")]
    Parse { path: PathBuf, message: String },

    #[error("{0}")]
    Usage(String),

    #[error(transparent)]
    Model(#[from] mccdma::Error),

    #[error("no equilibrium found")]
    NoEquilibrium,

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

impl CliError {
    /// Process exit status for this error.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Io { .. } => exit::IO,
            CliError::Parse { .. } | CliError::Usage(_) => exit::USAGE,
            CliError::Model(mccdma::Error::NoSignChange { .. }) => exit::SOLVER,
            CliError::Model(mccdma::Error::Infeasible { .. }) => exit::INFEASIBLE,
            CliError::Model(_) => exit::USAGE,
            CliError::NoEquilibrium => exit::NO_EQUILIBRIUM,
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn parse(path: impl Into<PathBuf>, message: impl Into<String>) -> Self {
        CliError::Parse {
            path: path.into(),
            message: message.into(),
        }
    }
}

pub mod exit {
    pub const OK: u8 = 0;
    pub const IO: u8 = 1;
    /// Malformed arguments, config or data files.
    pub const USAGE: u8 = 2;
    pub const SOLVER: u8 = 3;
    pub const INFEASIBLE: u8 = 4;
    pub const NO_EQUILIBRIUM: u8 = 5;
}
