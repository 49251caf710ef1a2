use std::io;
use std::path::PathBuf;

use thiserror::Error;

/// Exit code for a bad scenario, world or parameter.
pub const EXIT_SCENARIO: i32 = 2;
/// Exit code for a file or network failure.
pub const EXIT_IO: i32 = 3;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
    #[error("{path}:{line}:{column}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        column: usize,
        message: String,
    },
    #[error("invalid scenario: {0}")]
    Scenario(String),
    #[error("invalid world: {0}")]
    World(#[from] omninav_core::sim::WorldError),
    #[error(transparent)]
    Geometry(#[from] omninav_core::GeometryError),
    #[error(transparent)]
    Control(#[from] omninav_core::ControlError),
    #[error("image {path}: {message}")]
    Image { path: PathBuf, message: String },
    #[error("network: {0}")]
    Net(#[from] io::Error),
}

impl Error {
    pub fn io(path: impl Into<PathBuf>, source: io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn parse(path: impl Into<PathBuf>, err: &serde_json::Error) -> Self {
        Error::Parse {
            path: path.into(),
            line: err.line(),
            column: err.column(),
            message: err.to_string(),
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Io { .. } | Error::Net(_) => EXIT_IO,
            Error::Image { .. } => EXIT_IO,
            _ => EXIT_SCENARIO,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
