use std::path::PathBuf;

use thiserror::Error;

/// Errors raised by mesh handling, fitting and element construction.
#[derive(Debug, Error)]
pub enum Error {
    #[error("{path}: line {line}: {message}")]
    Parse { path: String, line: usize, message: String },

    #[error("topology error: {0}")]
    Topology(String),

    #[error("invalid argument: {0}")]
    Argument(String),

    #[error("geometry error: {0}")]
    Geometry(String),

    #[error("ambiguous projection: {0}")]
    Ambiguous(String),

    #[error("assembly error: {0}")]
    Assembly(String),

    #[error("degenerate stencil: {0}")]
    DegenerateStencil(String),

    #[error("node set error: {0}")]
    NodeSet(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// True for failures of the numerical pipeline (as opposed to usage or I/O).
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::Geometry(_)
                | Error::Ambiguous(_)
                | Error::Assembly(_)
                | Error::DegenerateStencil(_)
                | Error::NodeSet(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
