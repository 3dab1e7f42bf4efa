use std::path::PathBuf;

use thiserror::Error;

use crate::triangulation::Face;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },

    #[error("tetrahedron {tet}, face {face}: {message}")]
    Gluing {
        tet: usize,
        face: Face,
        message: String,
    },

    #[error("tetrahedron {tet}: {message}")]
    Tetrahedron { tet: usize, message: String },

    #[error("edge selector {selector}: {message}")]
    EdgeSelector { selector: String, message: String },

    #[error("{what}: expected length {expected}, found {found}")]
    Dimension {
        what: &'static str,
        expected: usize,
        found: usize,
    },

    #[error("degeneration vector is not sign-definite; no ideal point is certified")]
    NotIdealPoint,

    #[error("no slope certified at this ideal point: both valuations vanish")]
    NoSlope,

    #[error("{0}")]
    Family(String),

    #[error("{0}")]
    OutOfRange(String),

    #[error("search budget: {0}")]
    Budget(String),

    #[error("internal consistency check failed: {0}")]
    Internal(String),

    #[error("malformed resume token {0:?}")]
    ResumeToken(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: {message}")]
    Manifest { path: PathBuf, message: String },
}

impl Error {
    /// Process exit code: 2 for a budget refusal, 3 for a failed internal
    /// check, 1 for everything else.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Budget(_) => 2,
            Error::Internal(_) => 3,
            _ => 1,
        }
    }

    pub(crate) fn syntax(line: usize, message: impl Into<String>) -> Self {
        Error::Syntax {
            line,
            message: message.into(),
        }
    }
}
