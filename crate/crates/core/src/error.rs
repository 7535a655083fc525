//! Crate-wide error type.

use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("invalid weight matrices: {0}")]
    InvalidWeights(String),

    #[error("matrix is not strictly upper triangular at ({row}, {col})")]
    NotUpperTriangular { row: usize, col: usize },

    #[error("action set is empty")]
    EmptyActionSet,

    #[error("round {t} outside schedule horizon 1..={horizon}")]
    RoundOutOfRange { t: usize, horizon: usize },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid experiment spec: {0}")]
    InvalidSpec(String),

    #[error("traces have mismatched horizons: {0} vs {1}")]
    MismatchedHorizons(usize, usize),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: {source}")]
    Json {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io { path: path.into(), source }
    }

    pub(crate) fn json(path: impl Into<PathBuf>, source: serde_json::Error) -> Self {
        Error::Json { path: path.into(), source }
    }
}
