use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("node {node} out of range for graph with {n} nodes")]
    NodeOutOfRange { node: u64, n: usize },

    #[error("graph size mismatch: {left} vs {right} nodes")]
    SizeMismatch { left: usize, right: usize },

    #[error("graph is disconnected")]
    Disconnected,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("HRG radius calibration failed: {0}")]
    Calibration(String),

    #[error("no cycle reached within {max_rounds} rounds (black counts of last rounds: {tail:?})")]
    Timeout { max_rounds: usize, tail: Vec<usize> },

    #[error("{path}:{line}: {msg}")]
    Parse {
        path: PathBuf,
        line: usize,
        msg: String,
    },

    #[error("{name}: expected {expected_n} nodes / {expected_m} edges, loaded {n} nodes / {m} edges")]
    ManifestMismatch {
        name: String,
        expected_n: String,
        expected_m: String,
        n: usize,
        m: usize,
    },

    #[error("invariant violated: {0}")]
    Invariant(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidParameter(msg.into())
}
