use std::path::PathBuf;

use thiserror::Error;

/// Errors produced by instance construction, selection, checking and I/O.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),

    #[error("non-finite coordinate at point {point}, axis {axis}")]
    NonFinite { point: usize, axis: usize },

    #[error("invalid instance: {0}")]
    InvalidInstance(String),

    #[error("insufficient candidates: {candidates} candidates for k = {k}")]
    InsufficientCandidates { candidates: usize, k: usize },

    #[error("invalid outcome: {0}")]
    InvalidOutcome(String),

    #[error("j = {j} out of range for an outcome of {len} centers")]
    NearestOutOfRange { j: usize, len: usize },

    #[error("instance too large for exhaustive checking: n = {n} exceeds {limit}")]
    TooLarge { n: usize, limit: usize },

    #[error("agent-to-agent distances are unavailable for this instance")]
    NoAgentDistances,

    #[error("unknown {kind}: {name}")]
    Unknown { kind: &'static str, name: String },

    #[error("{path}: row {row}, column {column}: {message}")]
    Parse {
        path: PathBuf,
        row: usize,
        column: String,
        message: String,
    },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{0}")]
    Csv(#[from] csv::Error),

    #[error("{0}")]
    Json(#[from] serde_json::Error),

    #[error("internal invariant violated: {0}")]
    Internal(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
