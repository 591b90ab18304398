use std::path::PathBuf;

/// Errors produced by loading, training, calibration and evaluation.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: row {row}, column {column}: {message}")]
    Parse {
        path: PathBuf,
        row: usize,
        column: String,
        message: String,
    },

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("empty input: {0}")]
    Empty(&'static str),

    #[error("need at least one positive and one negative example ({n_pos} positive, {n_neg} negative)")]
    MissingClass { n_pos: usize, n_neg: usize },

    #[error("invalid feature vector: {0}")]
    InvalidFeature(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("{operation} is not supported for {kind} models")]
    UnsupportedLoss {
        operation: &'static str,
        kind: &'static str,
    },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
