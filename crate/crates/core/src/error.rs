use thiserror::Error;

/// Errors produced by the solver toolkit.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("non-finite entry at flat index {0}")]
    NonFinite(usize),

    #[error("negative radicand {value} at component {index}: iterate left the nonnegative cone")]
    NegativeRadicand { index: usize, value: f64 },

    #[error("diagonal entry a_{{{index}...}} = {value} is not normalizable (must be positive, or exactly 1 where unit diagonal is required)")]
    Normalization { index: usize, value: f64 },

    #[error("E-matrix is singular (zero pivot in column {column})")]
    SingularEMatrix { column: usize },

    #[error("splitting variant not defined here: {0}")]
    VariantDomain(String),

    #[error("splitting does not reconstruct its tensor (max abs diff {max_diff:e})")]
    Reconstruction { max_diff: f64 },

    #[error("tensor has a negative entry {value} at flat index {index}")]
    NotNonnegative { index: usize, value: f64 },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("duplicate COO entry at index {0:?}")]
    DuplicateEntry(Vec<usize>),

    #[error("format error: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
