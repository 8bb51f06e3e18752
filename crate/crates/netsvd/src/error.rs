use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("index {index} out of range for length {len}")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("matrix must be at least 1x1 (got {n_rows}x{n_cols})")]
    EmptyMatrix { n_rows: usize, n_cols: usize },

    #[error("matrix entry at ({row}, {col}) is not finite: {value}")]
    NonFiniteEntry { row: usize, col: usize, value: f64 },

    #[error("matrix is identically zero; no leading singular direction exists")]
    ZeroMatrix,

    #[error("initialization collapsed to the zero vector after {step} power steps")]
    DegenerateInit { step: usize },

    #[error("graph edge ({i}, {j}) is invalid: {reason}")]
    InvalidEdge { i: usize, j: usize, reason: String },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("soft threshold lambda={lambda} zeroed every coordinate")]
    DegenerateShrinkage { lambda: f64 },

    #[error("update produced the all-zero vector; cannot normalize")]
    DegenerateUpdate,

    #[error("coordinate {vertex} has a zero update denominator (eta + sigma * degree = 0)")]
    ZeroDenominator { vertex: usize },

    #[error("truth support is empty; sensitivity is undefined")]
    EmptyTruthSupport,

    #[error("row {0} is constant; Pearson correlation is undefined")]
    ConstantRow(usize),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("factor {index}: {source}")]
    AtFactor {
        index: usize,
        #[source]
        source: Box<Error>,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
