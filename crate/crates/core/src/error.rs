use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("index {index} out of range 1..={len}")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("block dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },
    #[error("truncation size mismatch: expected {expected}, got {actual}")]
    SizeMismatch { expected: usize, actual: usize },
    #[error("diagonal {offset} is empty in a truncation of size {size}")]
    EmptyDiagonal { offset: i64, size: usize },
    #[error("entry count mismatch: a {dim}x{dim} block needs {expected} entries, got {actual}")]
    EntryCount { dim: usize, expected: usize, actual: usize },
    #[error("non-finite entry {value}")]
    NonFinite { value: String },
    #[error("structure tag {tag} violated at block ({k},{j})")]
    StructureViolation { tag: String, k: usize, j: usize },
    #[error("{name} = {value} outside {range}")]
    ParameterOutOfRange {
        name: &'static str,
        value: f64,
        range: &'static str,
    },
    #[error("dense norm needs a {rows}x{rows} matrix, above the cap {cap}; use the iterative estimator")]
    DenseCapExceeded { rows: usize, cap: usize },
    #[error("probe set is empty")]
    EmptyProbeSet,
    #[error("matrix is not upper triangular: block ({k},{j}) is nonzero")]
    NotUpperTriangular { k: usize, j: usize },
    #[error("band contains negative offset {offset}")]
    NegativeBand { offset: i64 },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
}

impl Error {
    pub(crate) fn parse(line: usize, column: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            column,
            message: message.into(),
        }
    }

    /// True for errors raised by the text formats rather than by the numerics.
    pub fn is_parse(&self) -> bool {
        matches!(self, Error::Parse { .. })
    }
}
