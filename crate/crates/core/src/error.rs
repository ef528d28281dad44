use thiserror::Error;

/// Validation and precondition failures across the toolkit.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("vertex count must be positive")]
    EmptyGraph,

    #[error("edge {edge:?} references a vertex outside [1, {n}]")]
    VertexOutOfRange { edge: Vec<usize>, n: usize },

    #[error("edge {edge:?} repeats a vertex")]
    DegenerateEdge { edge: Vec<usize> },

    #[error("hyperedge {edge:?} has {len} vertices; only pairs and triples are supported")]
    UnsupportedEdgeSize { edge: Vec<usize>, len: usize },

    #[error("vertex index {index} outside [1, {n}]")]
    IndexOutOfRange { index: usize, n: usize },

    #[error("size mismatch: expected {expected} qubits, got {actual}")]
    SizeMismatch { expected: usize, actual: usize },

    #[error("invalid setting vector {0:?}: expected a string of 0/1 characters")]
    InvalidSetting(String),

    #[error("invalid Pauli word {0:?}")]
    InvalidPauli(String),

    #[error("product of anticommuting Pauli words is not Hermitian")]
    NonHermitianProduct,

    #[error("operator is not a tensor product of Pauli operators")]
    NotPauli,

    #[error("parameter {name} = {value} outside {range}")]
    OutOfRange {
        name: &'static str,
        value: f64,
        range: &'static str,
    },

    #[error("n = {n} must be even")]
    OddQubitCount { n: usize },

    #[error("n = {n} is too small; need at least {min}")]
    TooFewQubits { n: usize, min: usize },

    #[error("n = {n} exceeds the supported maximum {max}")]
    TooManyQubits { n: usize, max: usize },

    #[error("Hamming weight {wt} exceeds n = {n}")]
    WeightOutOfRange { wt: usize, n: usize },

    #[error("n = {n} is below the certification minimum {min}; enable the small-n regime explicitly")]
    BelowCertificationRegime { n: usize, min: usize },

    #[error("internal check failed: {0}")]
    CheckFailed(String),

    #[error("malformed input: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_range(
    name: &'static str,
    value: f64,
    ok: bool,
    range: &'static str,
) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::OutOfRange { name, value, range })
    }
}
