use thiserror::Error;

/// Errors raised by matrix kernels, graph construction, energy functionals and checkers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not symmetric")]
    NotSymmetric,

    #[error("matrix must have order at least 1")]
    EmptyMatrix,

    #[error("matrix rows have inconsistent lengths (expected {expected}, row {row} has {found})")]
    Ragged {
        expected: usize,
        row: usize,
        found: usize,
    },

    #[error("non-finite matrix entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error(
        "Jacobi iteration did not converge after {sweeps} sweeps (off-diagonal norm {off_norm:e})"
    )]
    NoConvergence { sweeps: usize, off_norm: f64 },

    #[error("matrix is not positive semi-definite (min eigenvalue {min_eigenvalue:e})")]
    NotPsd { min_eigenvalue: f64 },

    #[error("{0} must not be empty")]
    Empty(&'static str),

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("graph is not bipartite")]
    NotBipartite,

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error(transparent)]
    Parse(#[from] ParseError),

    #[error("internal consistency check failed: {what} ({first} vs {second})")]
    Inconsistent {
        what: &'static str,
        first: f64,
        second: f64,
    },

    #[error("trial {trial}: {source}")]
    Trial {
        trial: u64,
        #[source]
        source: Box<Error>,
    },
}

/// Field-level failures when reading the graph JSON document.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParseError {
    #[error("malformed JSON: {0}")]
    Malformed(String),

    #[error("missing field `{0}`")]
    MissingField(&'static str),

    #[error("field `{field}`: expected {expected}")]
    WrongType {
        field: String,
        expected: &'static str,
    },

    #[error("field `{field}`: vertex index {index} out of range for n = {n}")]
    IndexOutOfRange { field: String, index: u64, n: usize },

    #[error("field `{field}`: self-loop on vertex {vertex}")]
    SelfLoop { field: String, vertex: usize },

    #[error("field `{field}`: duplicate edge ({0}, {1})", .edge.0, .edge.1)]
    DuplicateEdge { field: String, edge: (usize, usize) },

    #[error("field `{field}`: weight {value} is not a positive finite number")]
    NonPositiveWeight { field: String, value: f64 },

    #[error("field `weights`: expected {expected} entries, found {found}")]
    WeightCount { expected: usize, found: usize },

    #[error("field `n`: graph must have at least one vertex")]
    NoVertices,
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
