use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("vertex index {index} out of range for {n_vertices} vertices (edge {edge})")]
    VertexOutOfRange {
        edge: usize,
        index: usize,
        n_vertices: usize,
    },

    #[error("edge {edge} has non-finite weight {weight}")]
    NonFiniteWeight { edge: usize, weight: f64 },

    #[error("edge {edge} has zero weight; zero-weight edges have zero volume and are rejected")]
    ZeroWeight { edge: usize },

    #[error("graph has no edges")]
    EmptyEdgeSet,

    #[error("dimension mismatch: expected {expected}, got {actual} ({what})")]
    DimensionMismatch {
        what: &'static str,
        expected: usize,
        actual: usize,
    },

    #[error("vertex vector must be strictly positive at edge endpoints; vertex {vertex} has {value}")]
    NonPositiveNu { vertex: usize, value: f64 },

    #[error("vertex vector must be non-negative; vertex {vertex} has {value}")]
    NegativeNu { vertex: usize, value: f64 },

    #[error("invalid phi matrix: {0}")]
    InvalidPhi(String),

    #[error("edge {edge} has non-positive volume {volume}")]
    NonPositiveVolume { edge: usize, volume: f64 },

    #[error("invalid cluster count {k} for {m} edges")]
    InvalidClusterCount { k: usize, m: usize },

    #[error("requested {k} clusters but the feature matrix has only {distinct} distinct rows")]
    TooFewDistinctRows { k: usize, distinct: usize },

    #[error("label {label} of edge {edge} is out of range for {k} clusters")]
    LabelOutOfRange { edge: usize, label: usize, k: usize },

    #[error("cluster {cluster} is empty")]
    EmptyCluster { cluster: usize },

    #[error("eigensolver did not converge: {0}")]
    EigenNonConvergence(String),

    #[error("instance too large for exhaustive search: {m} edges (limit {limit})")]
    InstanceTooLarge { m: usize, limit: usize },

    #[error("degenerate perturbation: {0}")]
    DegeneratePerturbation(String),

    #[error("{path}:{line}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error("unknown synthetic generator `{0}`")]
    UnknownGenerator(String),

    #[error("invalid generator parameters: {0}")]
    InvalidGeneratorParams(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
