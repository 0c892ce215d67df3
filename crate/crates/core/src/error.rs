use std::io;
use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("i/o error: {0}")]
    Io(#[from] io::Error),

    #[error("{path}: {source}")]
    File {
        path: PathBuf,
        #[source]
        source: io::Error,
    },

    #[error("xml error at byte {offset}: {message}")]
    Xml { offset: u64, message: String },

    #[error("empty graph: refusing to build a matrix with N = 0")]
    EmptyGraph,

    #[error("damping factor must lie in (0, 1), got {0}")]
    InvalidAlpha(f64),

    #[error("the wcpv model needs a pageview teleport vector")]
    MissingTeleport,

    #[error("teleport epsilon must lie in [0, 1], got {0}")]
    InvalidEpsilon(f64),

    #[error("invalid adjacency: {0}")]
    InvalidAdjacency(String),

    #[error("tolerance must be positive and finite, got {0}")]
    InvalidTolerance(f64),

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("score vector contains NaN at index {0}")]
    NanScore(usize),

    #[error("ranking lists cover different node universes")]
    UniverseMismatch,

    #[error("depth {j_max} outside 1..={n}")]
    DepthOutOfRange { j_max: usize, n: usize },

    #[error("conflicting concept mapping for {language}:{title}: {first} vs {second}")]
    ConceptConflict {
        language: String,
        title: String,
        first: String,
        second: String,
    },

    #[error("unknown ranking list `{0}`")]
    UnknownList(String),

    #[error("invalid snapshot: {0}")]
    Snapshot(String),

    #[error("{path}:{line}: {message}")]
    Format {
        path: String,
        line: usize,
        message: String,
    },
}

impl Error {
    pub(crate) fn file(path: impl Into<PathBuf>, source: io::Error) -> Self {
        Error::File {
            path: path.into(),
            source,
        }
    }
}
