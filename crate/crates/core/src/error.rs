use std::path::PathBuf;

use thiserror::Error;

/// Error type shared by every module in the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("failed to read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}:{line}: {msg}")]
    Parse {
        path: PathBuf,
        line: usize,
        msg: String,
    },

    #[error("{path}:{line}: negative edge weight {weight}")]
    NegativeWeight {
        path: PathBuf,
        line: usize,
        weight: f64,
    },

    #[error("vertex index {0} out of range (graph has {1} vertices)")]
    VertexOutOfRange(u32, usize),

    #[error("minimum cut requires a connected graph")]
    Disconnected,

    #[error("minimum cut requires at least 2 vertices, got {0}")]
    TooSmall(usize),

    #[error("vertex set must be a nonempty proper subset of the graph")]
    EmptySide,

    #[error("k must be >= 1, got {0}")]
    InvalidK(u32),

    #[error("no motif structure: every vertex has zero motif degree")]
    EmptyMotifSignal,

    #[error("fewer than 2 active vertices; nothing to sweep")]
    TooFewActive,

    #[error("eigensolver did not converge: residual {residual:.3e} after {iterations} iterations")]
    NonConvergence { residual: f64, iterations: usize },

    #[error("decomposition base is inconsistent with the graph: {0}")]
    BaseMismatch(String),

    #[error("modularity undefined: clustered subgraph has no edges")]
    NoEdges,

    #[error("cluster induces a disconnected subgraph; prototype distance undefined")]
    DisconnectedCluster,

    #[error("empty matrices after excluding zero-degree vertices")]
    EmptyMatrices,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T> = std::result::Result<T, Error>;
