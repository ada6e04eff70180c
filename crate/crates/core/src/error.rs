use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("graph has no nodes")]
    EmptyGraph,
    #[error("graph has no edges")]
    NoEdges,
    #[error("operation requires a {expected} graph")]
    Directedness { expected: &'static str },
    #[error("node {node} out of range for graph with {n} nodes")]
    NodeOutOfRange { node: usize, n: usize },
    #[error("self-loop on node {0}")]
    SelfLoop(usize),
    #[error("graph is not (strongly) connected")]
    Disconnected,
    #[error("node {0} has no out-neighbors")]
    IsolatedNode(usize),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("calibration of {model} did not reach mean degree {target} (best {best})")]
    CalibrationFailed {
        model: &'static str,
        target: f64,
        best: f64,
    },
    #[error("rewiring left constraint violations after {attempts} swap attempts")]
    RewiringFailed { attempts: usize },
    #[error("alphabet is empty")]
    EmptyAlphabet,
    #[error("symbol {symbol} outside alphabet of size {n}")]
    SymbolOutOfRange { symbol: usize, n: usize },
    #[error("malformed bitstream: {0}")]
    MalformedStream(String),
    #[error("corrupt symbol stream: {from} -> {to} at position {position} is not an edge")]
    CorruptStream {
        position: usize,
        from: usize,
        to: usize,
    },
    #[error("length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn param(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }
}
