use thiserror::Error;

/// Errors shared by every module of the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("node ({x}, {y}) is out of bounds or blocked")]
    InvalidNode { x: i32, y: i32 },

    #[error("invalid path: {0}")]
    InvalidPath(String),

    #[error("invalid instance: {0}")]
    InvalidInstance(String),

    #[error("map format error at line {line}: {msg}")]
    MapFormat { line: usize, msg: String },

    #[error("no path from start to goal")]
    NoPath,

    #[error("parameter out of range: {0}")]
    InvalidParameter(String),

    #[error("heuristic undefined for identical nodes")]
    DegenerateHeuristic,

    #[error("cannot sample from an empty distribution")]
    EmptyDistribution,

    #[error("degenerate path: zero length and zero turns")]
    DegeneratePath,

    #[error("degenerate instance: start equals goal")]
    DegenerateInstance,

    #[error("no usable maps: every map lacks a connected pair of free cells")]
    NoUsableMaps,

    #[error("unknown edge: ({0}, {1}) -> ({2}, {3}) is not a legal move")]
    UnknownEdge(i32, i32, i32, i32),
}

pub type Result<T> = std::result::Result<T, Error>;
