use thiserror::Error;

use crate::geom::Point;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("coordinate ({x}, {y}) exceeds the 2^30 bound")]
    CoordinateBound { x: i64, y: i64 },
    #[error("duplicate point {0}")]
    DuplicatePoint(Point),
    #[error("degenerate segment at {0}")]
    DegenerateSegment(Point),
    #[error("vertex {0} out of range for a graph on {1} vertices")]
    VertexOutOfRange(usize, usize),
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("duplicate vertex {0} in sequence")]
    DuplicateVertex(usize),
    #[error("vertices {0} and {1} are adjacent")]
    AdjacentPair(usize, usize),
    #[error("graph is disconnected")]
    Disconnected,
    #[error("size budget exceeded: {what} ({got} > {limit})")]
    Budget {
        what: &'static str,
        got: usize,
        limit: usize,
    },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("graph is a path")]
    PathGraph,
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("assignment does not cover the invisible pairs: {0}")]
    Coverage(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
