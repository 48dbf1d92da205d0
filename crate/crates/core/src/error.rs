use thiserror::Error;

use crate::graph::{EdgeId, VertexId};

fn ids(edges: &[EdgeId]) -> String {
    edges.iter().map(|e| e.to_string()).collect::<Vec<_>>().join(",")
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("enumeration exceeds the cap of {cap} items")]
    CapExceeded { cap: usize },
    #[error("unknown edge {0}")]
    UnknownEdge(EdgeId),
    #[error("unknown vertex {0}")]
    UnknownVertex(VertexId),
    #[error("duplicate edge id {0}")]
    DuplicateEdge(EdgeId),
    #[error("duplicate vertex id {0}")]
    DuplicateVertex(VertexId),
    #[error("not a cycle: {0}")]
    NotACycle(String),
    #[error("not an even subgraph: {0}")]
    NotEven(String),
    #[error("the two cycles have identical edge sets")]
    IdenticalCycles,
    #[error("sigma1 of the pair is {count}, which is even")]
    EvenPair { count: u64 },
    #[error("edge {0} is a loop and cannot be contracted")]
    LoopEdge(EdgeId),
    #[error("no loop has consecutive ends in its vertex rotation")]
    NoConsecutiveLoop,
    #[error("edge {0} is not a loop")]
    NotLoopsOnly(EdgeId),
    #[error("odd cycle pair {} / {} (sigma1 = {sigma1})", ids(first), ids(second))]
    OddPairFound {
        first: Vec<EdgeId>,
        second: Vec<EdgeId>,
        sigma1: u64,
    },
    #[error("declared surface has Euler genus {declared}, expected {expected}")]
    SurfaceMismatch { declared: usize, expected: usize },
    #[error("certificate failed: {0}")]
    CertificateFailed(String),
    #[error("the chosen strand sides are not on the given face")]
    NotSameFace,
    #[error("both strand sides belong to edge {0}")]
    SameEdge(EdgeId),
    #[error("generation failed: {0}")]
    GenerationFailed(String),
    #[error("degenerate geometry at {location}: {reason}")]
    DegenerateInput { location: String, reason: String },
    #[error("invalid drawing: {}", .0.join("; "))]
    InvalidDrawing(Vec<String>),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}
