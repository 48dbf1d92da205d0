//! Drawings of graphs on surfaces and the crossing-parity calculus for pairs
//! of cycles: σ₁, σ, Ω, edge contraction, loop removal and certificates.

pub mod calculus;
pub mod drawing;
pub mod error;
pub mod fixtures;
pub mod geo;
pub mod graph;
pub mod transform;
pub mod map;
pub mod svg;

pub use drawing::{CrossingRecord, DrawingMap, EmbeddingScheme, Strand, Surface};
pub use error::{Error, Result};
pub use graph::{Cycle, EdgeId, EdgeSet, End, EvenSubgraph, Multigraph, VertexId};
pub use map::{Genus, Sign};
