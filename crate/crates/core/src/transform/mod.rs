//! Drawing transformations: edge contraction, loop removal, planarization,
//! surface certificates, finger moves and random even drawings.

mod contract;
mod finger;
mod generate;
mod loops;
mod planarize;

pub use contract::contract_edge;
pub use finger::{face_sides, finger_move, random_finger_move};
pub use generate::{random_even_drawing, random_planar_scheme, GenParams};
pub use loops::remove_consecutive_loop;
pub use planarize::{embed_on_surface, planarize, planarize_with_stack, SurfaceCertificate};

use std::collections::BTreeMap;

use crate::drawing::EmbeddingScheme;
use crate::error::{Error, Result};
use crate::graph::{Cycle, EdgeId, EdgeSet, End, Multigraph, VertexId};
use crate::map::Sign;

/// Maps cycles of G to their images in G / e: every edge keeps its id and
/// the contracted edge is dropped.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycleCorrespondence {
    pub contracted: EdgeId,
    /// The vertex that disappeared and the one it merged into.
    pub merged: (VertexId, VertexId),
}

impl CycleCorrespondence {
    pub fn image_edges(&self, c: &Cycle) -> EdgeSet {
        c.edges().iter().copied().filter(|&f| f != self.contracted).collect()
    }

    /// The image as a cycle of `contracted_graph`, or `None` when it is not a
    /// simple cycle there (a cycle through both ends of e but avoiding it).
    pub fn image(&self, contracted_graph: &Multigraph, c: &Cycle) -> Option<Cycle> {
        Cycle::new(contracted_graph, self.image_edges(c)).ok()
    }
}

/// Data for splitting the merged vertex again.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplitRecord {
    pub edge: EdgeId,
    pub removed: VertexId,
    pub kept: VertexId,
    /// Rotation at the removed vertex after the contracted edge's tail end.
    pub bundle: Vec<End>,
    pub signature: Sign,
    /// End preceding the contracted edge at `kept`, used when the bundle is empty.
    pub anchor: Option<End>,
    /// Original endpoints of every edge that had an end at `removed`.
    pub dragged: Vec<(EdgeId, VertexId, VertexId)>,
}

/// Data for putting a removed loop back next to its old neighbour.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LoopRecord {
    pub vertex: VertexId,
    pub edge: EdgeId,
    /// The two ends in rotation order.
    pub ends: [End; 2],
    /// End preceding the loop in the rotation, if any.
    pub anchor: Option<End>,
    pub signature: Sign,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum UndoAction {
    Split(SplitRecord),
    Loop(LoopRecord),
}

/// Inverse actions in the order they were recorded.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct UndoStack {
    pub actions: Vec<UndoAction>,
}

impl UndoStack {
    pub fn push(&mut self, a: UndoAction) {
        self.actions.push(a);
    }

    pub fn len(&self) -> usize {
        self.actions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.actions.is_empty()
    }

    /// Applies every inverse action, last first, to a scheme of the reduced graph.
    pub fn rewind(&self, scheme: &EmbeddingScheme) -> Result<EmbeddingScheme> {
        let mut s = scheme.clone();
        for a in self.actions.iter().rev() {
            s = match a {
                UndoAction::Split(r) => unsplit(&s, r)?,
                UndoAction::Loop(r) => reinsert_loop(&s, r)?,
            };
        }
        Ok(s)
    }
}

fn parts(s: &EmbeddingScheme) -> (Multigraph, BTreeMap<VertexId, Vec<End>>, BTreeMap<EdgeId, Sign>) {
    (s.graph().clone(), s.rotations().clone(), s.signatures().clone())
}

/// Splits the merged vertex of a contraction back into two.
pub fn unsplit(s: &EmbeddingScheme, r: &SplitRecord) -> Result<EmbeddingScheme> {
    let (mut g, mut rots, mut sig) = parts(s);
    g.add_vertex(r.removed)?;
    for &(f, t, h) in &r.dragged {
        if !g.has_edge(f) {
            return Err(Error::UnknownEdge(f));
        }
        g.set_endpoints(f, t, h);
    }
    g.add_edge(r.edge, r.removed, r.kept)?;

    let rot = rots.entry(r.kept).or_default();
    let mut seq = r.bundle.clone();
    if r.signature == Sign::Minus {
        seq.reverse();
    }
    if seq.is_empty() {
        let at = match r.anchor {
            Some(a) => rot.iter().position(|&x| x == a).map(|i| i + 1),
            None => Some(rot.len()),
        };
        let at = at.ok_or_else(|| Error::CertificateFailed(format!("anchor of edge {} missing", r.edge)))?;
        rot.insert(at, End::head(r.edge));
    } else {
        let n = rot.len();
        let start = rot
            .iter()
            .position(|&x| x == seq[0])
            .filter(|&i| (0..seq.len()).all(|k| rot[(i + k) % n] == seq[k]))
            .ok_or_else(|| Error::CertificateFailed(format!("bundle of edge {} is not contiguous", r.edge)))?;
        rot.rotate_left(start);
        rot.splice(0..seq.len(), [End::head(r.edge)]);
    }
    let mut rot_u = vec![End::tail(r.edge)];
    rot_u.extend_from_slice(&r.bundle);
    rots.insert(r.removed, rot_u);

    for end in &r.bundle {
        let s = sig.get_mut(&end.edge).unwrap();
        *s *= r.signature;
    }
    sig.insert(r.edge, r.signature);
    EmbeddingScheme::new(g, rots, sig)
}

fn reinsert_loop(s: &EmbeddingScheme, r: &LoopRecord) -> Result<EmbeddingScheme> {
    let (mut g, mut rots, mut sig) = parts(s);
    g.add_edge(r.edge, r.vertex, r.vertex)?;
    let rot = rots.entry(r.vertex).or_default();
    let at = match r.anchor {
        Some(a) => rot
            .iter()
            .position(|&x| x == a)
            .map(|i| i + 1)
            .ok_or_else(|| Error::CertificateFailed(format!("anchor of loop {} missing", r.edge)))?,
        None => rot.len(),
    };
    rot.splice(at..at, r.ends);
    sig.insert(r.edge, r.signature);
    EmbeddingScheme::new(g, rots, sig)
}
