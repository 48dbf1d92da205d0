use super::LoopRecord;
use crate::drawing::DrawingMap;
use crate::error::{Error, Result};
use crate::graph::{EdgeId, End};

/// Removes the smallest-id loop whose two ends are adjacent in its vertex
/// rotation, together with all crossings on it. Every edge must be a loop.
pub fn remove_consecutive_loop(d: &DrawingMap) -> Result<(DrawingMap, EdgeId, LoopRecord)> {
    let g = d.graph();
    if let Some(e) = g.edge_ids().find(|&e| !g.is_loop(e)) {
        return Err(Error::NotLoopsOnly(e));
    }
    for (e, w, _) in g.edges() {
        let rot = d.rotation(w);
        let n = rot.len();
        let i = rot.iter().position(|&x| x == End::tail(e)).unwrap();
        let j = rot.iter().position(|&x| x == End::head(e)).unwrap();
        let first = if (i + 1) % n == j {
            i
        } else if (j + 1) % n == i {
            j
        } else {
            continue;
        };
        let ends = [rot[first], rot[(first + 1) % n]];
        let anchor = (n > 2).then(|| rot[(first + n - 1) % n]);
        let record = LoopRecord {
            vertex: w,
            edge: e,
            ends,
            anchor,
            signature: d.edge_signature(e),
        };
        let mut out = d.clone();
        out.drop_crossings(|c| c.a.edge == e || c.b.edge == e);
        {
            let (graph, _, rots, sigs) = out.parts_mut();
            graph.remove_edge(e);
            rots.get_mut(&w).unwrap().retain(|x| x.edge != e);
            sigs.remove(&e);
        }
        out.normalize_rotations();
        out.canonicalize_crossings();
        return Ok((out, e, record));
    }
    Err(Error::NoConsecutiveLoop)
}

#[cfg(test)]
mod tests {
    use std::collections::BTreeMap;

    use super::*;
    use crate::drawing::{CrossingRecord, Strand, Surface};
    use crate::graph::{Multigraph, VertexId};
    use crate::map::Sign;
    use crate::transform::{UndoAction, UndoStack};

    fn two_loops(rot: [(u32, u8); 4], crossings: Vec<CrossingRecord>) -> DrawingMap {
        let g = Multigraph::from_lists([1], [(1, 1, 1), (2, 1, 1)]).unwrap();
        let rotations = BTreeMap::from([(
            VertexId(1),
            rot.iter().map(|&(e, s)| End { edge: EdgeId(e), side: s }).collect(),
        )]);
        let mut sigs = BTreeMap::new();
        for e in [1, 2] {
            let m = crossings.iter().filter(|c| c.a.edge.0 == e).count()
                + crossings.iter().filter(|c| c.b.edge.0 == e).count();
            sigs.insert(EdgeId(e), vec![Sign::Plus; m + 1]);
        }
        DrawingMap::from_parts(g, crossings, rotations, sigs, Surface::sphere())
    }

    #[test]
    fn removes_smallest_adjacent_loop() {
        let d = two_loops([(1, 0), (1, 1), (2, 0), (2, 1)], vec![]);
        let (d2, e, rec) = remove_consecutive_loop(&d).unwrap();
        assert_eq!(e, EdgeId(1));
        assert_eq!(d2.graph().edge_count(), 1);
        let mut stack = UndoStack::default();
        stack.push(UndoAction::Loop(rec));
        assert_eq!(stack.rewind(&d2.restrict_scheme()).unwrap(), d.restrict_scheme());
    }

    #[test]
    fn alternating_ends_have_no_consecutive_loop() {
        let x = CrossingRecord {
            id: 1,
            a: Strand { edge: EdgeId(1), position: 0 },
            b: Strand { edge: EdgeId(2), position: 0 },
            handedness: Sign::Minus,
        };
        let d = two_loops([(1, 0), (2, 0), (1, 1), (2, 1)], vec![x]);
        assert!(d.validate().is_empty(), "{:?}", d.validate());
        assert_eq!(remove_consecutive_loop(&d).unwrap_err(), Error::NoConsecutiveLoop);
    }

    #[test]
    fn nested_loops_round_trip() {
        let d = two_loops([(2, 0), (1, 0), (1, 1), (2, 1)], vec![]);
        assert!(d.validate().is_empty());
        let (d2, e, rec) = remove_consecutive_loop(&d).unwrap();
        assert_eq!(e, EdgeId(1));
        let (d3, e2, rec2) = remove_consecutive_loop(&d2).unwrap();
        assert_eq!(e2, EdgeId(2));
        let mut stack = UndoStack::default();
        stack.push(UndoAction::Loop(rec));
        stack.push(UndoAction::Loop(rec2));
        assert_eq!(stack.rewind(&d3.restrict_scheme()).unwrap(), d.restrict_scheme());
    }

    #[test]
    fn non_loop_edges_are_rejected() {
        let d = crate::fixtures::figure_eight();
        assert_eq!(remove_consecutive_loop(&d).unwrap_err(), Error::NotLoopsOnly(EdgeId(1)));
    }
}
