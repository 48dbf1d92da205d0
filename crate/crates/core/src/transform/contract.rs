use std::collections::BTreeMap;

use super::{CycleCorrespondence, SplitRecord};
use crate::drawing::{CrossingRecord, DrawingMap, Role, Strand};
use crate::error::{Error, Result};
use crate::graph::{EdgeId, End};
use crate::map::Sign;

/// Identity of a crossing in the contracted drawing.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
enum Key {
    /// An untouched crossing.
    Orig(usize),
    /// Crossing `c` of e with another edge, now against strand `i`.
    Block(usize, usize),
    /// Self-crossing `c` of e: strand `i` on the A passage meets strand `j`
    /// on the B passage.
    Grid(usize, usize, usize),
}

/// Crossing tokens in order along a curve, with one sign per segment.
#[derive(Clone, Debug)]
struct Path {
    toks: Vec<(Key, Role)>,
    sigs: Vec<Sign>,
}

impl Path {
    fn new(first: Sign) -> Self {
        Path { toks: Vec::new(), sigs: vec![first] }
    }

    fn push(&mut self, key: Key, role: Role, next: Sign) {
        self.toks.push((key, role));
        self.sigs.push(next);
    }

    fn reversed(&self) -> Path {
        let mut p = self.clone();
        p.toks.reverse();
        p.sigs.reverse();
        p
    }

    fn concat(mut self, other: Path) -> Path {
        let join = self.sigs.pop().unwrap() * other.sigs[0];
        self.sigs.push(join);
        self.sigs.extend_from_slice(&other.sigs[1..]);
        self.toks.extend(other.toks);
        self
    }
}

/// Contracts the non-loop edge `e = uv` into `v`.
///
/// The edges at u are dragged along e inside a thin strip, as parallel
/// strands ordered like the rotation at u after e's tail end. Each crossing
/// of e with another edge becomes a block of crossings with the strands, and
/// each self-crossing of e becomes a grid in which every strand meets every
/// strand once.
pub fn contract_edge(d: &DrawingMap, e: EdgeId) -> Result<(DrawingMap, CycleCorrespondence)> {
    contract_with_record(d, e).map(|(d, c, _)| (d, c))
}

pub(crate) fn contract_with_record(
    d: &DrawingMap,
    e: EdgeId,
) -> Result<(DrawingMap, CycleCorrespondence, SplitRecord)> {
    let g = d.graph();
    let (u, v) = g.endpoints(e).ok_or(Error::UnknownEdge(e))?;
    if u == v {
        return Err(Error::LoopEdge(e));
    }
    let table = d.slot_table();
    let crossings = d.crossings();

    let rot_u = d.rotation(u);
    let at = rot_u.iter().position(|&x| x == End::tail(e)).expect("valid rotation");
    let bundle: Vec<End> = rot_u[at + 1..].iter().chain(&rot_u[..at]).copied().collect();
    let k = bundle.len();
    let dir: Vec<Sign> = bundle.iter().map(|x| Sign::from_bool(x.side == 1)).collect();

    let esig = d.segment_signs(e).to_vec();
    let eslots = &table[&e];
    let slot_of: BTreeMap<(usize, Role), usize> =
        eslots.iter().enumerate().map(|(p, &(c, r))| ((c, r), p)).collect();
    // orientation transport from u up to each slot of e
    let mut transport = Vec::with_capacity(eslots.len());
    let mut t = Sign::Plus;
    for s in &esig[..eslots.len()] {
        t *= *s;
        transport.push(t);
    }

    // Strand order in which a curve crossing e's passage `(c, role)` meets the
    // strands. Strand 0 runs on the left of u -> v in u's frame.
    let meet = |c: usize, role: Role| -> Vec<usize> {
        let h = crossings[c].handedness;
        let right_to_left = match role {
            Role::A => h == Sign::Plus,
            Role::B => h == Sign::Minus,
        };
        let p = slot_of[&(c, role)];
        if right_to_left ^ (transport[p] == Sign::Minus) {
            (0..k).rev().collect()
        } else {
            (0..k).collect()
        }
    };

    let strand_path = |i: usize| -> Path {
        let mut path = Path::new(esig[0]);
        for (p, &(c, r)) in eslots.iter().enumerate() {
            if crossings[c].is_self_crossing() {
                for j in meet(c, r.other()) {
                    let key = match r {
                        Role::A => Key::Grid(c, i, j),
                        Role::B => Key::Grid(c, j, i),
                    };
                    path.push(key, r, Sign::Plus);
                }
            } else {
                path.push(Key::Block(c, i), r, Sign::Plus);
            }
            *path.sigs.last_mut().unwrap() = esig[p + 1];
        }
        path
    };
    let strands: Vec<Path> = (0..k).map(strand_path).collect();

    let mut paths: BTreeMap<EdgeId, Path> = BTreeMap::new();
    for (f, tail, head) in g.edges() {
        if f == e {
            continue;
        }
        let fsig = d.segment_signs(f);
        let mut path = Path::new(fsig[0]);
        for (q, &(c, r)) in table[&f].iter().enumerate() {
            if d.strand(c, r.other()).edge == e {
                if k == 0 {
                    *path.sigs.last_mut().unwrap() *= fsig[q + 1];
                    continue;
                }
                for i in meet(c, r.other()) {
                    path.push(Key::Block(c, i), r, Sign::Plus);
                }
                *path.sigs.last_mut().unwrap() = fsig[q + 1];
            } else {
                path.push(Key::Orig(c), r, fsig[q + 1]);
            }
        }
        if tail == u {
            let i = bundle.iter().position(|&x| x == End::tail(f)).unwrap();
            path = strands[i].reversed().concat(path);
        }
        if head == u {
            let i = bundle.iter().position(|&x| x == End::head(f)).unwrap();
            path = path.concat(strands[i].clone());
        }
        paths.insert(f, path);
    }

    let mut slots: BTreeMap<Key, [Option<Strand>; 2]> = BTreeMap::new();
    for (&f, path) in &paths {
        for (pos, &(key, role)) in path.toks.iter().enumerate() {
            slots.entry(key).or_default()[(role == Role::B) as usize] = Some(Strand { edge: f, position: pos });
        }
    }
    let new_crossings: Vec<CrossingRecord> = slots
        .into_iter()
        .enumerate()
        .map(|(n, (key, [a, b]))| {
            let handedness = match key {
                Key::Orig(c) => crossings[c].handedness,
                Key::Block(c, i) => crossings[c].handedness * dir[i],
                Key::Grid(c, i, j) => crossings[c].handedness * dir[i] * dir[j],
            };
            CrossingRecord {
                id: n as u32 + 1,
                a: a.expect("every crossing has an A strand"),
                b: b.expect("every crossing has a B strand"),
                handedness,
            }
        })
        .collect();

    let mut out = d.clone();
    let dragged: Vec<_> = g
        .edges()
        .filter(|&(f, t, h)| f != e && (t == u || h == u))
        .collect();
    let rot_v = d.rotation(v).to_vec();
    let anchor = if rot_v.len() > 1 {
        let i = rot_v.iter().position(|&x| x == End::head(e)).unwrap();
        Some(rot_v[(i + rot_v.len() - 1) % rot_v.len()])
    } else {
        None
    };
    let lambda = d.edge_signature(e);
    {
        let (graph, cross, rots, sigs) = out.parts_mut();
        graph.remove_edge(e);
        for &(f, t, h) in &dragged {
            let nt = if t == u { v } else { t };
            let nh = if h == u { v } else { h };
            graph.set_endpoints(f, nt, nh);
        }
        graph.remove_vertex(u);
        *cross = new_crossings;
        rots.remove(&u);
        let mut seq = bundle.clone();
        if lambda == Sign::Minus {
            seq.reverse();
        }
        let rv = rots.get_mut(&v).unwrap();
        let i = rv.iter().position(|&x| x == End::head(e)).unwrap();
        rv.splice(i..=i, seq);
        sigs.remove(&e);
        for (f, path) in paths {
            sigs.insert(f, path.sigs);
        }
    }
    out.normalize_rotations();
    out.canonicalize_crossings();

    let record = SplitRecord {
        edge: e,
        removed: u,
        kept: v,
        bundle,
        signature: lambda,
        anchor,
        dragged,
    };
    let corr = CycleCorrespondence {
        contracted: e,
        merged: (u, v),
    };
    Ok((out, corr, record))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::calculus::{check_hypothesis, sigma1, CrossingTable};
    use crate::fixtures;
    use crate::geo::{ingest, random_geometric_drawing, GeoParams};
    use crate::graph::{cycles, EdgeSet};
    use crate::transform::UndoStack;
    use crate::transform::UndoAction;

    fn set(ids: &[u32]) -> EdgeSet {
        ids.iter().map(|&i| EdgeId(i)).collect()
    }

    /// Every cycle pair whose images stay distinct cycles keeps its σ₁ parity.
    fn assert_parity_preserved(d: &DrawingMap, e: EdgeId) {
        let (d2, corr) = contract_edge(d, e).unwrap();
        assert!(d2.validate().is_empty(), "contracting {e}: {:?}", d2.validate());
        let before = CrossingTable::new(d);
        let after = CrossingTable::new(&d2);
        let cs = cycles(d.graph(), 10_000).unwrap();
        let images: Vec<_> = cs.iter().map(|c| corr.image(d2.graph(), c)).collect();
        for i in 0..cs.len() {
            for j in i + 1..cs.len() {
                let (Some(a), Some(b)) = (&images[i], &images[j]) else { continue };
                if a == b {
                    continue;
                }
                let s = before.sigma1(&before.mask(cs[i].edges()).unwrap(), &before.mask(cs[j].edges()).unwrap());
                let t = after.sigma1(&after.mask(a.edges()).unwrap(), &after.mask(b.edges()).unwrap());
                assert_eq!(s % 2, t % 2, "edge {e}, cycles {:?} {:?}", cs[i].edge_list(), cs[j].edge_list());
            }
        }
    }

    #[test]
    fn figure_eight_tails_cross_twice() {
        let d = fixtures::figure_eight();
        let (d2, _) = contract_edge(&d, EdgeId(1)).unwrap();
        assert!(d2.validate().is_empty(), "{:?}", d2.validate());
        assert_eq!(sigma1(&d2, &set(&[2]), &set(&[3])).unwrap(), 2);
        assert_eq!(d2.crossing_count(), 4);
        assert_eq!(d2.slot_count(EdgeId(2)), 4);
        assert_eq!(d2.augmented_map().unwrap().euler_genus().euler_genus, 0);
    }

    #[test]
    fn triangle_contraction() {
        let mut g = crate::geo::GeometricDrawing::new();
        g.add_vertex(1, 0, 0).add_vertex(2, 4, 0).add_vertex(3, 0, 4);
        g.add_edge(1, 1, 2, &[]).add_edge(2, 2, 3, &[]).add_edge(3, 3, 1, &[]);
        let d = ingest(&g).unwrap();
        let (d2, corr) = contract_edge(&d, EdgeId(1)).unwrap();
        assert_eq!(d2.graph().vertex_count(), 2);
        assert_eq!(d2.graph().edge_count(), 2);
        assert_eq!(d2.crossing_count(), 0);
        assert_eq!(d2.augmented_map().unwrap().euler_genus().euler_genus, 0);
        assert_eq!(corr.merged, (crate::graph::VertexId(1), crate::graph::VertexId(2)));
    }

    #[test]
    fn loops_and_unknown_edges_are_rejected() {
        let d = fixtures::figure_eight();
        assert_eq!(contract_edge(&d, EdgeId(7)).unwrap_err(), Error::UnknownEdge(EdgeId(7)));
        let d2 = contract_edge(&d, EdgeId(2)).unwrap().0;
        assert_eq!(contract_edge(&d2, EdgeId(3)).unwrap_err(), Error::LoopEdge(EdgeId(3)));
    }

    #[test]
    fn k4_parity_matrix_is_preserved() {
        let d = ingest(&fixtures::k4_convex_geo()).unwrap();
        for e in d.graph().edge_ids().collect::<Vec<_>>() {
            assert_parity_preserved(&d, e);
        }
        let (d2, _) = contract_edge(&d, EdgeId(12)).unwrap();
        let r = check_hypothesis(&d2, 1000).unwrap();
        assert!(!r.is_even());
    }

    #[test]
    fn geometric_contractions_stay_planar_and_preserve_parity() {
        for seed in 0..25 {
            let d = ingest(&random_geometric_drawing(seed, GeoParams::default()).unwrap()).unwrap();
            for (e, t, h) in d.graph().edges().collect::<Vec<_>>() {
                if t == h {
                    continue;
                }
                assert_parity_preserved(&d, e);
                let (d2, _) = contract_edge(&d, e).unwrap();
                assert_eq!(d2.augmented_map().unwrap().euler_genus().euler_genus, 0, "seed {seed} edge {e}");
            }
        }
    }

    #[test]
    fn contraction_commutes_with_restriction() {
        for seed in 0..10 {
            let d = ingest(&random_geometric_drawing(seed, GeoParams::default()).unwrap()).unwrap();
            for (e, t, h) in d.graph().edges().collect::<Vec<_>>() {
                if t == h {
                    continue;
                }
                let (d2, _, rec) = contract_with_record(&d, e).unwrap();
                let mut stack = UndoStack::default();
                stack.push(UndoAction::Split(rec));
                assert_eq!(stack.rewind(&d2.restrict_scheme()).unwrap(), d.restrict_scheme());
            }
        }
    }
}
