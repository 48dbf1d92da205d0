use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::finger::random_finger_move;
use crate::drawing::{DrawingMap, EmbeddingScheme, Surface};
use crate::error::{Error, Result};
use crate::graph::{EdgeId, End, Multigraph, VertexId};
use crate::map::{Genus, Sign};

/// Largest vertex or edge count accepted by the generators.
pub const MAX_GENERATED: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GenParams {
    pub vertices: usize,
    pub edges: usize,
    pub moves: usize,
    pub genus: usize,
    pub orientable: bool,
}

impl Default for GenParams {
    fn default() -> Self {
        GenParams {
            vertices: 6,
            edges: 9,
            moves: 4,
            genus: 0,
            orientable: true,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Insert {
    /// Both ends in one face, splitting it.
    Split,
    /// Both ends in one face through a crosscap.
    Twist,
    /// Ends in two different faces, joined through a handle.
    Handle,
}

/// A corner of a face: insert next to `end`, after it if `after`.
#[derive(Clone, Copy, Debug)]
struct Corner {
    vertex: VertexId,
    end: End,
    after: bool,
    frame: Sign,
}

fn corners_by_face(s: &EmbeddingScheme) -> Vec<Vec<Corner>> {
    s.faces()
        .iter()
        .map(|f| {
            f.flags
                .iter()
                .skip(1)
                .step_by(2)
                .map(|fl| {
                    let end = End { edge: fl.segment.edge, side: fl.end };
                    Corner {
                        vertex: s.graph().end_vertex(end).unwrap(),
                        end,
                        after: fl.toward_successor,
                        frame: Sign::from_bool(!fl.toward_successor),
                    }
                })
                .collect()
        })
        .collect()
}

fn insert_edge(s: &EmbeddingScheme, e: EdgeId, c1: Corner, c2: Corner, sign: Sign) -> Result<EmbeddingScheme> {
    let mut g = s.graph().clone();
    g.add_edge(e, c1.vertex, c2.vertex)?;
    let mut rots = s.rotations().clone();
    for (c, end) in [(c1, End::tail(e)), (c2, End::head(e))] {
        let rot = rots.entry(c.vertex).or_default();
        let i = rot.iter().position(|&x| x == c.end).unwrap();
        rot.insert(if c.after { i + 1 } else { i }, end);
    }
    let mut sig = s.signatures().clone();
    sig.insert(e, sign);
    EmbeddingScheme::new(g, rots, sig)
}

fn expect_genus(s: &EmbeddingScheme, want: Genus) -> Result<()> {
    let got = s.euler_genus();
    if got != want {
        return Err(Error::GenerationFailed(format!("expected {want}, built {got}")));
    }
    Ok(())
}

/// A random embedding scheme: a random tree grown by rotation insertion, then
/// extra edges inserted at random face corners so that the Euler genus climbs
/// to `genus` exactly.
pub fn random_planar_scheme<R: Rng>(rng: &mut R, params: &GenParams) -> Result<EmbeddingScheme> {
    let n = params.vertices;
    if n > MAX_GENERATED || params.edges > MAX_GENERATED {
        return Err(Error::InvalidParameter(format!("at most {MAX_GENERATED} vertices and edges")));
    }
    if n == 0 && params.edges > 0 {
        return Err(Error::InvalidParameter("edges need at least one vertex".into()));
    }
    if params.genus == 0 && !params.orientable {
        return Err(Error::InvalidParameter("Euler genus 0 must be orientable".into()));
    }
    if params.orientable && params.genus % 2 == 1 {
        return Err(Error::InvalidParameter("orientable surfaces have even Euler genus".into()));
    }
    let tree = params.edges.min(n.saturating_sub(1));
    let extra = params.edges - tree;
    let mut plan = if params.orientable {
        vec![Insert::Handle; params.genus / 2]
    } else {
        vec![Insert::Twist; params.genus]
    };
    if plan.len() > extra || (params.orientable && 2 * plan.len() > extra) {
        return Err(Error::InvalidParameter(format!(
            "{} edges are too few for Euler genus {}",
            params.edges, params.genus
        )));
    }
    plan.resize(extra, Insert::Split);
    plan.shuffle(rng);

    let mut g = Multigraph::new();
    for v in 1..=n as u32 {
        g.add_vertex(VertexId(v))?;
    }
    let mut rots: BTreeMap<VertexId, Vec<End>> = BTreeMap::new();
    let mut next = 1u32;
    for v in 2..=tree as u32 + 1 {
        let p = rng.gen_range(1..v);
        let e = EdgeId(next);
        next += 1;
        let (t, h) = if rng.gen_bool(0.5) { (p, v) } else { (v, p) };
        g.add_edge(e, VertexId(t), VertexId(h))?;
        let (pe, ve) = if t == p { (End::tail(e), End::head(e)) } else { (End::head(e), End::tail(e)) };
        let rp = rots.entry(VertexId(p)).or_default();
        let at = rng.gen_range(0..=rp.len());
        rp.insert(at, pe);
        rots.insert(VertexId(v), vec![ve]);
    }
    let mut s = EmbeddingScheme::new(g, rots, BTreeMap::new())?;
    let mut genus = Genus { euler_genus: 0, orientable: true };
    expect_genus(&s, genus)?;

    let mut pending = plan;
    while !pending.is_empty() {
        let faces = corners_by_face(&s);
        // joining two faces needs two faces in one component
        let comp = s.graph().components();
        let comp_of = |v: VertexId| comp.iter().position(|c| c.contains(&v)).unwrap();
        let multi: Vec<(usize, usize)> = (0..faces.len())
            .flat_map(|a| (a + 1..faces.len()).map(move |b| (a, b)))
            .filter(|&(a, b)| comp_of(faces[a][0].vertex) == comp_of(faces[b][0].vertex))
            .collect();
        let pos = pending
            .iter()
            .position(|&op| op != Insert::Handle || !multi.is_empty())
            .ok_or_else(|| Error::GenerationFailed("no two faces to join".into()))?;
        let op = pending.remove(pos);
        let e = EdgeId(next);
        next += 1;
        if faces.is_empty() {
            // edgeless graph: a loop at a random vertex
            let v = VertexId(rng.gen_range(1..=n as u32));
            let mut gr = s.graph().clone();
            gr.add_edge(e, v, v)?;
            let mut rots = s.rotations().clone();
            rots.insert(v, vec![End::tail(e), End::head(e)]);
            let mut sig = s.signatures().clone();
            let sign = if op == Insert::Twist { Sign::Minus } else { Sign::Plus };
            sig.insert(e, sign);
            s = EmbeddingScheme::new(gr, rots, sig)?;
        } else if op == Insert::Handle {
            let (a, b) = multi[rng.gen_range(0..multi.len())];
            let c1 = *faces[a].choose(rng).unwrap();
            let c2 = *faces[b].choose(rng).unwrap();
            let t = insert_edge(&s, e, c1, c2, c1.frame * c2.frame)?;
            s = if t.euler_genus().orientable == genus.orientable {
                t
            } else {
                insert_edge(&s, e, c1, c2, -(c1.frame * c2.frame))?
            };
        } else {
            let f = faces.choose(rng).unwrap();
            let c1 = *f.choose(rng).unwrap();
            let c2 = *f.choose(rng).unwrap();
            let sign = c1.frame * c2.frame;
            let sign = if op == Insert::Twist { -sign } else { sign };
            s = insert_edge(&s, e, c1, c2, sign)?;
        }
        match op {
            Insert::Split => {}
            Insert::Twist => {
                genus.euler_genus += 1;
                genus.orientable = false;
            }
            Insert::Handle => genus.euler_genus += 2,
        }
        expect_genus(&s, genus)?;
    }
    Ok(s)
}

/// A random drawing on the surface of the requested genus that satisfies the
/// even hypothesis: a crossing-free embedding followed by `moves` random
/// finger moves, each adding two crossings to a single edge pair.
pub fn random_even_drawing(seed: u64, params: GenParams) -> Result<DrawingMap> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let scheme = random_planar_scheme(&mut rng, &params)?;
    let surface = Surface {
        euler_genus: params.genus,
        orientable: params.orientable,
    };
    let mut d = DrawingMap::from_scheme(&scheme, surface);
    for _ in 0..params.moves {
        match random_finger_move(&d, &mut rng)? {
            Some(next) => d = next,
            None => break,
        }
    }
    let diags = d.validate();
    if !diags.is_empty() {
        return Err(Error::GenerationFailed(diags.iter().map(|x| x.to_string()).collect::<Vec<_>>().join("; ")));
    }
    Ok(d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::calculus::first_odd_pair;

    #[test]
    fn zero_moves_is_crossing_free() {
        let d = random_even_drawing(1, GenParams { moves: 0, ..GenParams::default() }).unwrap();
        assert_eq!(d.crossing_count(), 0);
        assert_eq!(d.graph().edge_count(), 9);
    }

    #[test]
    fn deterministic() {
        let p = GenParams::default();
        assert_eq!(random_even_drawing(42, p).unwrap(), random_even_drawing(42, p).unwrap());
    }

    #[test]
    fn outputs_are_even_and_on_target_surface() {
        for seed in 0..40 {
            for (genus, orientable) in [(0, true), (1, false), (2, true), (2, false), (3, false)] {
                let p = GenParams {
                    vertices: 5,
                    edges: 10,
                    moves: 5,
                    genus,
                    orientable,
                };
                let d = random_even_drawing(seed, p).unwrap();
                assert!(first_odd_pair(&d, 10_000).unwrap().is_none());
                assert_eq!(d.restrict_scheme().euler_genus(), Genus { euler_genus: genus, orientable });
                assert_eq!(d.augmented_map().unwrap().euler_genus(), Genus { euler_genus: genus, orientable });
            }
        }
    }

    #[test]
    fn bad_parameters() {
        let bad = |p: GenParams| matches!(random_even_drawing(0, p), Err(Error::InvalidParameter(_)));
        assert!(bad(GenParams { genus: 1, orientable: true, ..GenParams::default() }));
        assert!(bad(GenParams { genus: 0, orientable: false, ..GenParams::default() }));
        assert!(bad(GenParams { vertices: 4, edges: 4, genus: 4, ..GenParams::default() }));
        assert!(bad(GenParams { vertices: 100, ..GenParams::default() }));
    }

    #[test]
    fn edgeless_and_forest() {
        let d = random_even_drawing(3, GenParams { vertices: 3, edges: 0, ..GenParams::default() }).unwrap();
        assert_eq!(d.graph().edge_count(), 0);
        let d = random_even_drawing(3, GenParams { vertices: 5, edges: 2, ..GenParams::default() }).unwrap();
        assert_eq!(d.graph().edge_count(), 2);
    }
}
