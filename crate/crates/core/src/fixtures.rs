//! Small hand-built drawings shared by tests, examples and the CLI.

use std::collections::BTreeMap;

use crate::drawing::{CrossingRecord, DrawingMap, EmbeddingScheme, Strand, Surface};
use crate::geo::GeometricDrawing;
use crate::graph::{EdgeId, End, Multigraph, VertexId};
use crate::map::Sign;

fn e(id: u32) -> EdgeId {
    EdgeId(id)
}

/// Edge 1 from vertex 1 to 2 with one self-crossing; edges 2 and 3 are
/// parallel from 1 to 3 and pass on the same side of the kink.
pub fn figure_eight() -> DrawingMap {
    let graph = Multigraph::from_lists([1, 2, 3], [(1, 1, 2), (2, 1, 3), (3, 1, 3)]).unwrap();
    let rotations = BTreeMap::from([
        (VertexId(1), vec![End::tail(e(1)), End::tail(e(2)), End::tail(e(3))]),
        (VertexId(2), vec![End::head(e(1))]),
        (VertexId(3), vec![End::head(e(3)), End::head(e(2))]),
    ]);
    let crossings = vec![CrossingRecord {
        id: 1,
        a: Strand { edge: e(1), position: 0 },
        b: Strand { edge: e(1), position: 1 },
        handedness: Sign::Plus,
    }];
    let signatures = BTreeMap::from([
        (e(1), vec![Sign::Plus; 3]),
        (e(2), vec![Sign::Plus]),
        (e(3), vec![Sign::Plus]),
    ]);
    DrawingMap::from_parts(graph, crossings, rotations, signatures, Surface::sphere())
}

fn complete_geo(points: &[(i64, i64)]) -> GeometricDrawing {
    let mut g = GeometricDrawing::new();
    for (i, &(x, y)) in points.iter().enumerate() {
        g.add_vertex(i as u32 + 1, x, y);
    }
    let n = points.len() as u32;
    for u in 1..=n {
        for v in u + 1..=n {
            g.add_edge(10 * u + v, u, v, &[]);
        }
    }
    g
}

/// K4 on the corners of a square, straight edges; edge `uv` has id `10u + v`.
pub fn k4_convex_geo() -> GeometricDrawing {
    complete_geo(&[(0, 0), (10, 0), (10, 10), (0, 10)])
}

/// K5 on a convex pentagon, straight edges; edge `uv` has id `10u + v`.
pub fn k5_convex_geo() -> GeometricDrawing {
    complete_geo(&[(0, 10), (10, 3), (6, -8), (-6, -8), (-10, 3)])
}

/// K3,3 with parts {1,2,3} and {4,5,6} on a hexagon. Chords 15 and 34 are
/// straight and cross once; chord 26 goes around the outside.
pub fn k33_geo() -> GeometricDrawing {
    let mut g = GeometricDrawing::new();
    let corners = [(1, 10, 0), (4, 5, 9), (2, -5, 9), (5, -10, 0), (3, -5, -9), (6, 5, -9)];
    for &(v, x, y) in &corners {
        g.add_vertex(v, x, y);
    }
    for i in 0..6 {
        let (a, b) = (corners[i].0, corners[(i + 1) % 6].0);
        let (u, v) = (a.min(b), a.max(b));
        g.add_edge(10 * u + v, u, v, &[]);
    }
    g.add_edge(15, 1, 5, &[]);
    g.add_edge(34, 3, 4, &[]);
    g.add_edge(26, 2, 6, &[(-20, 20), (-20, -20), (5, -20)]);
    g
}

fn cyclic_orders(ends: &[End]) -> Vec<Vec<End>> {
    if ends.len() <= 2 {
        return vec![ends.to_vec()];
    }
    let (first, rest) = ends.split_first().unwrap();
    let mut out = Vec::new();
    permute(rest.to_vec(), 0, &mut |p| {
        let mut rot = vec![*first];
        rot.extend_from_slice(p);
        out.push(rot);
    });
    out
}

fn permute(mut items: Vec<End>, k: usize, f: &mut impl FnMut(&[End])) {
    if k == items.len() {
        f(&items);
        return;
    }
    for i in k..items.len() {
        items.swap(k, i);
        permute(items.clone(), k + 1, f);
        items.swap(k, i);
    }
}

/// The first rotation system of K5 (vertex by vertex, in permutation order)
/// whose all-positive scheme has five faces, i.e. embeds K5 in the torus.
pub fn toroidal_k5() -> EmbeddingScheme {
    let graph = Multigraph::from_lists(
        1..=5,
        (1..=5u32).flat_map(|u| (u + 1..=5).map(move |v| (10 * u + v, u, v))),
    )
    .unwrap();
    let options: Vec<Vec<Vec<End>>> =
        graph.vertices().map(|v| cyclic_orders(&graph.ends_at(v))).collect();
    let mut choice = vec![0usize; options.len()];
    loop {
        let rotations = graph
            .vertices()
            .zip(&choice)
            .enumerate()
            .map(|(i, (v, &c))| (v, options[i][c].clone()))
            .collect();
        let scheme = EmbeddingScheme::new(graph.clone(), rotations, BTreeMap::new()).unwrap();
        let genus = scheme.euler_genus();
        if genus.euler_genus == 2 && genus.orientable {
            return scheme;
        }
        let mut k = 0;
        loop {
            choice[k] += 1;
            if choice[k] < options[k].len() {
                break;
            }
            choice[k] = 0;
            k += 1;
            assert!(k < choice.len(), "K5 embeds in the torus");
        }
    }
}

/// One vertex with two loops, both one-sided and interleaved, which embeds in
/// the projective plane.
pub fn projective_two_loops() -> EmbeddingScheme {
    let graph = Multigraph::from_lists([1], [(1, 1, 1), (2, 1, 1)]).unwrap();
    let rotations = BTreeMap::from([(
        VertexId(1),
        vec![End::tail(e(1)), End::tail(e(2)), End::head(e(1)), End::head(e(2))],
    )]);
    let signature = BTreeMap::from([(e(1), Sign::Minus), (e(2), Sign::Minus)]);
    EmbeddingScheme::new(graph, rotations, signature).unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn surface_schemes_have_expected_genus() {
        let t = toroidal_k5();
        assert_eq!(t.euler_genus(), crate::map::Genus { euler_genus: 2, orientable: true });
        assert_eq!(t.faces().len(), 5);
        let p = projective_two_loops();
        assert_eq!(p.euler_genus(), crate::map::Genus { euler_genus: 1, orientable: false });
    }
}
