//! Multigraphs, simple cycles and the cycle space.
//!
//! Loops and parallel edges are allowed everywhere. Cycles and even
//! subgraphs are identified by their edge sets only; traversal direction is
//! never stored because none of the parity quantities depend on it.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::error::{Error, Result};

/// Default bound on the number of enumerated cycles.
pub const DEFAULT_CYCLE_CAP: usize = 100_000;

/// Largest cycle-space dimension `even_subgraphs` will enumerate.
pub const MAX_CYCLE_SPACE_DIM: usize = 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexId(pub u32);

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EdgeId(pub u32);

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Display for EdgeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// One end of an edge: side 0 is the tail end, side 1 the head end.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct End {
    pub edge: EdgeId,
    pub side: u8,
}

impl End {
    pub fn tail(edge: EdgeId) -> Self {
        End { edge, side: 0 }
    }

    pub fn head(edge: EdgeId) -> Self {
        End { edge, side: 1 }
    }

    pub fn opposite(self) -> Self {
        End {
            edge: self.edge,
            side: 1 - self.side,
        }
    }
}

impl fmt::Display for End {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}.{}", self.edge, self.side)
    }
}

pub type EdgeSet = BTreeSet<EdgeId>;

/// Finite multigraph with explicit vertex and edge ids.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Multigraph {
    vertices: BTreeSet<VertexId>,
    edges: BTreeMap<EdgeId, (VertexId, VertexId)>,
}

impl Multigraph {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_vertex(&mut self, v: VertexId) -> Result<()> {
        if !self.vertices.insert(v) {
            return Err(Error::DuplicateVertex(v));
        }
        Ok(())
    }

    pub fn add_edge(&mut self, e: EdgeId, tail: VertexId, head: VertexId) -> Result<()> {
        for v in [tail, head] {
            if !self.vertices.contains(&v) {
                return Err(Error::UnknownVertex(v));
            }
        }
        if self.edges.contains_key(&e) {
            return Err(Error::DuplicateEdge(e));
        }
        self.edges.insert(e, (tail, head));
        Ok(())
    }

    /// Builds a graph from plain id lists; vertices referenced by edges must be listed.
    pub fn from_lists(
        vertices: impl IntoIterator<Item = u32>,
        edges: impl IntoIterator<Item = (u32, u32, u32)>,
    ) -> Result<Self> {
        let mut g = Multigraph::new();
        for v in vertices {
            g.add_vertex(VertexId(v))?;
        }
        for (e, t, h) in edges {
            g.add_edge(EdgeId(e), VertexId(t), VertexId(h))?;
        }
        Ok(g)
    }

    pub(crate) fn remove_edge(&mut self, e: EdgeId) -> Option<(VertexId, VertexId)> {
        self.edges.remove(&e)
    }

    pub(crate) fn remove_vertex(&mut self, v: VertexId) {
        self.vertices.remove(&v);
    }

    pub(crate) fn set_endpoints(&mut self, e: EdgeId, tail: VertexId, head: VertexId) {
        self.edges.insert(e, (tail, head));
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.vertices.iter().copied()
    }

    pub fn edges(&self) -> impl Iterator<Item = (EdgeId, VertexId, VertexId)> + '_ {
        self.edges.iter().map(|(&e, &(t, h))| (e, t, h))
    }

    pub fn edge_ids(&self) -> impl Iterator<Item = EdgeId> + '_ {
        self.edges.keys().copied()
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn has_vertex(&self, v: VertexId) -> bool {
        self.vertices.contains(&v)
    }

    pub fn has_edge(&self, e: EdgeId) -> bool {
        self.edges.contains_key(&e)
    }

    pub fn endpoints(&self, e: EdgeId) -> Option<(VertexId, VertexId)> {
        self.edges.get(&e).copied()
    }

    pub fn is_loop(&self, e: EdgeId) -> bool {
        matches!(self.edges.get(&e), Some((t, h)) if t == h)
    }

    /// Vertex at which the given end sits.
    pub fn end_vertex(&self, end: End) -> Option<VertexId> {
        self.endpoints(end.edge)
            .map(|(t, h)| if end.side == 0 { t } else { h })
    }

    /// All edge ends incident to `v`, sorted. A loop contributes both ends.
    pub fn ends_at(&self, v: VertexId) -> Vec<End> {
        let mut out = Vec::new();
        for (&e, &(t, h)) in &self.edges {
            if t == v {
                out.push(End::tail(e));
            }
            if h == v {
                out.push(End::head(e));
            }
        }
        out
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.ends_at(v).len()
    }

    /// Vertex sets of the connected components, in order of smallest vertex.
    pub fn components(&self) -> Vec<BTreeSet<VertexId>> {
        let index: BTreeMap<VertexId, usize> =
            self.vertices.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let mut dsu = Dsu::new(index.len());
        for &(t, h) in self.edges.values() {
            dsu.union(index[&t], index[&h]);
        }
        let mut groups: BTreeMap<usize, BTreeSet<VertexId>> = BTreeMap::new();
        for (&v, &i) in &index {
            groups.entry(dsu.find(i)).or_default().insert(v);
        }
        let mut comps: Vec<_> = groups.into_values().collect();
        comps.sort_by_key(|c| *c.iter().next().unwrap());
        comps
    }

    /// |E| - |V| + number of components.
    pub fn cycle_space_dim(&self) -> usize {
        self.edges.len() + self.components().len() - self.vertices.len()
    }

    /// Per-vertex degree within the edge subset `edges`; loops count twice.
    pub fn subgraph_degrees(&self, edges: &EdgeSet) -> Result<BTreeMap<VertexId, usize>> {
        let mut deg = BTreeMap::new();
        for &e in edges {
            let (t, h) = self.endpoints(e).ok_or(Error::UnknownEdge(e))?;
            *deg.entry(t).or_insert(0) += 1;
            *deg.entry(h).or_insert(0) += 1;
        }
        Ok(deg)
    }
}

/// Union-find over `0..n`.
pub(crate) struct Dsu {
    parent: Vec<usize>,
}

impl Dsu {
    pub(crate) fn new(n: usize) -> Self {
        Dsu {
            parent: (0..n).collect(),
        }
    }

    pub(crate) fn find(&mut self, x: usize) -> usize {
        let mut root = x;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        let mut cur = x;
        while self.parent[cur] != root {
            let next = self.parent[cur];
            self.parent[cur] = root;
            cur = next;
        }
        root
    }

    pub(crate) fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.parent[ra.max(rb)] = ra.min(rb);
        true
    }
}

/// A simple cycle, identified by its edge set.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Cycle {
    edges: EdgeSet,
    vertices: BTreeSet<VertexId>,
}

impl Cycle {
    /// Validates that `edges` is connected and 2-regular in `g`.
    pub fn new(g: &Multigraph, edges: impl IntoIterator<Item = EdgeId>) -> Result<Self> {
        let edges: EdgeSet = edges.into_iter().collect();
        if edges.is_empty() {
            return Err(Error::NotACycle("empty edge set".into()));
        }
        let deg = g.subgraph_degrees(&edges)?;
        if let Some((v, d)) = deg.iter().find(|(_, &d)| d != 2) {
            return Err(Error::NotACycle(format!("vertex {v} has degree {d}")));
        }
        let vertices: BTreeSet<VertexId> = deg.keys().copied().collect();
        let index: BTreeMap<VertexId, usize> =
            vertices.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let mut dsu = Dsu::new(index.len());
        let mut parts = index.len();
        for &e in &edges {
            let (t, h) = g.endpoints(e).unwrap();
            if dsu.union(index[&t], index[&h]) {
                parts -= 1;
            }
        }
        if parts != 1 {
            return Err(Error::NotACycle("edge set is disconnected".into()));
        }
        Ok(Cycle { edges, vertices })
    }

    pub fn edges(&self) -> &EdgeSet {
        &self.edges
    }

    pub fn vertices(&self) -> &BTreeSet<VertexId> {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn contains(&self, e: EdgeId) -> bool {
        self.edges.contains(&e)
    }

    pub fn edge_list(&self) -> Vec<EdgeId> {
        self.edges.iter().copied().collect()
    }

    /// The two ends of cycle edges at `v` (both ends of a loop).
    pub fn ends_at(&self, g: &Multigraph, v: VertexId) -> Vec<End> {
        let mut out = Vec::with_capacity(2);
        for &e in &self.edges {
            let (t, h) = g.endpoints(e).unwrap();
            if t == v {
                out.push(End::tail(e));
            }
            if h == v {
                out.push(End::head(e));
            }
        }
        out
    }
}

/// Edge subset in which every vertex has even degree.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EvenSubgraph {
    edges: EdgeSet,
}

impl EvenSubgraph {
    pub fn new(g: &Multigraph, edges: impl IntoIterator<Item = EdgeId>) -> Result<Self> {
        let edges: EdgeSet = edges.into_iter().collect();
        let deg = g.subgraph_degrees(&edges)?;
        if let Some((v, d)) = deg.iter().find(|(_, &d)| d % 2 == 1) {
            return Err(Error::NotEven(format!("vertex {v} has degree {d}")));
        }
        Ok(EvenSubgraph { edges })
    }

    pub fn edges(&self) -> &EdgeSet {
        &self.edges
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }
}

pub fn symmetric_difference(a: &EdgeSet, b: &EdgeSet) -> EdgeSet {
    a.symmetric_difference(b).copied().collect()
}

/// All simple cycles of `g`, sorted by size then by edge ids.
///
/// Every cycle is found exactly once, rooted at its smallest edge: a loop is
/// its own cycle, and a non-loop root `(s, t)` is closed by every simple path
/// from `t` back to `s` that uses only larger edge ids.
pub fn cycles(g: &Multigraph, cap: usize) -> Result<Vec<Cycle>> {
    if cap == 0 {
        return Err(Error::InvalidParameter("cycle cap must be at least 1".into()));
    }
    let mut adj: BTreeMap<VertexId, Vec<(EdgeId, VertexId)>> = BTreeMap::new();
    for (e, t, h) in g.edges() {
        if t != h {
            adj.entry(t).or_default().push((e, h));
            adj.entry(h).or_default().push((e, t));
        }
    }

    let mut found: Vec<EdgeSet> = Vec::new();
    for (e0, s, t) in g.edges() {
        if s == t {
            found.push(std::iter::once(e0).collect());
            if found.len() > cap {
                return Err(Error::CapExceeded { cap });
            }
            continue;
        }
        let mut visited = BTreeSet::from([t]);
        let mut path = vec![e0];
        close_paths(&adj, e0, t, s, &mut visited, &mut path, &mut found, cap)?;
    }

    let mut out: Vec<Cycle> = found
        .into_iter()
        .map(|edges| Cycle::new(g, edges).expect("enumerated edge set is a cycle"))
        .collect();
    out.sort_by(|a, b| {
        a.len()
            .cmp(&b.len())
            .then_with(|| a.edges.iter().cmp(b.edges.iter()))
    });
    Ok(out)
}

#[allow(clippy::too_many_arguments)]
fn close_paths(
    adj: &BTreeMap<VertexId, Vec<(EdgeId, VertexId)>>,
    root: EdgeId,
    cur: VertexId,
    target: VertexId,
    visited: &mut BTreeSet<VertexId>,
    path: &mut Vec<EdgeId>,
    found: &mut Vec<EdgeSet>,
    cap: usize,
) -> Result<()> {
    let Some(nbrs) = adj.get(&cur) else {
        return Ok(());
    };
    for &(f, w) in nbrs {
        if f <= root {
            continue;
        }
        if w == target {
            let mut set: EdgeSet = path.iter().copied().collect();
            set.insert(f);
            found.push(set);
            if found.len() > cap {
                return Err(Error::CapExceeded { cap });
            }
        } else if visited.insert(w) {
            path.push(f);
            close_paths(adj, root, w, target, visited, path, found, cap)?;
            path.pop();
            visited.remove(&w);
        }
    }
    Ok(())
}

/// Every element of the cycle space of `g`, each exactly once, starting with
/// the empty subgraph. Elements are produced in Gray-code order over the
/// fundamental cycles of a spanning forest.
pub fn even_subgraphs(g: &Multigraph, cap: usize) -> Result<Vec<EvenSubgraph>> {
    let basis = fundamental_cycles(g);
    let dim = basis.len();
    if dim > MAX_CYCLE_SPACE_DIM || (1usize << dim) > cap {
        return Err(Error::CapExceeded { cap });
    }
    let mut out = Vec::with_capacity(1 << dim);
    let mut cur = EdgeSet::new();
    out.push(EvenSubgraph { edges: cur.clone() });
    for i in 1usize..(1 << dim) {
        let bit = i.trailing_zeros() as usize;
        cur = symmetric_difference(&cur, &basis[bit]);
        out.push(EvenSubgraph { edges: cur.clone() });
    }
    Ok(out)
}

/// Fundamental cycles of a BFS spanning forest, one per non-tree edge.
pub fn fundamental_cycles(g: &Multigraph) -> Vec<EdgeSet> {
    let mut adj: BTreeMap<VertexId, Vec<(EdgeId, VertexId)>> = BTreeMap::new();
    for (e, t, h) in g.edges() {
        adj.entry(t).or_default().push((e, h));
        adj.entry(h).or_default().push((e, t));
    }
    // parent edge and depth per vertex
    let mut parent: BTreeMap<VertexId, Option<(EdgeId, VertexId)>> = BTreeMap::new();
    let mut depth: BTreeMap<VertexId, usize> = BTreeMap::new();
    let mut tree: BTreeSet<EdgeId> = BTreeSet::new();
    for root in g.vertices() {
        if parent.contains_key(&root) {
            continue;
        }
        parent.insert(root, None);
        depth.insert(root, 0);
        let mut queue = std::collections::VecDeque::from([root]);
        while let Some(x) = queue.pop_front() {
            for &(e, y) in adj.get(&x).map(Vec::as_slice).unwrap_or(&[]) {
                if let std::collections::btree_map::Entry::Vacant(slot) = parent.entry(y) {
                    slot.insert(Some((e, x)));
                    depth.insert(y, depth[&x] + 1);
                    tree.insert(e);
                    queue.push_back(y);
                }
            }
        }
    }
    let mut basis = Vec::new();
    for (e, t, h) in g.edges() {
        if tree.contains(&e) {
            continue;
        }
        let mut set = EdgeSet::from([e]);
        let (mut a, mut b) = (t, h);
        while a != b {
            if depth[&a] >= depth[&b] {
                let (pe, pa) = parent[&a].unwrap();
                set.insert(pe);
                a = pa;
            } else {
                let (pe, pb) = parent[&b].unwrap();
                set.insert(pe);
                b = pb;
            }
        }
        basis.push(set);
    }
    basis
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k4() -> Multigraph {
        Multigraph::from_lists(
            1..=4,
            [(12, 1, 2), (13, 1, 3), (14, 1, 4), (23, 2, 3), (24, 2, 4), (34, 3, 4)],
        )
        .unwrap()
    }

    fn ids(xs: &[u32]) -> EdgeSet {
        xs.iter().map(|&x| EdgeId(x)).collect()
    }

    #[test]
    fn triangle_has_one_cycle() {
        let g = Multigraph::from_lists(1..=3, [(1, 1, 2), (2, 2, 3), (3, 3, 1)]).unwrap();
        let cs = cycles(&g, 10).unwrap();
        assert_eq!(cs.len(), 1);
        assert_eq!(cs[0].len(), 3);
    }

    #[test]
    fn k4_cycles_match_subset_enumeration() {
        let g = k4();
        let cs = cycles(&g, DEFAULT_CYCLE_CAP).unwrap();
        // brute force: every nonempty edge subset that is a cycle
        let all: Vec<EdgeId> = g.edge_ids().collect();
        let mut brute = Vec::new();
        for mask in 1u32..(1 << all.len()) {
            let set: EdgeSet = (0..all.len())
                .filter(|i| mask >> i & 1 == 1)
                .map(|i| all[i])
                .collect();
            if Cycle::new(&g, set.iter().copied()).is_ok() {
                brute.push(set);
            }
        }
        assert_eq!(brute.len(), 7);
        assert_eq!(cs.len(), 7);
        assert_eq!(cs.iter().filter(|c| c.len() == 3).count(), 4);
        assert_eq!(cs.iter().filter(|c| c.len() == 4).count(), 3);
        for c in &cs {
            assert!(brute.contains(c.edges()));
        }
    }

    #[test]
    fn loops_and_parallels_are_cycles() {
        let g = Multigraph::from_lists([1], [(1, 1, 1), (2, 1, 1)]).unwrap();
        let cs = cycles(&g, 10).unwrap();
        assert_eq!(cs.len(), 2);
        assert!(cs.iter().all(|c| c.len() == 1));

        let g = Multigraph::from_lists([1, 2], [(1, 1, 2), (2, 1, 2), (3, 2, 1)]).unwrap();
        let cs = cycles(&g, 10).unwrap();
        assert_eq!(cs.len(), 3);
        assert!(cs.iter().all(|c| c.len() == 2));
    }

    #[test]
    fn cycle_cap_is_enforced() {
        assert_eq!(cycles(&k4(), 6), Err(Error::CapExceeded { cap: 6 }));
        assert!(cycles(&k4(), 7).is_ok());
        assert!(cycles(&k4(), 0).is_err());
    }

    #[test]
    fn cycle_validation() {
        let g = k4();
        assert!(Cycle::new(&g, ids(&[12, 23, 13])).is_ok());
        assert!(matches!(Cycle::new(&g, ids(&[12, 23])), Err(Error::NotACycle(_))));
        assert!(matches!(Cycle::new(&g, ids(&[])), Err(Error::NotACycle(_))));
        assert_eq!(Cycle::new(&g, ids(&[99])), Err(Error::UnknownEdge(EdgeId(99))));
        // two disjoint triangles
        let g2 = Multigraph::from_lists(
            1..=6,
            [(1, 1, 2), (2, 2, 3), (3, 3, 1), (4, 4, 5), (5, 5, 6), (6, 6, 4)],
        )
        .unwrap();
        assert!(Cycle::new(&g2, ids(&[1, 2, 3, 4, 5, 6])).is_err());
    }

    #[test]
    fn even_subgraph_counts() {
        let tri = Multigraph::from_lists(1..=3, [(1, 1, 2), (2, 2, 3), (3, 3, 1)]).unwrap();
        let es = even_subgraphs(&tri, 1000).unwrap();
        assert_eq!(es.len(), 2);
        assert!(es[0].is_empty());

        let es = even_subgraphs(&k4(), 1000).unwrap();
        assert_eq!(es.len(), 8);
        let distinct: BTreeSet<_> = es.iter().collect();
        assert_eq!(distinct.len(), 8);
        for s in &es {
            assert!(EvenSubgraph::new(&k4(), s.edges().iter().copied()).is_ok());
        }

        let tree = Multigraph::from_lists(1..=4, [(1, 1, 2), (2, 1, 3), (3, 3, 4)]).unwrap();
        let es = even_subgraphs(&tree, 1000).unwrap();
        assert_eq!(es, vec![EvenSubgraph::default()]);

        assert_eq!(even_subgraphs(&k4(), 7), Err(Error::CapExceeded { cap: 7 }));
    }

    #[test]
    fn symmetric_difference_examples() {
        let a = ids(&[12, 23, 13]);
        assert!(symmetric_difference(&a, &a).is_empty());
        let b = ids(&[14, 24]);
        assert_eq!(symmetric_difference(&a, &b), ids(&[12, 13, 14, 23, 24]));
        let t2 = ids(&[12, 24, 14]);
        let d = symmetric_difference(&a, &t2);
        assert_eq!(d, ids(&[23, 13, 24, 14]));
        assert!(Cycle::new(&k4(), d.iter().copied()).is_ok());
    }

    #[test]
    fn components_and_dimension() {
        let g = Multigraph::from_lists(1..=5, [(1, 1, 2), (2, 2, 1), (3, 4, 4)]).unwrap();
        assert_eq!(g.components().len(), 4);
        assert_eq!(g.cycle_space_dim(), 2);
    }
}
