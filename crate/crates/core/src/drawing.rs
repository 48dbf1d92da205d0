//! Drawings as crossing-augmented embedded maps, and embedding schemes.
//!
//! A [`DrawingMap`] stores the original multigraph, one record per crossing
//! (two strands plus a handedness bit), the rotation at every real vertex and
//! a signature per edge segment. The augmented map, with one degree-4 dummy
//! node per crossing, is built on demand by [`DrawingMap::augmented_map`].
//!
//! Handedness: at a crossing with strands A and B, `+` means the dummy
//! rotation is `(A-before, B-before, A-after, B-after)` and `-` is the mirror
//! `(A-before, B-after, A-after, B-before)`, where "before" is the segment on
//! the tail side of the strand.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use crate::error::{Error, Result};
use crate::graph::{EdgeId, End, Multigraph, VertexId};
use crate::map::{EmbeddedMap, Face, Genus, SegmentRef, Sign};

/// A strand of a crossing: slot `position` (0-based, from the tail) on `edge`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Strand {
    pub edge: EdgeId,
    pub position: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CrossingRecord {
    pub id: u32,
    pub a: Strand,
    pub b: Strand,
    pub handedness: Sign,
}

impl CrossingRecord {
    pub fn is_self_crossing(&self) -> bool {
        self.a.edge == self.b.edge
    }

    pub fn edges(&self) -> (EdgeId, EdgeId) {
        (self.a.edge, self.b.edge)
    }
}

/// Surface a drawing lives on, by Euler genus and orientability.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Surface {
    pub euler_genus: usize,
    pub orientable: bool,
}

impl Surface {
    pub fn sphere() -> Self {
        Surface {
            euler_genus: 0,
            orientable: true,
        }
    }

    /// Whether a cellular map of genus `g` embeds in this surface.
    ///
    /// Handles and crosscaps can be added to faces, so a smaller Euler genus
    /// always fits; an orientable map of equal genus does not fit a
    /// nonorientable surface, and a nonorientable map never fits an
    /// orientable one.
    pub fn admits(&self, g: Genus) -> bool {
        if g.euler_genus > self.euler_genus {
            return false;
        }
        if self.orientable {
            return g.orientable;
        }
        !(g.orientable && g.euler_genus == self.euler_genus)
    }
}

impl fmt::Display for Surface {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let o = if self.orientable {
            "orientable"
        } else {
            "nonorientable"
        };
        write!(f, "{} {}", self.euler_genus, o)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Diagnostic {
    pub location: String,
    pub message: String,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.location, self.message)
    }
}

/// One crossing slot on an edge, as seen by `edge_trace`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TraceSlot {
    pub crossing: u32,
    pub partner: EdgeId,
}

/// Which strand of a crossing record.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub(crate) enum Role {
    A,
    B,
}

impl Role {
    pub(crate) fn other(self) -> Role {
        match self {
            Role::A => Role::B,
            Role::B => Role::A,
        }
    }
}

/// Rotates a cyclic sequence so that its smallest element comes first.
pub fn normalize_rotation<T: Ord + Copy>(rot: &mut [T]) {
    if let Some(i) = rot.iter().enumerate().min_by_key(|(_, x)| **x).map(|(i, _)| i) {
        rot.rotate_left(i);
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DrawingMap {
    graph: Multigraph,
    crossings: Vec<CrossingRecord>,
    rotations: BTreeMap<VertexId, Vec<End>>,
    signatures: BTreeMap<EdgeId, Vec<Sign>>,
    surface: Surface,
}

impl DrawingMap {
    /// Assembles a drawing without checking it; see [`DrawingMap::validate`].
    /// Rotations are stored starting at their smallest end.
    pub fn from_parts(
        graph: Multigraph,
        mut crossings: Vec<CrossingRecord>,
        mut rotations: BTreeMap<VertexId, Vec<End>>,
        signatures: BTreeMap<EdgeId, Vec<Sign>>,
        surface: Surface,
    ) -> Self {
        crossings.sort_by_key(|c| c.id);
        for rot in rotations.values_mut() {
            normalize_rotation(rot);
        }
        DrawingMap {
            graph,
            crossings,
            rotations,
            signatures,
            surface,
        }
    }

    /// A crossing-free drawing realizing an embedding scheme.
    pub fn from_scheme(scheme: &EmbeddingScheme, surface: Surface) -> Self {
        let signatures = scheme
            .graph
            .edge_ids()
            .map(|e| (e, vec![scheme.signature(e)]))
            .collect();
        DrawingMap::from_parts(
            scheme.graph.clone(),
            Vec::new(),
            scheme.rotations.clone(),
            signatures,
            surface,
        )
    }

    pub fn graph(&self) -> &Multigraph {
        &self.graph
    }

    pub fn crossings(&self) -> &[CrossingRecord] {
        &self.crossings
    }

    pub fn crossing_count(&self) -> usize {
        self.crossings.len()
    }

    pub fn rotations(&self) -> &BTreeMap<VertexId, Vec<End>> {
        &self.rotations
    }

    pub fn rotation(&self, v: VertexId) -> &[End] {
        self.rotations.get(&v).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn signatures(&self) -> &BTreeMap<EdgeId, Vec<Sign>> {
        &self.signatures
    }

    pub fn segment_signs(&self, e: EdgeId) -> &[Sign] {
        self.signatures.get(&e).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn surface(&self) -> Surface {
        self.surface
    }

    pub fn with_surface(mut self, surface: Surface) -> Self {
        self.surface = surface;
        self
    }

    /// Number of crossing slots on `e`.
    pub fn slot_count(&self, e: EdgeId) -> usize {
        self.crossings
            .iter()
            .map(|c| (c.a.edge == e) as usize + (c.b.edge == e) as usize)
            .sum()
    }

    /// Transport sign along the whole edge.
    pub fn edge_signature(&self, e: EdgeId) -> Sign {
        Sign::product(self.segment_signs(e).iter().copied())
    }

    /// Per edge, `(crossing index, role)` by position. Assumes valid positions.
    pub(crate) fn slot_table(&self) -> BTreeMap<EdgeId, Vec<(usize, Role)>> {
        let mut table: BTreeMap<EdgeId, Vec<(usize, usize, Role)>> =
            self.graph.edge_ids().map(|e| (e, Vec::new())).collect();
        for (i, c) in self.crossings.iter().enumerate() {
            for (s, r) in [(c.a, Role::A), (c.b, Role::B)] {
                if let Some(v) = table.get_mut(&s.edge) {
                    v.push((s.position, i, r));
                }
            }
        }
        table
            .into_iter()
            .map(|(e, mut v)| {
                v.sort();
                (e, v.into_iter().map(|(_, i, r)| (i, r)).collect())
            })
            .collect()
    }

    pub(crate) fn strand(&self, i: usize, role: Role) -> Strand {
        match role {
            Role::A => self.crossings[i].a,
            Role::B => self.crossings[i].b,
        }
    }

    /// Crossing slots of `e` ordered from the tail end.
    pub fn edge_trace(&self, e: EdgeId) -> Result<Vec<TraceSlot>> {
        if !self.graph.has_edge(e) {
            return Err(Error::UnknownEdge(e));
        }
        let table = self.slot_table();
        Ok(table[&e]
            .iter()
            .map(|&(i, r)| TraceSlot {
                crossing: self.crossings[i].id,
                partner: self.strand(i, r.other()).edge,
            })
            .collect())
    }

    /// Checks every structural invariant; an empty list means the drawing is valid.
    pub fn validate(&self) -> Vec<Diagnostic> {
        let mut out = Vec::new();
        let mut diag = |location: String, message: String| out.push(Diagnostic { location, message });

        let mut ids = BTreeSet::new();
        let mut positions: BTreeMap<EdgeId, Vec<usize>> = BTreeMap::new();
        for c in &self.crossings {
            let loc = format!("cross {}", c.id);
            if !ids.insert(c.id) {
                diag(loc.clone(), "duplicate crossing id".into());
            }
            if c.a == c.b {
                diag(loc.clone(), "both strands are the same slot".into());
            }
            for s in [c.a, c.b] {
                if self.graph.has_edge(s.edge) {
                    positions.entry(s.edge).or_default().push(s.position);
                } else {
                    diag(loc.clone(), format!("unknown edge {}", s.edge));
                }
            }
        }
        let mut positions_ok = true;
        for (e, ps) in &mut positions {
            ps.sort_unstable();
            if ps.iter().enumerate().any(|(i, &p)| i != p) {
                positions_ok = false;
                diag(
                    format!("edge {e}"),
                    format!(
                        "crossing positions {:?} do not cover 0..{} exactly once",
                        ps,
                        ps.len()
                    ),
                );
            }
        }

        let mut sigs_ok = true;
        for e in self.graph.edge_ids() {
            let m = positions.get(&e).map_or(0, Vec::len);
            match self.signatures.get(&e) {
                Some(s) if s.len() == m + 1 => {}
                Some(s) => {
                    sigs_ok = false;
                    diag(
                        format!("edge {e}"),
                        format!("{} segment signatures for {} segments", s.len(), m + 1),
                    );
                }
                None => {
                    sigs_ok = false;
                    diag(format!("edge {e}"), "missing segment signatures".into());
                }
            }
        }
        for e in self.signatures.keys() {
            if !self.graph.has_edge(*e) {
                diag(format!("sig {e}"), "signature for unknown edge".into());
            }
        }

        let mut rot_ok = true;
        for v in self.graph.vertices() {
            let expected: BTreeSet<End> = self.graph.ends_at(v).into_iter().collect();
            let rot = self.rotation(v);
            let got: BTreeSet<End> = rot.iter().copied().collect();
            if got.len() != rot.len() {
                rot_ok = false;
                diag(format!("rot {v}"), "an end appears more than once".into());
            }
            if got != expected {
                rot_ok = false;
                let missing: Vec<String> = expected.difference(&got).map(|x| x.to_string()).collect();
                let extra: Vec<String> = got.difference(&expected).map(|x| x.to_string()).collect();
                diag(
                    format!("rot {v}"),
                    format!("missing ends [{}], foreign ends [{}]", missing.join(" "), extra.join(" ")),
                );
            }
        }
        for v in self.rotations.keys() {
            if !self.graph.has_vertex(*v) {
                rot_ok = false;
                diag(format!("rot {v}"), "rotation for unknown vertex".into());
            }
        }

        if self.surface.euler_genus == 0 {
            if !self.surface.orientable {
                diag("surface".into(), "Euler genus 0 must be orientable".into());
            }
            for (e, s) in &self.signatures {
                if s.contains(&Sign::Minus) {
                    diag(format!("sig {e}"), "negative signature on a sphere drawing".into());
                }
            }
        }

        if positions_ok && sigs_ok && rot_ok && ids.len() == self.crossings.len() {
            match self.augmented_map() {
                Ok(m) => {
                    let g = m.euler_genus();
                    if !self.surface.admits(g) {
                        diag(
                            "surface".into(),
                            format!("augmented map has {g}, which does not fit the declared surface {}", self.surface),
                        );
                    }
                }
                Err(msg) => diag("augmented map".into(), msg),
            }
        }
        out
    }

    /// The crossing-augmented map: real vertices first (ascending id), then one
    /// dummy node per crossing in record order.
    pub fn augmented_map(&self) -> Result<EmbeddedMap, String> {
        let vindex: BTreeMap<VertexId, usize> =
            self.graph.vertices().enumerate().map(|(i, v)| (v, i)).collect();
        let nv = vindex.len();
        let table = self.slot_table();
        let mut segments = Vec::new();
        for (e, t, h) in self.graph.edges() {
            let slots = &table[&e];
            let m = slots.len();
            let sigs = self.segment_signs(e);
            if sigs.len() != m + 1 {
                return Err(format!("edge {e}: signature count mismatch"));
            }
            let point = |j: usize| -> usize {
                if j == 0 {
                    vindex[&t]
                } else if j == m + 1 {
                    vindex[&h]
                } else {
                    nv + slots[j - 1].0
                }
            };
            for i in 0..=m {
                segments.push((SegmentRef { edge: e, index: i }, [point(i), point(i + 1)], sigs[i]));
            }
        }
        let mut rotations = Vec::with_capacity(nv + self.crossings.len());
        for v in self.graph.vertices() {
            let rot = self
                .rotation(v)
                .iter()
                .map(|end| {
                    let idx = if end.side == 0 {
                        0
                    } else {
                        table.get(&end.edge).map_or(0, Vec::len)
                    };
                    (SegmentRef { edge: end.edge, index: idx }, end.side)
                })
                .collect();
            rotations.push(rot);
        }
        for c in &self.crossings {
            let before = |s: Strand| (SegmentRef { edge: s.edge, index: s.position }, 1u8);
            let after = |s: Strand| (SegmentRef { edge: s.edge, index: s.position + 1 }, 0u8);
            let rot = match c.handedness {
                Sign::Plus => vec![before(c.a), before(c.b), after(c.a), after(c.b)],
                Sign::Minus => vec![before(c.a), after(c.b), after(c.a), before(c.b)],
            };
            rotations.push(rot);
        }
        EmbeddedMap::new(nv + self.crossings.len(), segments, rotations)
    }

    /// Embedding scheme of the graph inside the drawing: rotations at real
    /// vertices and the transport sign of each edge.
    pub fn restrict_scheme(&self) -> EmbeddingScheme {
        EmbeddingScheme {
            graph: self.graph.clone(),
            rotations: self.rotations.clone(),
            signature: self
                .graph
                .edge_ids()
                .map(|e| (e, self.edge_signature(e)))
                .collect(),
        }
    }

    /// Puts every record in canonical form: strand A is the smaller strand
    /// (handedness mirrored when swapping) and ids run 1.. in order of A.
    pub fn canonicalize_crossings(&mut self) {
        for c in &mut self.crossings {
            if c.b < c.a {
                std::mem::swap(&mut c.a, &mut c.b);
                c.handedness = -c.handedness;
            }
        }
        self.crossings.sort_by_key(|c| c.a);
        for (i, c) in self.crossings.iter_mut().enumerate() {
            c.id = i as u32 + 1;
        }
    }

    pub(crate) fn parts_mut(
        &mut self,
    ) -> (
        &mut Multigraph,
        &mut Vec<CrossingRecord>,
        &mut BTreeMap<VertexId, Vec<End>>,
        &mut BTreeMap<EdgeId, Vec<Sign>>,
    ) {
        (
            &mut self.graph,
            &mut self.crossings,
            &mut self.rotations,
            &mut self.signatures,
        )
    }

    pub(crate) fn normalize_rotations(&mut self) {
        for rot in self.rotations.values_mut() {
            normalize_rotation(rot);
        }
    }

    /// Removes the crossings selected by `drop`, compacting slot positions and
    /// merging the signatures of segments that meet at a removed slot.
    pub(crate) fn drop_crossings(&mut self, drop: impl Fn(&CrossingRecord) -> bool) {
        let table = self.slot_table();
        let removed: Vec<bool> = self.crossings.iter().map(&drop).collect();
        let mut new_pos: BTreeMap<(usize, Role), usize> = BTreeMap::new();
        for (&e, slots) in &table {
            let old = self.signatures.get(&e).cloned().unwrap_or_default();
            let mut sigs = vec![old.first().copied().unwrap_or(Sign::Plus)];
            let mut next = 0;
            for (j, &(i, r)) in slots.iter().enumerate() {
                let following = old.get(j + 1).copied().unwrap_or(Sign::Plus);
                if removed[i] {
                    *sigs.last_mut().unwrap() *= following;
                } else {
                    new_pos.insert((i, r), next);
                    next += 1;
                    sigs.push(following);
                }
            }
            self.signatures.insert(e, sigs);
        }
        let old = std::mem::take(&mut self.crossings);
        for (i, mut c) in old.into_iter().enumerate() {
            if removed[i] {
                continue;
            }
            c.a.position = new_pos[&(i, Role::A)];
            c.b.position = new_pos[&(i, Role::B)];
            self.crossings.push(c);
        }
    }
}

/// Rotation system plus edge signature.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EmbeddingScheme {
    graph: Multigraph,
    rotations: BTreeMap<VertexId, Vec<End>>,
    signature: BTreeMap<EdgeId, Sign>,
}

impl EmbeddingScheme {
    /// Checks that every edge end appears exactly once, at its own vertex.
    pub fn new(
        graph: Multigraph,
        mut rotations: BTreeMap<VertexId, Vec<End>>,
        signature: BTreeMap<EdgeId, Sign>,
    ) -> Result<Self> {
        let mut problems = Vec::new();
        for v in graph.vertices() {
            let rot = rotations.entry(v).or_default();
            normalize_rotation(rot);
            let got: BTreeSet<End> = rot.iter().copied().collect();
            let expected: BTreeSet<End> = graph.ends_at(v).into_iter().collect();
            if got.len() != rot.len() || got != expected {
                problems.push(format!("rotation at {v} does not list its ends exactly once"));
            }
        }
        if rotations.keys().any(|v| !graph.has_vertex(*v)) {
            problems.push("rotation for unknown vertex".into());
        }
        let signature: BTreeMap<EdgeId, Sign> = graph
            .edge_ids()
            .map(|e| (e, signature.get(&e).copied().unwrap_or(Sign::Plus)))
            .collect();
        if !problems.is_empty() {
            return Err(Error::InvalidDrawing(problems));
        }
        Ok(EmbeddingScheme {
            graph,
            rotations,
            signature,
        })
    }

    pub fn graph(&self) -> &Multigraph {
        &self.graph
    }

    pub fn rotations(&self) -> &BTreeMap<VertexId, Vec<End>> {
        &self.rotations
    }

    pub fn rotation(&self, v: VertexId) -> &[End] {
        self.rotations.get(&v).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn signatures(&self) -> &BTreeMap<EdgeId, Sign> {
        &self.signature
    }

    pub fn signature(&self, e: EdgeId) -> Sign {
        self.signature.get(&e).copied().unwrap_or(Sign::Plus)
    }

    pub fn to_map(&self) -> EmbeddedMap {
        let vindex: BTreeMap<VertexId, usize> =
            self.graph.vertices().enumerate().map(|(i, v)| (v, i)).collect();
        let segments = self
            .graph
            .edges()
            .map(|(e, t, h)| {
                (
                    SegmentRef { edge: e, index: 0 },
                    [vindex[&t], vindex[&h]],
                    self.signature(e),
                )
            })
            .collect();
        let rotations = self
            .graph
            .vertices()
            .map(|v| {
                self.rotation(v)
                    .iter()
                    .map(|end| (SegmentRef { edge: end.edge, index: 0 }, end.side))
                    .collect()
            })
            .collect();
        EmbeddedMap::new(vindex.len(), segments, rotations).expect("scheme invariants hold")
    }

    pub fn faces(&self) -> Vec<Face> {
        self.to_map().faces()
    }

    pub fn euler_genus(&self) -> Genus {
        self.to_map().euler_genus()
    }

    /// Reverses the rotation at `v` and negates the signature of its non-loop edges.
    pub fn flip_vertex(&mut self, v: VertexId) {
        if let Some(rot) = self.rotations.get_mut(&v) {
            rot.reverse();
            normalize_rotation(rot);
        }
        for (e, t, h) in self.graph.edges() {
            if t != h && (t == v || h == v) {
                let s = self.signature.get_mut(&e).unwrap();
                *s = -*s;
            }
        }
    }

    /// Reverses every rotation.
    pub fn mirror(&mut self) {
        for rot in self.rotations.values_mut() {
            rot.reverse();
            normalize_rotation(rot);
        }
    }

    /// Whether `other` is obtained from `self` by a set of vertex flips.
    pub fn flip_equivalent(&self, other: &EmbeddingScheme) -> bool {
        if self.graph != other.graph {
            return false;
        }
        // allowed flip values per vertex
        let mut allowed: BTreeMap<VertexId, [bool; 2]> = BTreeMap::new();
        for v in self.graph.vertices() {
            let a = self.rotation(v);
            let b = other.rotation(v);
            let same = cyclic_eq(a, b);
            let mut rev: Vec<End> = a.to_vec();
            rev.reverse();
            let reversed = cyclic_eq(&rev, b);
            allowed.insert(v, [same, reversed]);
        }
        let mut adj: BTreeMap<VertexId, Vec<(VertexId, bool)>> = BTreeMap::new();
        for (e, t, h) in self.graph.edges() {
            let differs = self.signature(e) != other.signature(e);
            if t == h {
                if differs {
                    return false;
                }
                continue;
            }
            adj.entry(t).or_default().push((h, differs));
            adj.entry(h).or_default().push((t, differs));
        }
        let mut assigned: BTreeMap<VertexId, bool> = BTreeMap::new();
        for comp in self.graph.components() {
            let root = *comp.iter().next().unwrap();
            let mut ok_any = false;
            for start in [false, true] {
                let mut local: BTreeMap<VertexId, bool> = BTreeMap::new();
                let mut ok = true;
                let mut queue = VecDeque::from([(root, start)]);
                while let Some((x, fx)) = queue.pop_front() {
                    if let Some(&prev) = local.get(&x) {
                        if prev != fx {
                            ok = false;
                            break;
                        }
                        continue;
                    }
                    if !allowed[&x][fx as usize] {
                        ok = false;
                        break;
                    }
                    local.insert(x, fx);
                    for &(y, differs) in adj.get(&x).map(Vec::as_slice).unwrap_or(&[]) {
                        queue.push_back((y, fx ^ differs));
                    }
                }
                if ok {
                    assigned.extend(local);
                    ok_any = true;
                    break;
                }
            }
            if !ok_any {
                return false;
            }
        }
        true
    }
}

/// Equality of cyclic sequences.
pub fn cyclic_eq<T: PartialEq>(a: &[T], b: &[T]) -> bool {
    if a.len() != b.len() {
        return false;
    }
    if a.is_empty() {
        return true;
    }
    (0..b.len()).any(|shift| (0..a.len()).all(|i| a[i] == b[(i + shift) % b.len()]))
}
