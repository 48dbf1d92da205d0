//! Embedded maps with edge signatures, face tracing and Euler genus.
//!
//! A map is a set of nodes, a set of segments (edges of the map) carrying a
//! sign, and a cyclic rotation of segment ends at every node. Faces are traced
//! on flags: a flag is one side of a segment seen from one of its ends.
//! Three fixed-point-free involutions act on flags:
//!
//! * side: `(d, s) <-> (d, !s)`
//! * corner: `(d, toward successor) <-> (succ(d), toward predecessor)`
//! * segment: `(d, s) <-> (opp(d), sign == + ? !s : s)`
//!
//! Faces are the orbits of ⟨corner, segment⟩ and the map is orientable iff the
//! flag graph of all three involutions is bipartite.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Mul, MulAssign, Neg};

use crate::graph::{Dsu, EdgeId};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub enum Sign {
    #[default]
    Plus,
    Minus,
}

impl Sign {
    pub fn is_plus(self) -> bool {
        self == Sign::Plus
    }

    pub fn from_bool(plus: bool) -> Self {
        if plus {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }

    pub fn product(signs: impl IntoIterator<Item = Sign>) -> Sign {
        signs.into_iter().fold(Sign::Plus, |a, b| a * b)
    }

    pub fn as_char(self) -> char {
        match self {
            Sign::Plus => '+',
            Sign::Minus => '-',
        }
    }
}

impl Mul for Sign {
    type Output = Sign;
    fn mul(self, rhs: Sign) -> Sign {
        Sign::from_bool(self == rhs)
    }
}

impl MulAssign for Sign {
    fn mul_assign(&mut self, rhs: Sign) {
        *self = *self * rhs;
    }
}

impl Neg for Sign {
    type Output = Sign;
    fn neg(self) -> Sign {
        self * Sign::Minus
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_char())
    }
}

/// Segment `index` of edge `edge`, counted from the tail end.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SegmentRef {
    pub edge: EdgeId,
    pub index: usize,
}

/// One side of a segment, seen from end `end` (0 = start, 1 = finish).
/// `toward_successor` selects the side facing the rotation successor of this
/// segment end at its node.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Flag {
    pub segment: SegmentRef,
    pub end: u8,
    pub toward_successor: bool,
}

/// A face as its closed flag walk. Entries `2i, 2i+1` traverse one side of a
/// segment; entries `2i+1, 2i+2` turn a corner at a node.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Face {
    pub flags: Vec<Flag>,
}

impl Face {
    /// Number of segment sides on the boundary walk.
    pub fn len(&self) -> usize {
        self.flags.len() / 2
    }

    pub fn is_empty(&self) -> bool {
        self.flags.is_empty()
    }

    pub fn position(&self, flag: &Flag) -> Option<usize> {
        self.flags.iter().position(|f| f == flag)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Genus {
    pub euler_genus: usize,
    pub orientable: bool,
}

impl fmt::Display for Genus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let o = if self.orientable {
            "orientable"
        } else {
            "nonorientable"
        };
        write!(f, "euler-genus {} {}", self.euler_genus, o)
    }
}

#[derive(Clone, Debug)]
pub struct EmbeddedMap {
    node_count: usize,
    seg_refs: Vec<SegmentRef>,
    seg_index: HashMap<SegmentRef, usize>,
    seg_nodes: Vec<[usize; 2]>,
    seg_sign: Vec<Sign>,
    rotations: Vec<Vec<usize>>,
    // dart -> (node, index in rotation)
    dart_pos: Vec<(usize, usize)>,
}

impl EmbeddedMap {
    /// Builds a map. `segments` holds `(label, [start node, finish node], sign)`;
    /// `rotations[n]` lists `(label, end)` darts in cyclic order. Every dart
    /// must appear exactly once, at the node its segment end is attached to.
    pub fn new(
        node_count: usize,
        segments: Vec<(SegmentRef, [usize; 2], Sign)>,
        rotations: Vec<Vec<(SegmentRef, u8)>>,
    ) -> Result<Self, String> {
        if rotations.len() != node_count {
            return Err(format!(
                "{} rotations for {} nodes",
                rotations.len(),
                node_count
            ));
        }
        let mut seg_refs = Vec::with_capacity(segments.len());
        let mut seg_index = HashMap::with_capacity(segments.len());
        let mut seg_nodes = Vec::with_capacity(segments.len());
        let mut seg_sign = Vec::with_capacity(segments.len());
        for (i, (r, nodes, s)) in segments.into_iter().enumerate() {
            if nodes.iter().any(|&n| n >= node_count) {
                return Err(format!("segment {:?} references a missing node", r));
            }
            if seg_index.insert(r, i).is_some() {
                return Err(format!("segment {:?} listed twice", r));
            }
            seg_refs.push(r);
            seg_nodes.push(nodes);
            seg_sign.push(s);
        }
        let mut dart_pos = vec![(usize::MAX, 0); 2 * seg_refs.len()];
        let mut rots = Vec::with_capacity(node_count);
        for (n, rot) in rotations.into_iter().enumerate() {
            let mut darts = Vec::with_capacity(rot.len());
            for (i, (r, end)) in rot.into_iter().enumerate() {
                let s = *seg_index
                    .get(&r)
                    .ok_or_else(|| format!("node {n}: unknown segment {:?}", r))?;
                if end > 1 {
                    return Err(format!("node {n}: bad end {end}"));
                }
                if seg_nodes[s][end as usize] != n {
                    return Err(format!("node {n}: segment {:?} end {end} belongs elsewhere", r));
                }
                let d = 2 * s + end as usize;
                if dart_pos[d].0 != usize::MAX {
                    return Err(format!("segment {:?} end {end} appears twice", r));
                }
                dart_pos[d] = (n, i);
                darts.push(d);
            }
            rots.push(darts);
        }
        if let Some(d) = dart_pos.iter().position(|p| p.0 == usize::MAX) {
            return Err(format!(
                "segment {:?} end {} missing from rotations",
                seg_refs[d / 2],
                d % 2
            ));
        }
        Ok(EmbeddedMap {
            node_count,
            seg_refs,
            seg_index,
            seg_nodes,
            seg_sign,
            rotations: rots,
            dart_pos,
        })
    }

    pub fn node_count(&self) -> usize {
        self.node_count
    }

    pub fn segment_count(&self) -> usize {
        self.seg_refs.len()
    }

    pub fn segment_sign(&self, r: SegmentRef) -> Option<Sign> {
        self.seg_index.get(&r).map(|&i| self.seg_sign[i])
    }

    /// Node at which a flag sits.
    pub fn flag_node(&self, f: &Flag) -> Option<usize> {
        self.seg_index
            .get(&f.segment)
            .map(|&s| self.seg_nodes[s][f.end as usize])
    }

    /// Rotation successor of a segment end.
    pub fn successor(&self, r: SegmentRef, end: u8) -> Option<(SegmentRef, u8)> {
        let s = *self.seg_index.get(&r)?;
        let d = self.succ(2 * s + end as usize);
        Some((self.seg_refs[d / 2], (d % 2) as u8))
    }

    fn succ(&self, d: usize) -> usize {
        let (n, i) = self.dart_pos[d];
        let rot = &self.rotations[n];
        rot[(i + 1) % rot.len()]
    }

    fn pred(&self, d: usize) -> usize {
        let (n, i) = self.dart_pos[d];
        let rot = &self.rotations[n];
        rot[(i + rot.len() - 1) % rot.len()]
    }

    // flag index = 2 * dart + (toward successor as usize)
    fn corner(&self, f: usize) -> usize {
        let d = f / 2;
        if f % 2 == 1 {
            2 * self.succ(d)
        } else {
            2 * self.pred(d) + 1
        }
    }

    fn across(&self, f: usize) -> usize {
        let d = f / 2;
        let opp = d ^ 1;
        let side = f % 2;
        match self.seg_sign[d / 2] {
            Sign::Plus => 2 * opp + (1 - side),
            Sign::Minus => 2 * opp + side,
        }
    }

    fn to_flag(&self, f: usize) -> Flag {
        let d = f / 2;
        Flag {
            segment: self.seg_refs[d / 2],
            end: (d % 2) as u8,
            toward_successor: f % 2 == 1,
        }
    }

    fn face_orbits(&self) -> Vec<Vec<usize>> {
        let n = 4 * self.seg_refs.len();
        let mut seen = vec![false; n];
        let mut faces = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut orbit = Vec::new();
            let mut cur = start;
            loop {
                seen[cur] = true;
                orbit.push(cur);
                let next = self.across(cur);
                seen[next] = true;
                orbit.push(next);
                cur = self.corner(next);
                if cur == start {
                    break;
                }
            }
            faces.push(orbit);
        }
        faces
    }

    /// All faces; together they use every flag exactly once.
    pub fn faces(&self) -> Vec<Face> {
        self.face_orbits()
            .into_iter()
            .map(|orbit| Face {
                flags: orbit.into_iter().map(|f| self.to_flag(f)).collect(),
            })
            .collect()
    }

    /// Euler genus summed over connected components, with orientability.
    pub fn euler_genus(&self) -> Genus {
        let mut dsu = Dsu::new(self.node_count);
        for nodes in &self.seg_nodes {
            dsu.union(nodes[0], nodes[1]);
        }
        let mut comp_v: HashMap<usize, i64> = HashMap::new();
        let mut comp_e: HashMap<usize, i64> = HashMap::new();
        let mut comp_f: HashMap<usize, i64> = HashMap::new();
        for n in 0..self.node_count {
            *comp_v.entry(dsu.find(n)).or_default() += 1;
        }
        for nodes in &self.seg_nodes {
            *comp_e.entry(dsu.find(nodes[0])).or_default() += 1;
        }
        for orbit in self.face_orbits() {
            let node = self.dart_pos[orbit[0] / 2].0;
            *comp_f.entry(dsu.find(node)).or_default() += 1;
        }
        let mut total = 0i64;
        for (&c, &v) in &comp_v {
            let e = comp_e.get(&c).copied().unwrap_or(0);
            // an isolated node bounds a single face
            let f = comp_f.get(&c).copied().unwrap_or(1);
            total += 2 - v + e - f;
        }
        debug_assert!(total >= 0);
        Genus {
            euler_genus: total.max(0) as usize,
            orientable: self.is_orientable(),
        }
    }

    fn is_orientable(&self) -> bool {
        let n = 4 * self.seg_refs.len();
        let mut color: Vec<Option<bool>> = vec![None; n];
        let mut stack = Vec::new();
        for start in 0..n {
            if color[start].is_some() {
                continue;
            }
            color[start] = Some(false);
            stack.push(start);
            while let Some(f) = stack.pop() {
                let c = color[f].unwrap();
                for g in [f ^ 1, self.corner(f), self.across(f)] {
                    match color[g] {
                        None => {
                            color[g] = Some(!c);
                            stack.push(g);
                        }
                        Some(cg) if cg == c => return false,
                        _ => {}
                    }
                }
            }
        }
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn seg(e: u32) -> SegmentRef {
        SegmentRef {
            edge: EdgeId(e),
            index: 0,
        }
    }

    fn single_loop(sign: Sign) -> EmbeddedMap {
        EmbeddedMap::new(1, vec![(seg(1), [0, 0], sign)], vec![vec![(seg(1), 0), (seg(1), 1)]])
            .unwrap()
    }

    #[test]
    fn loop_faces_depend_on_sign() {
        assert_eq!(single_loop(Sign::Plus).faces().len(), 2);
        assert_eq!(single_loop(Sign::Minus).faces().len(), 1);
        assert_eq!(
            single_loop(Sign::Plus).euler_genus(),
            Genus {
                euler_genus: 0,
                orientable: true
            }
        );
        assert_eq!(
            single_loop(Sign::Minus).euler_genus(),
            Genus {
                euler_genus: 1,
                orientable: false
            }
        );
    }

    #[test]
    fn triangle_is_planar() {
        let segs = vec![
            (seg(1), [0, 1], Sign::Plus),
            (seg(2), [1, 2], Sign::Plus),
            (seg(3), [2, 0], Sign::Plus),
        ];
        let rots = vec![
            vec![(seg(1), 0), (seg(3), 1)],
            vec![(seg(2), 0), (seg(1), 1)],
            vec![(seg(3), 0), (seg(2), 1)],
        ];
        let m = EmbeddedMap::new(3, segs, rots).unwrap();
        assert_eq!(m.faces().len(), 2);
        assert_eq!(m.euler_genus().euler_genus, 0);
        let total: usize = m.faces().iter().map(|f| f.flags.len()).sum();
        assert_eq!(total, 12);
    }

    #[test]
    fn isolated_nodes_are_spheres() {
        let m = EmbeddedMap::new(3, vec![], vec![vec![], vec![], vec![]]).unwrap();
        assert_eq!(m.euler_genus().euler_genus, 0);
        assert!(m.faces().is_empty());
    }

    #[test]
    fn bad_rotations_are_rejected() {
        let r = EmbeddedMap::new(1, vec![(seg(1), [0, 0], Sign::Plus)], vec![vec![(seg(1), 0)]]);
        assert!(r.is_err());
        let r = EmbeddedMap::new(
            1,
            vec![(seg(1), [0, 0], Sign::Plus)],
            vec![vec![(seg(1), 0), (seg(1), 0), (seg(1), 1)]],
        );
        assert!(r.is_err());
    }

    #[test]
    fn sign_algebra() {
        assert_eq!(Sign::Minus * Sign::Minus, Sign::Plus);
        assert_eq!(-Sign::Plus, Sign::Minus);
        assert_eq!(Sign::product([Sign::Plus, Sign::Minus, Sign::Plus]), Sign::Minus);
    }
}
