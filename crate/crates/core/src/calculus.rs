//! Crossing parities between cycles: σ₁ (edge-pair crossing count with shared
//! pairs excluded), σ (alternation of cycle ends over the shared components),
//! Ω ≡ σ + σ₁, self-crossing counts, and the even-subgraph witness for an odd
//! pair.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use fixedbitset::FixedBitSet;

use crate::drawing::{DrawingMap, EmbeddingScheme};
use crate::error::{Error, Result};
use crate::graph::{cycles, symmetric_difference, Cycle, Dsu, EdgeId, EdgeSet, End, EvenSubgraph, VertexId};
use crate::map::Sign;

/// Crossing counts aggregated per edge pair, for fast repeated σ₁ and sc queries.
#[derive(Clone, Debug)]
pub struct CrossingTable {
    index: HashMap<EdgeId, usize>,
    pairs: Vec<(usize, usize, u64)>,
    singles: Vec<(usize, u64)>,
}

impl CrossingTable {
    pub fn new(d: &DrawingMap) -> Self {
        let index: HashMap<EdgeId, usize> =
            d.graph().edge_ids().enumerate().map(|(i, e)| (e, i)).collect();
        let mut pairs: BTreeMap<(usize, usize), u64> = BTreeMap::new();
        let mut singles: BTreeMap<usize, u64> = BTreeMap::new();
        for c in d.crossings() {
            let (a, b) = (index[&c.a.edge], index[&c.b.edge]);
            if a == b {
                *singles.entry(a).or_default() += 1;
            } else {
                *pairs.entry((a.min(b), a.max(b))).or_default() += 1;
            }
        }
        CrossingTable {
            index,
            pairs: pairs.into_iter().map(|((a, b), n)| (a, b, n)).collect(),
            singles: singles.into_iter().collect(),
        }
    }

    pub fn mask(&self, edges: &EdgeSet) -> Result<FixedBitSet> {
        let mut m = FixedBitSet::with_capacity(self.index.len());
        for e in edges {
            m.insert(*self.index.get(e).ok_or(Error::UnknownEdge(*e))?);
        }
        Ok(m)
    }

    /// σ₁ on edge masks.
    pub fn sigma1(&self, h1: &FixedBitSet, h2: &FixedBitSet) -> u64 {
        let mut total = 0;
        for &(a, b, n) in &self.pairs {
            let (a1, a2, b1, b2) = (h1[a], h2[a], h1[b], h2[b]);
            if ((a1 && b2) || (b1 && a2)) && !(a1 && a2 && b1 && b2) {
                total += n;
            }
        }
        total
    }

    /// Number of crossings with both strands in `h`.
    pub fn self_crossings(&self, h: &FixedBitSet) -> u64 {
        let pairs: u64 = self
            .pairs
            .iter()
            .filter(|&&(a, b, _)| h[a] && h[b])
            .map(|&(_, _, n)| n)
            .sum();
        let singles: u64 = self.singles.iter().filter(|&&(a, _)| h[a]).map(|&(_, n)| n).sum();
        pairs + singles
    }
}

/// Number of crossings between `h1` and `h2`, not counting crossings whose
/// two edges both lie in `h1 ∩ h2`. Self-crossings of one edge never count.
pub fn sigma1(d: &DrawingMap, h1: &EdgeSet, h2: &EdgeSet) -> Result<u64> {
    let t = CrossingTable::new(d);
    Ok(t.sigma1(&t.mask(h1)?, &t.mask(h2)?))
}

pub fn self_crossings(d: &DrawingMap, h: &EdgeSet) -> Result<u64> {
    let t = CrossingTable::new(d);
    Ok(t.self_crossings(&t.mask(h)?))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ComponentKind {
    Vertex(VertexId),
    /// A maximal shared path, edges in order from `ends.0` to `ends.1`.
    Path {
        edges: Vec<EdgeId>,
        ends: (VertexId, VertexId),
    },
}

/// A connected component of C₁ ∩ C₂ with its alternation value.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SharedComponent {
    pub kind: ComponentKind,
    pub alternation: u8,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SigmaResult {
    pub parity: u8,
    pub components: Vec<SharedComponent>,
}

/// Rotation positions and edge signs of a scheme, prepared for σ queries.
pub struct SigmaContext<'a> {
    scheme: &'a EmbeddingScheme,
    pos: HashMap<End, (usize, usize)>,
}

impl<'a> SigmaContext<'a> {
    pub fn new(scheme: &'a EmbeddingScheme) -> Self {
        let mut pos = HashMap::new();
        for rot in scheme.rotations().values() {
            for (i, &end) in rot.iter().enumerate() {
                pos.insert(end, (i, rot.len()));
            }
        }
        SigmaContext { scheme, pos }
    }

    /// σ for two cycles of the scheme's graph; validates both operands.
    pub fn sigma(&self, c1: &Cycle, c2: &Cycle) -> Result<SigmaResult> {
        let g = self.scheme.graph();
        for c in [c1, c2] {
            Cycle::new(g, c.edges().iter().copied())?;
        }
        self.sigma_unchecked(c1, c2)
    }

    pub(crate) fn sigma_unchecked(&self, c1: &Cycle, c2: &Cycle) -> Result<SigmaResult> {
        if c1.edges() == c2.edges() {
            return Err(Error::IdenticalCycles);
        }
        let g = self.scheme.graph();
        let shared_v: Vec<VertexId> = c1.vertices().intersection(c2.vertices()).copied().collect();
        let shared_e: Vec<EdgeId> = c1.edges().intersection(c2.edges()).copied().collect();
        let index: BTreeMap<VertexId, usize> =
            shared_v.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let mut dsu = Dsu::new(shared_v.len());
        for &e in &shared_e {
            let (t, h) = g.endpoints(e).unwrap();
            dsu.union(index[&t], index[&h]);
        }
        let mut comp_vertices: BTreeMap<usize, Vec<VertexId>> = BTreeMap::new();
        for &v in &shared_v {
            comp_vertices.entry(dsu.find(index[&v])).or_default().push(v);
        }
        let mut comp_edges: BTreeMap<usize, Vec<EdgeId>> = BTreeMap::new();
        for &e in &shared_e {
            let (t, _) = g.endpoints(e).unwrap();
            comp_edges.entry(dsu.find(index[&t])).or_default().push(e);
        }

        let mut components = Vec::new();
        for (root, verts) in comp_vertices {
            let component = match comp_edges.get(&root) {
                None => {
                    let v = verts[0];
                    let a = c1.ends_at(g, v);
                    let b = c2.ends_at(g, v);
                    let phi = self.alternates([a[0], a[1]], [b[0], b[1]]);
                    SharedComponent {
                        kind: ComponentKind::Vertex(v),
                        alternation: phi as u8,
                    }
                }
                Some(edges) => self.path_component(c1, c2, edges),
            };
            components.push(component);
        }
        let parity = components.iter().map(|c| c.alternation).sum::<u8>() % 2;
        Ok(SigmaResult { parity, components })
    }

    fn position(&self, end: End) -> (usize, usize) {
        self.pos[&end]
    }

    fn alternates(&self, a: [End; 2], b: [End; 2]) -> bool {
        let (a0, n) = self.position(a[0]);
        let (a1, _) = self.position(a[1]);
        let span = (a1 + n - a0) % n;
        let inside = |e: End| {
            let (p, _) = self.position(e);
            (p + n - a0) % n < span
        };
        inside(b[0]) != inside(b[1])
    }

    /// Contract the shared path and test alternation of the four remaining
    /// ends. The rotation at each path end is read starting just after the
    /// path's own end; the far end is read backwards when the path reverses
    /// local orientation.
    fn path_component(&self, c1: &Cycle, c2: &Cycle, edges: &[EdgeId]) -> SharedComponent {
        let g = self.scheme.graph();
        let mut shared_deg: BTreeMap<VertexId, usize> = BTreeMap::new();
        for &e in edges {
            let (t, h) = g.endpoints(e).unwrap();
            *shared_deg.entry(t).or_default() += 1;
            *shared_deg.entry(h).or_default() += 1;
        }
        let terminals: Vec<VertexId> =
            shared_deg.iter().filter(|(_, &d)| d == 1).map(|(&v, _)| v).collect();
        debug_assert_eq!(terminals.len(), 2, "shared component is a path");
        let (x, y) = (terminals[0], terminals[1]);

        // walk x -> y
        let mut remaining: BTreeSet<EdgeId> = edges.iter().copied().collect();
        let mut order = Vec::with_capacity(edges.len());
        let mut transport = Sign::Plus;
        let mut cur = x;
        let mut first_end = None;
        let mut last_end = None;
        while !remaining.is_empty() {
            let e = *remaining
                .iter()
                .find(|&&e| {
                    let (t, h) = g.endpoints(e).unwrap();
                    t == cur || h == cur
                })
                .expect("path continues");
            remaining.remove(&e);
            let (t, h) = g.endpoints(e).unwrap();
            let (leave, arrive, next) = if t == cur {
                (End::tail(e), End::head(e), h)
            } else {
                (End::head(e), End::tail(e), t)
            };
            if first_end.is_none() {
                first_end = Some(leave);
            }
            last_end = Some(arrive);
            transport *= self.scheme.signature(e);
            order.push(e);
            cur = next;
        }
        let (px, py) = (first_end.unwrap(), last_end.unwrap());

        let other_end = |c: &Cycle, v: VertexId, path_end: End| -> End {
            c.ends_at(g, v)
                .into_iter()
                .find(|&z| z != path_end)
                .expect("cycle has two ends at a vertex")
        };
        let (ax, bx) = (other_end(c1, x, px), other_end(c2, x, px));
        let (ay, by) = (other_end(c1, y, py), other_end(c2, y, py));

        let (ppx, nx) = self.position(px);
        let off_x = |z: End| (self.position(z).0 + nx - ppx) % nx;
        let c1_first_at_x = off_x(ax) < off_x(bx);

        let (ppy, ny) = self.position(py);
        let off_y = |z: End| {
            let p = self.position(z).0;
            if transport.is_plus() {
                (p + ny - ppy) % ny
            } else {
                (ppy + ny - p) % ny
            }
        };
        let c1_first_at_y = off_y(ay) < off_y(by);

        SharedComponent {
            kind: ComponentKind::Path {
                edges: order,
                ends: (x, y),
            },
            alternation: (c1_first_at_x == c1_first_at_y) as u8,
        }
    }
}

pub fn sigma(d: &DrawingMap, c1: &Cycle, c2: &Cycle) -> Result<SigmaResult> {
    let scheme = d.restrict_scheme();
    SigmaContext::new(&scheme).sigma(c1, c2)
}

/// Crossing parity of the two cycle curves, σ + σ₁ mod 2.
pub fn omega(d: &DrawingMap, c1: &Cycle, c2: &Cycle) -> Result<u8> {
    let s = sigma(d, c1, c2)?;
    let s1 = sigma1(d, c1.edges(), c2.edges())?;
    Ok(((s.parity as u64 + s1) % 2) as u8)
}

/// Both sides of each exact identity relating self-crossings and σ₁ for a
/// cycle pair with shared edge set B.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdentityReport {
    pub sc_c1: u64,
    pub sc_c2: u64,
    pub sc_shared: u64,
    pub sigma1_pair: u64,
    pub sigma1_c1_shared: u64,
    pub sigma1_c2_shared: u64,
    pub sigma1_private: u64,
    pub sc_private1: u64,
    pub sc_private2: u64,
    pub sc_symmetric_difference: u64,
}

impl IdentityReport {
    /// `sc(Cᵢ) = sc(Cᵢ∖B) + sc(B) + σ₁(Cᵢ, B)` for i = 1, 2.
    pub fn self_crossing_split(&self) -> [(u64, u64); 2] {
        [
            (self.sc_c1, self.sc_private1 + self.sc_shared + self.sigma1_c1_shared),
            (self.sc_c2, self.sc_private2 + self.sc_shared + self.sigma1_c2_shared),
        ]
    }

    /// `σ₁(C₁,C₂) = σ₁(C₁,B) + σ₁(C₂,B) + σ₁(C₁∖B, C₂∖B)`.
    pub fn additivity(&self) -> (u64, u64) {
        (
            self.sigma1_pair,
            self.sigma1_c1_shared + self.sigma1_c2_shared + self.sigma1_private,
        )
    }

    /// `sc(C₁ Δ C₂) = sc(C₁) + sc(C₂) − 2sc(B) − σ₁(C₁,C₂) + 2σ₁(C₁∖B, C₂∖B)`.
    pub fn symmetric_difference_count(&self) -> (i64, i64) {
        let rhs = self.sc_c1 as i64 + self.sc_c2 as i64 - 2 * self.sc_shared as i64
            - self.sigma1_pair as i64
            + 2 * self.sigma1_private as i64;
        (self.sc_symmetric_difference as i64, rhs)
    }

    pub fn holds(&self) -> bool {
        let [a, b] = self.self_crossing_split();
        let (c, d) = self.additivity();
        let (e, f) = self.symmetric_difference_count();
        a.0 == a.1 && b.0 == b.1 && c == d && e == f
    }
}

pub fn decomposition_identities(d: &DrawingMap, c1: &Cycle, c2: &Cycle) -> Result<IdentityReport> {
    if c1.edges() == c2.edges() {
        return Err(Error::IdenticalCycles);
    }
    identities_report(&CrossingTable::new(d), c1, c2)
}

/// [`decomposition_identities`] against a prebuilt table.
pub fn identities_report(t: &CrossingTable, c1: &Cycle, c2: &Cycle) -> Result<IdentityReport> {
    if c1.edges() == c2.edges() {
        return Err(Error::IdenticalCycles);
    }
    identities_with(t, c1.edges(), c2.edges())
}

fn identities_with(t: &CrossingTable, e1: &EdgeSet, e2: &EdgeSet) -> Result<IdentityReport> {
    let shared: EdgeSet = e1.intersection(e2).copied().collect();
    let p1: EdgeSet = e1.difference(&shared).copied().collect();
    let p2: EdgeSet = e2.difference(&shared).copied().collect();
    let (m1, m2, mb, mp1, mp2) = (t.mask(e1)?, t.mask(e2)?, t.mask(&shared)?, t.mask(&p1)?, t.mask(&p2)?);
    let mdiff = t.mask(&symmetric_difference(e1, e2))?;
    Ok(IdentityReport {
        sc_c1: t.self_crossings(&m1),
        sc_c2: t.self_crossings(&m2),
        sc_shared: t.self_crossings(&mb),
        sigma1_pair: t.sigma1(&m1, &m2),
        sigma1_c1_shared: t.sigma1(&m1, &mb),
        sigma1_c2_shared: t.sigma1(&m2, &mb),
        sigma1_private: t.sigma1(&mp1, &mp2),
        sc_private1: t.self_crossings(&mp1),
        sc_private2: t.self_crossings(&mp2),
        sc_symmetric_difference: t.self_crossings(&mdiff),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PairParity {
    pub first: usize,
    pub second: usize,
    pub sigma1: u64,
    pub sigma1_parity: u8,
    pub sigma_parity: u8,
    pub omega_parity: u8,
}

/// σ₁/σ/Ω parities over every unordered pair of distinct cycles.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParityReport {
    pub cycles: Vec<Cycle>,
    pub pairs: Vec<PairParity>,
    /// Index pairs into `cycles` with odd σ₁.
    pub odd_pairs: Vec<(usize, usize)>,
}

impl ParityReport {
    pub fn is_even(&self) -> bool {
        self.odd_pairs.is_empty()
    }

    pub fn odd_cycle_pairs(&self) -> impl Iterator<Item = (&Cycle, &Cycle)> {
        self.odd_pairs.iter().map(|&(i, j)| (&self.cycles[i], &self.cycles[j]))
    }
}

pub fn check_hypothesis(d: &DrawingMap, cap: usize) -> Result<ParityReport> {
    let cs = cycles(d.graph(), cap)?;
    let table = CrossingTable::new(d);
    let masks: Vec<FixedBitSet> = cs.iter().map(|c| table.mask(c.edges())).collect::<Result<_>>()?;
    let scheme = d.restrict_scheme();
    let ctx = SigmaContext::new(&scheme);
    let mut pairs = Vec::new();
    let mut odd_pairs = Vec::new();
    for i in 0..cs.len() {
        for j in i + 1..cs.len() {
            let s1 = table.sigma1(&masks[i], &masks[j]);
            let sg = ctx.sigma_unchecked(&cs[i], &cs[j])?.parity;
            let p1 = (s1 % 2) as u8;
            if p1 == 1 {
                odd_pairs.push((i, j));
            }
            pairs.push(PairParity {
                first: i,
                second: j,
                sigma1: s1,
                sigma1_parity: p1,
                sigma_parity: sg,
                omega_parity: (sg + p1) % 2,
            });
        }
    }
    Ok(ParityReport {
        cycles: cs,
        pairs,
        odd_pairs,
    })
}

/// Only the σ₁ parity check, without σ; the first odd pair if any.
pub fn first_odd_pair(d: &DrawingMap, cap: usize) -> Result<Option<(Cycle, Cycle, u64)>> {
    let cs = cycles(d.graph(), cap)?;
    let table = CrossingTable::new(d);
    let masks: Vec<FixedBitSet> = cs.iter().map(|c| table.mask(c.edges())).collect::<Result<_>>()?;
    for i in 0..cs.len() {
        for j in i + 1..cs.len() {
            let s1 = table.sigma1(&masks[i], &masks[j]);
            if s1 % 2 == 1 {
                return Ok(Some((cs[i].clone(), cs[j].clone(), s1)));
            }
        }
    }
    Ok(None)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WitnessSource {
    FirstCycle,
    SecondCycle,
    SymmetricDifference,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lemma9Witness {
    pub subgraph: EvenSubgraph,
    pub self_crossings: u64,
    pub source: WitnessSource,
}

/// An even subgraph with an odd number of self-crossings, built from a cycle
/// pair with odd σ₁: one of the cycles if its own count is odd, otherwise
/// their symmetric difference.
pub fn lemma9_witness(d: &DrawingMap, c1: &Cycle, c2: &Cycle) -> Result<Lemma9Witness> {
    let g = d.graph();
    for c in [c1, c2] {
        Cycle::new(g, c.edges().iter().copied())?;
    }
    if c1.edges() == c2.edges() {
        return Err(Error::IdenticalCycles);
    }
    let t = CrossingTable::new(d);
    let (m1, m2) = (t.mask(c1.edges())?, t.mask(c2.edges())?);
    let count = t.sigma1(&m1, &m2);
    if count.is_multiple_of(2) {
        return Err(Error::EvenPair { count });
    }
    let sc1 = t.self_crossings(&m1);
    if sc1 % 2 == 1 {
        return Ok(Lemma9Witness {
            subgraph: EvenSubgraph::new(g, c1.edges().iter().copied())?,
            self_crossings: sc1,
            source: WitnessSource::FirstCycle,
        });
    }
    let sc2 = t.self_crossings(&m2);
    if sc2 % 2 == 1 {
        return Ok(Lemma9Witness {
            subgraph: EvenSubgraph::new(g, c2.edges().iter().copied())?,
            self_crossings: sc2,
            source: WitnessSource::SecondCycle,
        });
    }
    let diff = symmetric_difference(c1.edges(), c2.edges());
    let sc = t.self_crossings(&t.mask(&diff)?);
    debug_assert!(sc % 2 == 1);
    Ok(Lemma9Witness {
        subgraph: EvenSubgraph::new(g, diff)?,
        self_crossings: sc,
        source: WitnessSource::SymmetricDifference,
    })
}
