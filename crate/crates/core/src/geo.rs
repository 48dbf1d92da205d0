//! Integer polyline drawings in the plane and their exact conversion into
//! [`DrawingMap`] values.
//!
//! All decisions use `i128` orientation tests. Positions of crossings along a
//! segment are compared by cross-multiplying the intersection parameters.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::drawing::{CrossingRecord, DrawingMap, Strand, Surface};
use crate::error::{Error, Result};
use crate::graph::{EdgeId, End, Multigraph, VertexId};
use crate::map::Sign;

/// Largest absolute coordinate accepted by [`ingest`].
pub const COORD_LIMIT: i64 = 1 << 30;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Point {
    pub x: i64,
    pub y: i64,
}

impl Point {
    pub fn new(x: i64, y: i64) -> Self {
        Point { x, y }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeoEdge {
    pub tail: VertexId,
    pub head: VertexId,
    pub via: Vec<Point>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GeometricDrawing {
    pub vertices: BTreeMap<VertexId, Point>,
    pub edges: BTreeMap<EdgeId, GeoEdge>,
}

impl GeometricDrawing {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_vertex(&mut self, v: u32, x: i64, y: i64) -> &mut Self {
        self.vertices.insert(VertexId(v), Point::new(x, y));
        self
    }

    pub fn add_edge(&mut self, e: u32, tail: u32, head: u32, via: &[(i64, i64)]) -> &mut Self {
        self.edges.insert(
            EdgeId(e),
            GeoEdge {
                tail: VertexId(tail),
                head: VertexId(head),
                via: via.iter().map(|&(x, y)| Point::new(x, y)).collect(),
            },
        );
        self
    }

    /// The full polyline of `e`, endpoints included. Panics on unknown ids.
    pub fn polyline(&self, e: EdgeId) -> Vec<Point> {
        let edge = &self.edges[&e];
        let mut pts = Vec::with_capacity(edge.via.len() + 2);
        pts.push(self.vertices[&edge.tail]);
        pts.extend_from_slice(&edge.via);
        pts.push(self.vertices[&edge.head]);
        pts
    }
}

fn sub(a: Point, b: Point) -> (i128, i128) {
    (a.x as i128 - b.x as i128, a.y as i128 - b.y as i128)
}

fn cross(a: (i128, i128), b: (i128, i128)) -> i128 {
    a.0 * b.1 - a.1 * b.0
}

fn dot(a: (i128, i128), b: (i128, i128)) -> i128 {
    a.0 * b.0 + a.1 * b.1
}

fn orient(a: Point, b: Point, c: Point) -> i128 {
    cross(sub(b, a), sub(c, a))
}

/// `c` lies on the closed segment `ab`.
fn on_segment(a: Point, b: Point, c: Point) -> bool {
    orient(a, b, c) == 0 && dot(sub(c, a), sub(c, b)) <= 0
}

/// Counterclockwise angular order starting from the positive x axis.
fn angle_cmp(a: (i128, i128), b: (i128, i128)) -> Ordering {
    let half = |v: (i128, i128)| if v.1 > 0 || (v.1 == 0 && v.0 > 0) { 0 } else { 1 };
    half(a).cmp(&half(b)).then_with(|| 0.cmp(&cross(a, b)))
}

#[derive(Clone, Copy, Debug)]
struct Segment {
    edge: EdgeId,
    index: usize,
    last: usize,
    p: Point,
    q: Point,
}

/// Intersection parameter `num / den` along a segment, `den > 0`.
#[derive(Clone, Copy, Debug)]
struct Param {
    num: i128,
    den: i128,
}

impl Param {
    fn cmp(&self, other: &Param) -> Ordering {
        (self.num * other.den).cmp(&(other.num * self.den))
    }

    fn along(s: &Segment, other: &Segment) -> Param {
        let d = sub(other.q, other.p);
        let mut num = cross(sub(other.p, s.p), d);
        let mut den = cross(sub(s.q, s.p), d);
        if den < 0 {
            num = -num;
            den = -den;
        }
        Param { num, den }
    }

    fn value(&self) -> f64 {
        self.num as f64 / self.den as f64
    }
}

#[derive(Clone, Copy, Debug)]
pub(crate) struct RawCrossing {
    first: usize,
    second: usize,
    t_first: Param,
    t_second: Param,
}

fn degenerate(location: impl Into<String>, reason: impl Into<String>) -> Error {
    Error::DegenerateInput {
        location: location.into(),
        reason: reason.into(),
    }
}

fn segment_name(s: &Segment) -> String {
    format!("edge {} segment {}", s.edge, s.index)
}

fn segments(g: &GeometricDrawing) -> Result<Vec<Segment>> {
    for (v, p) in &g.vertices {
        if p.x.abs() > COORD_LIMIT || p.y.abs() > COORD_LIMIT {
            return Err(degenerate(format!("vertex {v}"), "coordinate out of range"));
        }
    }
    let mut out = Vec::new();
    for (&e, edge) in &g.edges {
        for v in [edge.tail, edge.head] {
            if !g.vertices.contains_key(&v) {
                return Err(Error::UnknownVertex(v));
            }
        }
        if edge.via.iter().any(|p| p.x.abs() > COORD_LIMIT || p.y.abs() > COORD_LIMIT) {
            return Err(degenerate(format!("edge {e}"), "coordinate out of range"));
        }
        let pts = g.polyline(e);
        let last = pts.len() - 2;
        for (index, w) in pts.windows(2).enumerate() {
            let s = Segment {
                edge: e,
                index,
                last,
                p: w[0],
                q: w[1],
            };
            if s.p == s.q {
                return Err(degenerate(segment_name(&s), "zero-length segment"));
            }
            out.push(s);
        }
    }
    Ok(out)
}

/// Points where `a` and `b` may legitimately meet: the joint between
/// consecutive segments of one polyline, and a vertex both segments end at.
fn sanctioned(g: &GeometricDrawing, a: &Segment, b: &Segment) -> Vec<Point> {
    let mut pts = Vec::new();
    if a.edge == b.edge && (b.index == a.index + 1 || a.index == b.index + 1) {
        pts.push(if b.index == a.index + 1 { a.q } else { a.p });
    }
    let terminal = |s: &Segment| {
        let e = &g.edges[&s.edge];
        let mut v = Vec::new();
        if s.index == 0 {
            v.push(e.tail);
        }
        if s.index == s.last {
            v.push(e.head);
        }
        v
    };
    let tb = terminal(b);
    for v in terminal(a) {
        if tb.contains(&v) {
            pts.push(g.vertices[&v]);
        }
    }
    pts
}

fn check_vertices(g: &GeometricDrawing, segs: &[Segment]) -> Result<()> {
    let mut seen: BTreeMap<Point, VertexId> = BTreeMap::new();
    for (&v, &p) in &g.vertices {
        if let Some(u) = seen.insert(p, v) {
            return Err(degenerate(format!("vertex {v}"), format!("coincides with vertex {u}")));
        }
    }
    for (&v, &p) in &g.vertices {
        for s in segs {
            if !on_segment(s.p, s.q, p) {
                continue;
            }
            let at_tail = p == s.p;
            let at_head = p == s.q;
            if (at_tail && s.index == 0) || (at_head && s.index == s.last) {
                continue;
            }
            let reason = if at_tail || at_head {
                format!("via point lies on vertex {v}")
            } else {
                format!("vertex {v} lies inside the segment")
            };
            return Err(degenerate(segment_name(s), reason));
        }
    }
    Ok(())
}

fn pair_crossing(g: &GeometricDrawing, segs: &[Segment], i: usize, j: usize) -> Result<Option<RawCrossing>> {
    let (a, b) = (&segs[i], &segs[j]);
    let legal = sanctioned(g, a, b);
    let loc = || format!("{} and {}", segment_name(a), segment_name(b));
    let o1 = orient(a.p, a.q, b.p);
    let o2 = orient(a.p, a.q, b.q);
    if o1 == 0 && o2 == 0 {
        let d = sub(a.q, a.p);
        let t = |p: Point| dot(sub(p, a.p), d);
        let (lo, hi) = (t(b.p).min(t(b.q)), t(b.p).max(t(b.q)));
        let overlap = hi.min(dot(d, d)) - lo.max(0);
        if overlap > 0 {
            return Err(degenerate(loc(), "overlapping collinear segments"));
        }
        if overlap == 0 {
            let touch = [a.p, a.q].into_iter().find(|&p| p == b.p || p == b.q);
            match touch {
                Some(p) if legal.contains(&p) => {}
                _ => return Err(degenerate(loc(), "segments touch without crossing")),
            }
        }
        return Ok(None);
    }
    let o3 = orient(b.p, b.q, a.p);
    let o4 = orient(b.p, b.q, a.q);
    if o1.signum() * o2.signum() < 0 && o3.signum() * o4.signum() < 0 {
        return Ok(Some(RawCrossing {
            first: i,
            second: j,
            t_first: Param::along(a, b),
            t_second: Param::along(b, a),
        }));
    }
    let touches = [
        (o1 == 0 && on_segment(a.p, a.q, b.p)).then_some(b.p),
        (o2 == 0 && on_segment(a.p, a.q, b.q)).then_some(b.q),
        (o3 == 0 && on_segment(b.p, b.q, a.p)).then_some(a.p),
        (o4 == 0 && on_segment(b.p, b.q, a.q)).then_some(a.q),
    ];
    for p in touches.into_iter().flatten() {
        if !legal.contains(&p) {
            return Err(degenerate(loc(), "segments touch without crossing"));
        }
    }
    Ok(None)
}

fn raw_crossings(g: &GeometricDrawing) -> Result<(Vec<Segment>, Vec<RawCrossing>)> {
    let segs = segments(g)?;
    check_vertices(g, &segs)?;
    let mut raw = Vec::new();
    for i in 0..segs.len() {
        for j in i + 1..segs.len() {
            if let Some(c) = pair_crossing(g, &segs, i, j)? {
                raw.push(c);
            }
        }
    }
    // at most one crossing at any point: no two on one segment share a parameter
    let mut per_segment: BTreeMap<usize, Vec<Param>> = BTreeMap::new();
    for c in &raw {
        per_segment.entry(c.first).or_default().push(c.t_first);
        per_segment.entry(c.second).or_default().push(c.t_second);
    }
    for (s, ts) in &per_segment {
        for x in 0..ts.len() {
            for y in x + 1..ts.len() {
                if ts[x].cmp(&ts[y]) == Ordering::Equal {
                    return Err(degenerate(segment_name(&segs[*s]), "three segments through one point"));
                }
            }
        }
    }
    Ok((segs, raw))
}

/// Converts a general-position polyline drawing into a plane [`DrawingMap`].
pub fn ingest(g: &GeometricDrawing) -> Result<DrawingMap> {
    let (segs, raw) = raw_crossings(g)?;
    let mut graph = Multigraph::new();
    for &v in g.vertices.keys() {
        graph.add_vertex(v)?;
    }
    for (&e, edge) in &g.edges {
        graph.add_edge(e, edge.tail, edge.head)?;
    }

    // occurrences per edge: (segment index, parameter, crossing, is first)
    let mut occ: BTreeMap<EdgeId, Vec<(usize, Param, usize, bool)>> = BTreeMap::new();
    for (k, c) in raw.iter().enumerate() {
        let (a, b) = (&segs[c.first], &segs[c.second]);
        occ.entry(a.edge).or_default().push((a.index, c.t_first, k, true));
        occ.entry(b.edge).or_default().push((b.index, c.t_second, k, false));
    }
    let mut pos: BTreeMap<(usize, bool), usize> = BTreeMap::new();
    for list in occ.values_mut() {
        list.sort_by(|x, y| x.0.cmp(&y.0).then_with(|| x.1.cmp(&y.1)));
        for (p, item) in list.iter().enumerate() {
            pos.insert((item.2, item.3), p);
        }
    }

    let mut crossings = Vec::with_capacity(raw.len());
    for (k, c) in raw.iter().enumerate() {
        let (sa, sb) = (&segs[c.first], &segs[c.second]);
        let mut a = (Strand { edge: sa.edge, position: pos[&(k, true)] }, sub(sa.q, sa.p));
        let mut b = (Strand { edge: sb.edge, position: pos[&(k, false)] }, sub(sb.q, sb.p));
        if b.0 < a.0 {
            std::mem::swap(&mut a, &mut b);
        }
        crossings.push(CrossingRecord {
            id: k as u32 + 1,
            a: a.0,
            b: b.0,
            handedness: Sign::from_bool(cross(a.1, b.1) > 0),
        });
    }

    let mut rotations: BTreeMap<VertexId, Vec<(End, (i128, i128))>> =
        g.vertices.keys().map(|&v| (v, Vec::new())).collect();
    for &e in g.edges.keys() {
        let pts = g.polyline(e);
        let n = pts.len();
        let edge = &g.edges[&e];
        rotations.get_mut(&edge.tail).unwrap().push((End::tail(e), sub(pts[1], pts[0])));
        rotations.get_mut(&edge.head).unwrap().push((End::head(e), sub(pts[n - 2], pts[n - 1])));
    }
    let rotations = rotations
        .into_iter()
        .map(|(v, mut ends)| {
            ends.sort_by(|x, y| angle_cmp(x.1, y.1));
            (v, ends.into_iter().map(|(end, _)| end).collect())
        })
        .collect();

    let signatures = g
        .edges
        .keys()
        .map(|&e| (e, vec![Sign::Plus; occ.get(&e).map_or(0, Vec::len) + 1]))
        .collect();
    let mut d = DrawingMap::from_parts(graph, crossings, rotations, signatures, Surface::sphere());
    d.canonicalize_crossings();
    Ok(d)
}

/// Approximate intersection points, for rendering only.
pub fn crossing_points(g: &GeometricDrawing) -> Result<Vec<(f64, f64)>> {
    let (segs, raw) = raw_crossings(g)?;
    Ok(raw
        .iter()
        .map(|c| {
            let s = &segs[c.first];
            let t = c.t_first.value();
            (
                s.p.x as f64 + t * (s.q.x - s.p.x) as f64,
                s.p.y as f64 + t * (s.q.y - s.p.y) as f64,
            )
        })
        .collect())
}

/// Displaces every via point by a random offset in {-1, 0, 1}².
pub fn jitter(g: &GeometricDrawing, seed: u64) -> GeometricDrawing {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = g.clone();
    for edge in out.edges.values_mut() {
        for p in &mut edge.via {
            p.x += rng.gen_range(-1..=1);
            p.y += rng.gen_range(-1..=1);
        }
    }
    out
}

/// Ingests `g`, jittering via points with successive seeds while the input
/// stays degenerate. Non-geometric errors are returned immediately.
pub fn ingest_jittered(g: &GeometricDrawing, seed: u64, attempts: usize) -> Result<DrawingMap> {
    let mut last = match ingest(g) {
        Ok(d) => return Ok(d),
        Err(e @ Error::DegenerateInput { .. }) => e,
        Err(e) => return Err(e),
    };
    for k in 0..attempts as u64 {
        match ingest(&jitter(g, seed.wrapping_add(k))) {
            Ok(d) => return Ok(d),
            Err(e) => last = e,
        }
    }
    Err(last)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GeoParams {
    pub vertices: usize,
    pub edges: usize,
    /// Total number of via points over all edges.
    pub vias: usize,
    /// Coordinates are drawn from `[-extent, extent]`.
    pub extent: i64,
}

impl Default for GeoParams {
    fn default() -> Self {
        GeoParams {
            vertices: 6,
            edges: 10,
            vias: 6,
            extent: 200,
        }
    }
}

/// A random general-position polyline drawing. Edges are added one at a time
/// and resampled until the drawing stays non-degenerate.
pub fn random_geometric_drawing(seed: u64, params: GeoParams) -> Result<GeometricDrawing> {
    if params.vertices == 0 && params.edges > 0 {
        return Err(Error::InvalidParameter("edges need at least one vertex".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let r = params.extent;
    let mut g = GeometricDrawing::new();
    let mut used = std::collections::BTreeSet::new();
    for v in 1..=params.vertices as u32 {
        loop {
            let p = Point::new(rng.gen_range(-r..=r), rng.gen_range(-r..=r));
            if used.insert(p) {
                g.vertices.insert(VertexId(v), p);
                break;
            }
        }
    }
    if ingest(&g).is_err() {
        return Err(Error::GenerationFailed("vertex placement".into()));
    }
    let mut budget = params.vias;
    let n = params.vertices as u32;
    for e in 1..=params.edges as u32 {
        let mut placed = false;
        for _ in 0..200 {
            let tail = rng.gen_range(1..=n);
            let allow_loop = budget >= 2 && rng.gen_bool(0.1);
            let head = if allow_loop {
                tail
            } else if n == 1 {
                continue;
            } else {
                loop {
                    let h = rng.gen_range(1..=n);
                    if h != tail {
                        break h;
                    }
                }
            };
            let lo = if tail == head { 2 } else { 0 };
            let k = if budget > lo { rng.gen_range(lo..=budget.min(lo + 3)) } else { lo };
            let via: Vec<Point> = (0..k)
                .map(|_| Point::new(rng.gen_range(-r..=r), rng.gen_range(-r..=r)))
                .collect();
            g.edges.insert(
                EdgeId(e),
                GeoEdge {
                    tail: VertexId(tail),
                    head: VertexId(head),
                    via,
                },
            );
            if raw_crossings(&g).is_ok() {
                budget -= k;
                placed = true;
                break;
            }
            g.edges.remove(&EdgeId(e));
        }
        if !placed {
            return Err(Error::GenerationFailed(format!("could not place edge {e}")));
        }
    }
    Ok(g)
}
