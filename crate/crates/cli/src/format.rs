//! Line-based text formats: `.gd` for combinatorial drawings and `.geo` for
//! straight-line polyline drawings.

use std::collections::BTreeMap;
use std::fmt::{self, Write};
use std::str::FromStr;

use ht_core::geo::{GeoEdge, GeometricDrawing, Point};
use ht_core::{CrossingRecord, DrawingMap, EdgeId, End, Multigraph, Sign, Strand, Surface, VertexId};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormatError {
    /// 1-based line the problem is attributed to, if any.
    pub line: Option<usize>,
    pub message: String,
}

impl fmt::Display for FormatError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.line {
            Some(n) => write!(f, "line {n}: {}", self.message),
            None => f.write_str(&self.message),
        }
    }
}

impl std::error::Error for FormatError {}

fn at(line: usize, message: impl Into<String>) -> FormatError {
    FormatError {
        line: Some(line),
        message: message.into(),
    }
}

fn num<T: FromStr>(line: usize, tok: &str, what: &str) -> Result<T, FormatError> {
    tok.parse().map_err(|_| at(line, format!("bad {what} `{tok}`")))
}

fn sign(line: usize, tok: &str) -> Result<Sign, FormatError> {
    match tok {
        "+" => Ok(Sign::Plus),
        "-" => Ok(Sign::Minus),
        _ => Err(at(line, format!("bad sign `{tok}`, expected + or -"))),
    }
}

fn end(line: usize, tok: &str) -> Result<End, FormatError> {
    let (e, side) = tok
        .split_once('.')
        .ok_or_else(|| at(line, format!("bad end `{tok}`, expected <edge>.0 or <edge>.1")))?;
    let side = match side {
        "0" => 0,
        "1" => 1,
        _ => return Err(at(line, format!("bad end side in `{tok}`"))),
    };
    Ok(End {
        edge: EdgeId(num(line, e, "edge id")?),
        side,
    })
}

/// Non-blank lines with `#` comments removed, numbered from 1.
fn records(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(i, l)| {
        let l = l.split('#').next().unwrap_or("");
        let toks: Vec<&str> = l.split_whitespace().collect();
        (!toks.is_empty()).then_some((i + 1, toks))
    })
}

fn arity(line: usize, toks: &[&str], n: usize) -> Result<(), FormatError> {
    if toks.len() != n {
        return Err(at(line, format!("`{}` takes {} fields, got {}", toks[0], n - 1, toks.len() - 1)));
    }
    Ok(())
}

fn header<'a>(
    recs: &mut impl Iterator<Item = (usize, Vec<&'a str>)>,
    magic: &str,
) -> Result<(), FormatError> {
    match recs.next() {
        Some((_, t)) if t == [magic, "1"] => Ok(()),
        Some((n, _)) => Err(at(n, format!("expected header `{magic} 1`"))),
        None => Err(at(1, format!("empty document, expected header `{magic} 1`"))),
    }
}

/// Parses and validates a `.gd` document.
pub fn parse_gd(text: &str) -> Result<DrawingMap, FormatError> {
    let mut recs = records(text);
    header(&mut recs, "gdraw")?;
    let mut surface = None;
    let mut graph = Multigraph::new();
    let mut rotations: BTreeMap<VertexId, Vec<End>> = BTreeMap::new();
    let mut crossings = Vec::new();
    let mut minus: Vec<(usize, EdgeId, usize)> = Vec::new();
    // where each validation location was declared
    let mut origin: BTreeMap<String, usize> = BTreeMap::new();

    for (n, t) in recs {
        match t[0] {
            "surface" => {
                arity(n, &t, 3)?;
                if surface.is_some() {
                    return Err(at(n, "second surface line"));
                }
                let orientable = match t[2] {
                    "orientable" => true,
                    "nonorientable" => false,
                    x => return Err(at(n, format!("bad orientability `{x}`"))),
                };
                surface = Some(Surface {
                    euler_genus: num(n, t[1], "Euler genus")?,
                    orientable,
                });
                origin.insert("surface".into(), n);
            }
            "vertex" => {
                arity(n, &t, 2)?;
                let v = VertexId(num(n, t[1], "vertex id")?);
                graph.add_vertex(v).map_err(|e| at(n, e.to_string()))?;
            }
            "edge" => {
                arity(n, &t, 4)?;
                let e = EdgeId(num(n, t[1], "edge id")?);
                let tail = VertexId(num(n, t[2], "vertex id")?);
                let head = VertexId(num(n, t[3], "vertex id")?);
                graph.add_edge(e, tail, head).map_err(|err| at(n, err.to_string()))?;
                origin.insert(format!("edge {e}"), n);
                origin.insert(format!("sig {e}"), n);
            }
            "rot" => {
                if t.len() < 2 {
                    return Err(at(n, "`rot` needs a vertex id"));
                }
                let v = VertexId(num(n, t[1], "vertex id")?);
                let ends = t[2..].iter().map(|x| end(n, x)).collect::<Result<Vec<_>, _>>()?;
                if rotations.insert(v, ends).is_some() {
                    return Err(at(n, format!("second rotation for vertex {v}")));
                }
                origin.insert(format!("rot {v}"), n);
            }
            "cross" => {
                arity(n, &t, 7)?;
                let id: u32 = num(n, t[1], "crossing id")?;
                let strand = |e: &str, p: &str| -> Result<Strand, FormatError> {
                    Ok(Strand {
                        edge: EdgeId(num(n, e, "edge id")?),
                        position: num(n, p, "position")?,
                    })
                };
                crossings.push(CrossingRecord {
                    id,
                    a: strand(t[2], t[3])?,
                    b: strand(t[4], t[5])?,
                    handedness: sign(n, t[6])?,
                });
                origin.entry(format!("cross {id}")).or_insert(n);
            }
            "sig" => {
                arity(n, &t, 4)?;
                if t[3] != "-" {
                    return Err(at(n, "only negative segments are listed, as `sig <edge> <index> -`"));
                }
                minus.push((n, EdgeId(num(n, t[1], "edge id")?), num(n, t[2], "segment index")?));
            }
            x => return Err(at(n, format!("unknown record `{x}`"))),
        }
    }

    let surface = surface.ok_or_else(|| at(1, "missing `surface` line"))?;
    for v in graph.vertices() {
        rotations.entry(v).or_default();
    }
    let mut slots: BTreeMap<EdgeId, usize> = graph.edge_ids().map(|e| (e, 0)).collect();
    for c in &crossings {
        for s in [c.a, c.b] {
            if let Some(k) = slots.get_mut(&s.edge) {
                *k += 1;
            }
        }
    }
    let mut signatures: BTreeMap<EdgeId, Vec<Sign>> =
        slots.iter().map(|(&e, &k)| (e, vec![Sign::Plus; k + 1])).collect();
    for (n, e, i) in minus {
        let segs = signatures
            .get_mut(&e)
            .ok_or_else(|| at(n, format!("unknown edge {e}")))?;
        let len = segs.len();
        let s = segs
            .get_mut(i)
            .ok_or_else(|| at(n, format!("edge {e} has {len} segments, no index {i}")))?;
        if *s == Sign::Minus {
            return Err(at(n, format!("segment {i} of edge {e} listed twice")));
        }
        *s = Sign::Minus;
    }

    let d = DrawingMap::from_parts(graph, crossings, rotations, signatures, surface);
    let diags = d.validate();
    if let Some(first) = diags.first() {
        let line = origin.get(&first.location).copied();
        let message = diags.iter().map(|x| x.to_string()).collect::<Vec<_>>().join("; ");
        return Err(FormatError {
            line,
            message: format!("invalid drawing: {message}"),
        });
    }
    Ok(d)
}

/// Canonical `.gd` text: records grouped by kind, each group sorted by id.
pub fn write_gd(d: &DrawingMap) -> String {
    let g = d.graph();
    let mut s = String::from("gdraw 1\n");
    writeln!(s, "surface {}", d.surface()).unwrap();
    for v in g.vertices() {
        writeln!(s, "vertex {v}").unwrap();
    }
    for (e, t, h) in g.edges() {
        writeln!(s, "edge {e} {t} {h}").unwrap();
    }
    for v in g.vertices() {
        s.push_str("rot ");
        s.push_str(&v.to_string());
        for x in d.rotation(v) {
            write!(s, " {x}").unwrap();
        }
        s.push('\n');
    }
    for c in d.crossings() {
        writeln!(
            s,
            "cross {} {} {} {} {} {}",
            c.id, c.a.edge, c.a.position, c.b.edge, c.b.position, c.handedness
        )
        .unwrap();
    }
    for (e, signs) in d.signatures() {
        for (i, x) in signs.iter().enumerate() {
            if *x == Sign::Minus {
                writeln!(s, "sig {e} {i} -").unwrap();
            }
        }
    }
    s
}

pub fn parse_geo(text: &str) -> Result<GeometricDrawing, FormatError> {
    let mut recs = records(text);
    header(&mut recs, "geo")?;
    let mut g = GeometricDrawing::new();
    for (n, t) in recs {
        match t[0] {
            "vertex" => {
                arity(n, &t, 4)?;
                let v = VertexId(num(n, t[1], "vertex id")?);
                let p = Point::new(num(n, t[2], "coordinate")?, num(n, t[3], "coordinate")?);
                if g.vertices.insert(v, p).is_some() {
                    return Err(at(n, format!("duplicate vertex id {v}")));
                }
            }
            "edge" => {
                if t.len() < 4 || t.len() % 2 != 0 {
                    return Err(at(n, "`edge` takes an id, two vertex ids and coordinate pairs"));
                }
                let e = EdgeId(num(n, t[1], "edge id")?);
                let tail = VertexId(num(n, t[2], "vertex id")?);
                let head = VertexId(num(n, t[3], "vertex id")?);
                for v in [tail, head] {
                    if !g.vertices.contains_key(&v) {
                        return Err(at(n, format!("unknown vertex {v}")));
                    }
                }
                let via = t[4..]
                    .chunks(2)
                    .map(|c| Ok(Point::new(num(n, c[0], "coordinate")?, num(n, c[1], "coordinate")?)))
                    .collect::<Result<Vec<_>, FormatError>>()?;
                if g.edges.insert(e, GeoEdge { tail, head, via }).is_some() {
                    return Err(at(n, format!("duplicate edge id {e}")));
                }
            }
            x => return Err(at(n, format!("unknown record `{x}`"))),
        }
    }
    Ok(g)
}

pub fn write_geo(g: &GeometricDrawing) -> String {
    let mut s = String::from("geo 1\n");
    for (v, p) in &g.vertices {
        writeln!(s, "vertex {v} {} {}", p.x, p.y).unwrap();
    }
    for (e, edge) in &g.edges {
        write!(s, "edge {e} {} {}", edge.tail, edge.head).unwrap();
        for p in &edge.via {
            write!(s, " {} {}", p.x, p.y).unwrap();
        }
        s.push('\n');
    }
    s
}

/// Which format a document is in, judged by its first record.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DocKind {
    Drawing,
    Geometric,
}

pub fn sniff(text: &str) -> Result<DocKind, FormatError> {
    match records(text).next() {
        Some((_, t)) if t.first() == Some(&"gdraw") => Ok(DocKind::Drawing),
        Some((_, t)) if t.first() == Some(&"geo") => Ok(DocKind::Geometric),
        Some((n, _)) => Err(at(n, "expected header `gdraw 1` or `geo 1`")),
        None => Err(at(1, "empty document")),
    }
}

/// A cycle list such as `12,23,31;12,24,41`.
pub fn parse_edge_lists(s: &str) -> Result<Vec<Vec<EdgeId>>, String> {
    s.split(';')
        .map(|part| {
            part.split(',')
                .map(|x| {
                    let x = x.trim();
                    x.parse().map(EdgeId).map_err(|_| format!("bad edge id `{x}` in `{s}`"))
                })
                .collect()
        })
        .collect()
}

pub fn edge_list(edges: impl IntoIterator<Item = EdgeId>) -> String {
    edges.into_iter().map(|e| e.to_string()).collect::<Vec<_>>().join(",")
}

#[cfg(test)]
mod tests {
    use super::*;
    use ht_core::fixtures;
    use ht_core::geo::ingest;

    #[test]
    fn gd_round_trip() {
        for d in [
            fixtures::figure_eight(),
            ingest(&fixtures::k4_convex_geo()).unwrap(),
            DrawingMap::from_scheme(
                &fixtures::projective_two_loops(),
                Surface { euler_genus: 1, orientable: false },
            ),
        ] {
            let text = write_gd(&d);
            let back = parse_gd(&text).unwrap();
            assert_eq!(back, d);
            assert_eq!(write_gd(&back), text);
        }
    }

    #[test]
    fn k4_document() {
        let d = ingest(&fixtures::k4_convex_geo()).unwrap();
        let text = write_gd(&d);
        assert!(text.starts_with("gdraw 1\nsurface 0 orientable\nvertex 1\n"));
        assert_eq!(text.matches("\ncross ").count(), 1);
        assert!(!text.contains("\nsig "));
    }

    #[test]
    fn comments_and_blank_lines() {
        let text = "# a loop\ngdraw 1\n\nsurface 1 nonorientable\nvertex 1\nedge 1 1 1\nrot 1 1.0 1.1 # both ends\nsig 1 0 -\n";
        let d = parse_gd(text).unwrap();
        assert_eq!(d.segment_signs(EdgeId(1)), &[Sign::Minus]);
    }

    #[test]
    fn errors_carry_line_numbers() {
        let cases = [
            ("", Some(1), "empty"),
            ("gdraw 2\n", Some(1), "header"),
            ("gdraw 1\nsurface 0 orientable\nvertex x\n", Some(3), "vertex id"),
            ("gdraw 1\nsurface 0 orientable\nvertex 1\nedge 1 1 2\n", Some(4), "unknown vertex"),
            ("gdraw 1\nsurface 0 orientable\nvertex 1\nedge 1 1 1\nrot 1 1.0 1.2\n", Some(5), "end side"),
            ("gdraw 1\nsurface 0 orientable\nbogus\n", Some(3), "unknown record"),
            ("gdraw 1\nvertex 1\n", Some(1), "surface"),
            ("gdraw 1\nsurface 0 orientable\nvertex 1\nvertex 2\nedge 1 1 2\nrot 1 1.0\nrot 2\n", Some(7), "missing ends"),
            ("gdraw 1\nsurface 0 orientable\nvertex 1\nedge 1 1 1\nrot 1 1.0 1.1\nsig 1 3 -\n", Some(6), "no index 3"),
        ];
        for (text, line, needle) in cases {
            let err = parse_gd(text).unwrap_err();
            assert_eq!(err.line, line, "{text:?}: {err}");
            assert!(err.message.contains(needle), "{text:?}: {err}");
        }
    }

    #[test]
    fn geo_round_trip_and_errors() {
        let g = fixtures::k33_geo();
        let text = write_geo(&g);
        assert_eq!(parse_geo(&text).unwrap(), g);
        assert_eq!(write_geo(&parse_geo(&text).unwrap()), text);
        let err = parse_geo("geo 1\nvertex 1 0 0\nedge 1 1 2\n").unwrap_err();
        assert_eq!(err.line, Some(3));
        let err = parse_geo("geo 1\nvertex 1 0 0\nvertex 2 1 1\nedge 1 1 2 5\n").unwrap_err();
        assert_eq!(err.line, Some(4));
    }

    #[test]
    fn sniffing_and_lists() {
        assert_eq!(sniff("\n# x\ngeo 1\n").unwrap(), DocKind::Geometric);
        assert_eq!(sniff("gdraw 1\n").unwrap(), DocKind::Drawing);
        assert!(sniff("nope\n").is_err());
        let l = parse_edge_lists("12,23,31;12,24,41").unwrap();
        assert_eq!(l[1], vec![EdgeId(12), EdgeId(24), EdgeId(41)]);
        assert!(parse_edge_lists("1,x").is_err());
        assert_eq!(edge_list(l[0].clone()), "12,23,31");
    }
}
