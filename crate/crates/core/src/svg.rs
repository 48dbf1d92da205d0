//! Static SVG pictures of geometric drawings and of combinatorial drawings
//! (the latter with a seeded spring layout of the augmented map).

use std::fmt::Write;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::drawing::DrawingMap;
use crate::error::Result;
use crate::geo::{crossing_points, GeometricDrawing};

const MARGIN: f64 = 20.0;
const SPRING_ROUNDS: usize = 400;

struct Canvas {
    edges: Vec<(String, Vec<(f64, f64)>)>,
    vertices: Vec<(String, (f64, f64))>,
    crossings: Vec<(f64, f64)>,
}

impl Canvas {
    fn render(&self) -> String {
        let pts = self
            .edges
            .iter()
            .flat_map(|(_, p)| p.iter().copied())
            .chain(self.vertices.iter().map(|(_, p)| *p));
        let (mut x0, mut y0, mut x1, mut y1) = (f64::MAX, f64::MAX, f64::MIN, f64::MIN);
        for (x, y) in pts {
            x0 = x0.min(x);
            y0 = y0.min(y);
            x1 = x1.max(x);
            y1 = y1.max(y);
        }
        if x0 > x1 {
            (x0, y0, x1, y1) = (0.0, 0.0, 100.0, 100.0);
        }
        // scale so the drawing is at least 400 units wide
        let span = (x1 - x0).max(y1 - y0).max(1.0);
        let k = (400.0 / span).max(1.0);
        let tx = |x: f64| (x - x0) * k + MARGIN;
        let ty = |y: f64| (y1 - y) * k + MARGIN;
        let (w, h) = ((x1 - x0) * k + 2.0 * MARGIN, (y1 - y0) * k + 2.0 * MARGIN);

        let mut s = String::new();
        writeln!(
            s,
            r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {w:.2} {h:.2}" width="{w:.0}" height="{h:.0}">"#
        )
        .unwrap();
        writeln!(s, r#"<style>.edge{{fill:none;stroke:#335;stroke-width:1.5}}.vertex{{fill:#c33}}.crossing{{fill:none;stroke:#393;stroke-width:1}}text{{font:10px sans-serif}}</style>"#).unwrap();
        for (id, p) in &self.edges {
            let points: Vec<String> = p.iter().map(|&(x, y)| format!("{:.2},{:.2}", tx(x), ty(y))).collect();
            writeln!(s, r#"<polyline class="edge" data-edge="{id}" points="{}"/>"#, points.join(" ")).unwrap();
        }
        for &(x, y) in &self.crossings {
            writeln!(s, r#"<circle class="crossing" cx="{:.2}" cy="{:.2}" r="4"/>"#, tx(x), ty(y)).unwrap();
        }
        for (id, (x, y)) in &self.vertices {
            let (cx, cy) = (tx(*x), ty(*y));
            writeln!(s, r#"<circle class="vertex" data-vertex="{id}" cx="{cx:.2}" cy="{cy:.2}" r="3"/>"#).unwrap();
            writeln!(s, r#"<text x="{:.2}" y="{:.2}">{id}</text>"#, cx + 4.0, cy - 4.0).unwrap();
        }
        s.push_str("</svg>\n");
        s
    }
}

/// Picture of a geometric drawing at its own coordinates.
pub fn render_geometric(g: &GeometricDrawing) -> Result<String> {
    let crossings = crossing_points(g)?;
    let canvas = Canvas {
        edges: g
            .edges
            .keys()
            .map(|&e| {
                let pts = g.polyline(e).iter().map(|p| (p.x as f64, p.y as f64)).collect();
                (e.to_string(), pts)
            })
            .collect(),
        vertices: g
            .vertices
            .iter()
            .map(|(v, p)| (v.to_string(), (p.x as f64, p.y as f64)))
            .collect(),
        crossings,
    };
    Ok(canvas.render())
}

/// Spring layout of the augmented map: real vertices first, then one node
/// per crossing.
fn spring_layout(n: usize, links: &[(usize, usize)], seed: u64) -> Vec<(f64, f64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pos: Vec<(f64, f64)> = (0..n)
        .map(|_| (rng.gen_range(0.0..100.0), rng.gen_range(0.0..100.0)))
        .collect();
    if n < 2 {
        return pos;
    }
    let ideal = 100.0 / (n as f64).sqrt();
    let mut temp = 10.0;
    for _ in 0..SPRING_ROUNDS {
        let mut disp = vec![(0.0f64, 0.0f64); n];
        for i in 0..n {
            for j in i + 1..n {
                let (dx, dy) = (pos[i].0 - pos[j].0, pos[i].1 - pos[j].1);
                let dist = (dx * dx + dy * dy).sqrt().max(0.01);
                let f = ideal * ideal / dist;
                disp[i].0 += dx / dist * f;
                disp[i].1 += dy / dist * f;
                disp[j].0 -= dx / dist * f;
                disp[j].1 -= dy / dist * f;
            }
        }
        for &(a, b) in links {
            if a == b {
                continue;
            }
            let (dx, dy) = (pos[a].0 - pos[b].0, pos[a].1 - pos[b].1);
            let dist = (dx * dx + dy * dy).sqrt().max(0.01);
            let f = dist * dist / ideal;
            disp[a].0 -= dx / dist * f;
            disp[a].1 -= dy / dist * f;
            disp[b].0 += dx / dist * f;
            disp[b].1 += dy / dist * f;
        }
        for i in 0..n {
            let (dx, dy) = disp[i];
            let len = (dx * dx + dy * dy).sqrt().max(0.01);
            pos[i].0 += dx / len * len.min(temp);
            pos[i].1 += dy / len * len.min(temp);
        }
        temp = (temp * 0.99).max(0.5);
    }
    pos
}

/// Best-effort picture of a combinatorial drawing; deterministic for a seed.
pub fn render_drawing(d: &DrawingMap, seed: u64) -> String {
    let g = d.graph();
    let vindex: std::collections::BTreeMap<_, _> = g.vertices().enumerate().map(|(i, v)| (v, i)).collect();
    let nv = vindex.len();
    let table = d.slot_table();
    let mut routes = Vec::new();
    for (e, t, h) in g.edges() {
        let mut r = vec![vindex[&t]];
        r.extend(table[&e].iter().map(|&(c, _)| nv + c));
        r.push(vindex[&h]);
        routes.push((e, r));
    }
    let links: Vec<(usize, usize)> = routes
        .iter()
        .flat_map(|(_, r)| r.windows(2).map(|w| (w[0], w[1])).collect::<Vec<_>>())
        .collect();
    let pos = spring_layout(nv + d.crossing_count(), &links, seed);
    let edges = routes
        .into_iter()
        .map(|(e, r)| {
            let mut pts: Vec<(f64, f64)> = Vec::with_capacity(r.len() + 2);
            for w in r.windows(2) {
                pts.push(pos[w[0]]);
                if w[0] == w[1] {
                    // a crossing-free loop gets a small teardrop
                    let (x, y) = pos[w[0]];
                    pts.push((x + 8.0, y + 4.0));
                    pts.push((x + 8.0, y - 4.0));
                }
            }
            pts.push(pos[*r.last().unwrap()]);
            (e.to_string(), pts)
        })
        .collect();
    let canvas = Canvas {
        edges,
        vertices: vindex.iter().map(|(v, &i)| (v.to_string(), pos[i])).collect(),
        crossings: (0..d.crossing_count()).map(|c| pos[nv + c]).collect(),
    };
    canvas.render()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::geo::ingest;

    fn count(s: &str, pat: &str) -> usize {
        s.matches(pat).count()
    }

    #[test]
    fn triangle_picture() {
        let mut g = GeometricDrawing::new();
        g.add_vertex(1, 0, 0).add_vertex(2, 4, 0).add_vertex(3, 0, 4);
        g.add_edge(1, 1, 2, &[]).add_edge(2, 2, 3, &[]).add_edge(3, 3, 1, &[]);
        let s = render_geometric(&g).unwrap();
        assert_eq!(count(&s, r#"class="edge""#), 3);
        assert_eq!(count(&s, r#"class="vertex""#), 3);
        assert!(s.starts_with("<svg") && s.ends_with("</svg>\n"));
    }

    #[test]
    fn k4_marks_one_crossing() {
        let g = fixtures::k4_convex_geo();
        let s = render_geometric(&g).unwrap();
        assert_eq!(count(&s, r#"class="edge""#), 6);
        assert_eq!(count(&s, r#"class="crossing""#), 1);
        let d = ingest(&g).unwrap();
        let t = render_drawing(&d, 1);
        assert_eq!(count(&t, r#"class="edge""#), 6);
        assert_eq!(count(&t, r#"class="crossing""#), 1);
        assert_eq!(t, render_drawing(&d, 1));
    }

    #[test]
    fn empty_canvas() {
        let s = render_geometric(&GeometricDrawing::new()).unwrap();
        assert_eq!(count(&s, "<polyline"), 0);
        assert!(s.contains("viewBox"));
        let d = crate::drawing::DrawingMap::from_parts(
            crate::graph::Multigraph::new(),
            vec![],
            Default::default(),
            Default::default(),
            crate::drawing::Surface::sphere(),
        );
        assert!(render_drawing(&d, 0).contains("</svg>"));
    }
}
