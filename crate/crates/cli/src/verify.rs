//! Invariant suites run by `ht verify`, over one drawing or a seeded corpus.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use ht_core::calculus::{check_hypothesis, identities_report, CrossingTable};
use ht_core::geo::{ingest_jittered, random_geometric_drawing, GeoParams};
use ht_core::graph::cycles;
use ht_core::transform::{contract_edge, random_even_drawing, GenParams};
use ht_core::{DrawingMap, Error, Result};

use crate::format::edge_list;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, clap::ValueEnum)]
pub enum Suite {
    PlaneLaw,
    Identities,
    Contraction,
    All,
}

impl Suite {
    pub fn name(self) -> &'static str {
        match self {
            Suite::PlaneLaw => "plane-law",
            Suite::Identities => "identities",
            Suite::Contraction => "contraction",
            Suite::All => "all",
        }
    }

    fn expand(self) -> Vec<Suite> {
        match self {
            Suite::All => vec![Suite::PlaneLaw, Suite::Identities, Suite::Contraction],
            s => vec![s],
        }
    }
}

pub struct CorpusItem {
    pub label: String,
    pub drawing: DrawingMap,
}

/// Largest sizes drawn for corpus elements.
pub const CORPUS_MAX_VERTICES: usize = 8;
pub const CORPUS_MAX_EDGES: usize = 14;
pub const CORPUS_MAX_MOVES: usize = 10;

fn generated(seed: u64) -> Result<DrawingMap> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let vertices = rng.gen_range(3..=CORPUS_MAX_VERTICES);
    let p = GenParams {
        vertices,
        edges: rng.gen_range(vertices - 1..=CORPUS_MAX_EDGES),
        moves: rng.gen_range(0..=CORPUS_MAX_MOVES),
        genus: 0,
        orientable: true,
    };
    random_even_drawing(seed, p)
}

fn geometric(seed: u64) -> Result<DrawingMap> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let p = GeoParams {
        vertices: rng.gen_range(3..=CORPUS_MAX_VERTICES),
        edges: rng.gen_range(3..=CORPUS_MAX_EDGES),
        vias: rng.gen_range(0..=CORPUS_MAX_MOVES),
        extent: 200,
    };
    ingest_jittered(&random_geometric_drawing(seed, p)?, seed, 16)
}

/// `count` drawings, alternating between generated even sphere drawings and
/// ingested random polyline drawings. Deterministic in `seed`.
pub fn corpus(seed: u64, count: usize) -> Result<Vec<CorpusItem>> {
    (0..count)
        .into_par_iter()
        .map(|i| {
            let base = seed.wrapping_mul(0x9e37_79b9_7f4a_7c15).wrapping_add(i as u64);
            let (kind, build): (&str, fn(u64) -> Result<DrawingMap>) =
                if i % 2 == 0 { ("gen", generated) } else { ("geo", geometric) };
            // a rare degenerate geometric draw moves on to the next sub-seed
            let mut last = None;
            for k in 0..8u64 {
                let s = base.wrapping_add(k << 40);
                match build(s) {
                    Ok(drawing) => {
                        return Ok(CorpusItem {
                            label: format!("{kind}:{s}"),
                            drawing,
                        })
                    }
                    Err(e @ (Error::GenerationFailed(_) | Error::DegenerateInput { .. })) => last = Some(e),
                    Err(e) => return Err(e),
                }
            }
            Err(last.unwrap())
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub suite: Suite,
    pub label: String,
    pub detail: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SuiteReport {
    pub drawings: usize,
    /// Cycle pairs examined (per contraction for the contraction suite).
    pub pairs: usize,
    /// Drawings the suite does not apply to.
    pub skipped: usize,
    pub violations: Vec<Violation>,
}

fn pair(a: &ht_core::Cycle, b: &ht_core::Cycle) -> String {
    format!("{};{}", edge_list(a.edge_list()), edge_list(b.edge_list()))
}

/// Pairs checked, or the first violation.
fn run_one(suite: Suite, item: &CorpusItem, cap: usize) -> Result<Option<std::result::Result<usize, Violation>>> {
    let d = &item.drawing;
    let violation = |detail: String| Violation {
        suite,
        label: item.label.clone(),
        detail,
    };
    match suite {
        Suite::PlaneLaw => {
            if d.surface().euler_genus != 0 {
                return Ok(None);
            }
            let r = check_hypothesis(d, cap)?;
            for p in &r.pairs {
                if p.omega_parity != 0 {
                    let (a, b) = (&r.cycles[p.first], &r.cycles[p.second]);
                    return Ok(Some(Err(violation(format!(
                        "{} sigma={} sigma1={}",
                        pair(a, b),
                        p.sigma_parity,
                        p.sigma1
                    )))));
                }
            }
            Ok(Some(Ok(r.pairs.len())))
        }
        Suite::Identities => {
            let cs = cycles(d.graph(), cap)?;
            let t = CrossingTable::new(d);
            let mut n = 0;
            for i in 0..cs.len() {
                for j in i + 1..cs.len() {
                    let r = identities_report(&t, &cs[i], &cs[j])?;
                    if !r.holds() {
                        return Ok(Some(Err(violation(format!("{} {r:?}", pair(&cs[i], &cs[j]))))));
                    }
                    n += 1;
                }
            }
            Ok(Some(Ok(n)))
        }
        Suite::Contraction => {
            let cs = cycles(d.graph(), cap)?;
            let before = CrossingTable::new(d);
            let masks = cs.iter().map(|c| before.mask(c.edges())).collect::<Result<Vec<_>>>()?;
            let genus = d.augmented_map().map_err(|m| Error::InvalidDrawing(vec![m]))?.euler_genus();
            let mut n = 0;
            for (e, t, h) in d.graph().edges().collect::<Vec<_>>() {
                if t == h {
                    continue;
                }
                let (d2, corr) = contract_edge(d, e)?;
                let diags = d2.validate();
                if !diags.is_empty() {
                    return Ok(Some(Err(violation(format!("contracting {e}: {}", diags[0])))));
                }
                if d.crossing_count() == 0 {
                    let g2 = d2.augmented_map().map_err(|m| Error::InvalidDrawing(vec![m]))?.euler_genus();
                    if g2 != genus {
                        return Ok(Some(Err(violation(format!("contracting {e}: {genus} became {g2}")))));
                    }
                }
                let after = CrossingTable::new(&d2);
                let images: Vec<_> = cs.iter().map(|c| corr.image(d2.graph(), c)).collect();
                let image_masks = images
                    .iter()
                    .map(|c| c.as_ref().map(|c| after.mask(c.edges())).transpose())
                    .collect::<Result<Vec<_>>>()?;
                for i in 0..cs.len() {
                    for j in i + 1..cs.len() {
                        let (Some(a), Some(b)) = (&image_masks[i], &image_masks[j]) else { continue };
                        if images[i] == images[j] {
                            continue;
                        }
                        let s = before.sigma1(&masks[i], &masks[j]);
                        let s2 = after.sigma1(a, b);
                        if s % 2 != s2 % 2 {
                            return Ok(Some(Err(violation(format!(
                                "contracting {e}: {} sigma1 {s} became {s2}",
                                pair(&cs[i], &cs[j])
                            )))));
                        }
                        n += 1;
                    }
                }
            }
            Ok(Some(Ok(n)))
        }
        Suite::All => unreachable!("expanded by the caller"),
    }
}

/// Runs `suite` over `items` in parallel; results are in corpus order.
pub fn run_suite(suite: Suite, items: &[CorpusItem], cap: usize) -> Result<Vec<(Suite, SuiteReport)>> {
    suite
        .expand()
        .into_iter()
        .map(|s| {
            let outcomes = items
                .par_iter()
                .map(|item| run_one(s, item, cap))
                .collect::<Result<Vec<_>>>()?;
            let mut rep = SuiteReport {
                drawings: items.len(),
                ..SuiteReport::default()
            };
            for o in outcomes {
                match o {
                    None => rep.skipped += 1,
                    Some(Ok(n)) => rep.pairs += n,
                    Some(Err(v)) => rep.violations.push(v),
                }
            }
            Ok((s, rep))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use ht_core::fixtures;
    use ht_core::geo::ingest;

    #[test]
    fn corpus_is_deterministic_and_mixed() {
        let a = corpus(5, 12).unwrap();
        let b = corpus(5, 12).unwrap();
        assert_eq!(a.len(), 12);
        for (x, y) in a.iter().zip(&b) {
            assert_eq!(x.label, y.label);
            assert_eq!(x.drawing, y.drawing);
        }
        assert!(a[0].label.starts_with("gen:") && a[1].label.starts_with("geo:"));
        for item in &a {
            assert!(item.drawing.graph().vertex_count() <= CORPUS_MAX_VERTICES);
            assert!(item.drawing.graph().edge_count() <= CORPUS_MAX_EDGES);
        }
    }

    #[test]
    fn suites_pass_on_small_corpus() {
        let items = corpus(1, 10).unwrap();
        for (s, rep) in run_suite(Suite::All, &items, 10_000).unwrap() {
            assert!(rep.violations.is_empty(), "{}: {:?}", s.name(), rep.violations);
            assert!(rep.pairs > 0);
        }
    }

    #[test]
    fn plane_law_skips_surfaces() {
        let d = DrawingMap::from_scheme(
            &fixtures::toroidal_k5(),
            ht_core::Surface { euler_genus: 2, orientable: true },
        );
        let items = [
            CorpusItem { label: "torus".into(), drawing: d },
            CorpusItem { label: "k4".into(), drawing: ingest(&fixtures::k4_convex_geo()).unwrap() },
        ];
        let reps = run_suite(Suite::PlaneLaw, &items, 10_000).unwrap();
        assert_eq!(reps[0].1.skipped, 1);
        assert!(reps[0].1.violations.is_empty());
    }
}
