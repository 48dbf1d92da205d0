//! The eight acceptance criteria, one PASS/FAIL line each.

use std::collections::BTreeSet;
use std::io::Write;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use ht_cli::format::{edge_list, parse_gd, write_gd};
use ht_cli::verify::{corpus, run_suite, CorpusItem, Suite, CORPUS_MAX_EDGES, CORPUS_MAX_VERTICES};
use ht_core::calculus::{check_hypothesis, decomposition_identities, lemma9_witness, sigma1, CrossingTable};
use ht_core::fixtures;
use ht_core::geo::ingest;
use ht_core::graph::{even_subgraphs, symmetric_difference};
use ht_core::transform::{contract_edge, embed_on_surface, planarize, random_even_drawing, random_finger_move, GenParams};
use ht_core::{Cycle, DrawingMap, EdgeId, EvenSubgraph, Genus, Surface};

const SEED: u64 = 17;
const CORPUS_SIZE: usize = 240;
const MIN_CORPUS: usize = 200;
const CAP: usize = 100_000;
const K4_LIMIT: Duration = Duration::from_secs(1);
const CORPUS_LIMIT: Duration = Duration::from_secs(60);
const PLANARIZE_RUNS: usize = 100;
const PLANARIZE_LIMIT: Duration = Duration::from_secs(60);
const SURFACE_RUNS: usize = 50;

type Check = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn ids(xs: &[u32]) -> Vec<EdgeId> {
    xs.iter().map(|&x| EdgeId(x)).collect()
}

fn cycle(d: &DrawingMap, xs: &[u32]) -> Cycle {
    Cycle::new(d.graph(), ids(xs)).unwrap()
}

fn pair_key(a: &Cycle, b: &Cycle) -> String {
    let (a, b) = (edge_list(a.edge_list()), edge_list(b.edge_list()));
    if a <= b {
        format!("{a};{b}")
    } else {
        format!("{b};{a}")
    }
}

fn criterion_1() -> Check {
    let start = Instant::now();
    let d = ingest(&fixtures::k4_convex_geo()).map_err(|e| e.to_string())?;
    ensure(d.crossing_count() == 1, || format!("{} crossings", d.crossing_count()))?;
    let (c1, c2) = (cycle(&d, &[12, 23, 13]), cycle(&d, &[12, 24, 14]));
    let s = sigma1(&d, c1.edges(), c2.edges()).unwrap();
    ensure(s == 1, || format!("sigma1 = {s}"))?;
    let w = lemma9_witness(&d, &c1, &c2).unwrap();
    let want: BTreeSet<EdgeId> = ids(&[23, 13, 24, 14]).into_iter().collect();
    ensure(w.subgraph.edges() == &want && w.self_crossings == 1, || format!("{w:?}"))?;
    let r = decomposition_identities(&d, &c1, &c2).unwrap();
    let terms = (
        r.sc_symmetric_difference,
        r.sc_c1,
        r.sc_c2,
        2 * r.sc_shared,
        r.sigma1_pair,
        2 * r.sigma1_private,
    );
    ensure(terms == (1, 0, 0, 0, 1, 2), || format!("{terms:?}"))?;
    ensure(r.symmetric_difference_count() == (1, 1), || format!("{r:?}"))?;
    let t = start.elapsed();
    ensure(t < K4_LIMIT, || format!("took {t:?}"))?;
    Ok(format!("sigma1 1, witness 13,14,23,24 sc 1, 1 = 0 + 0 - 0 - 1 + 2, {:.3} s", t.as_secs_f64()))
}

fn corpus_shape(items: &[CorpusItem]) -> Result<(), String> {
    ensure(items.len() >= MIN_CORPUS, || format!("only {} drawings", items.len()))?;
    for it in items {
        let g = it.drawing.graph();
        ensure(g.vertex_count() <= CORPUS_MAX_VERTICES && g.edge_count() <= CORPUS_MAX_EDGES, || {
            format!("{} is too large", it.label)
        })?;
    }
    let geo = items.iter().filter(|i| i.label.starts_with("geo:")).count();
    ensure(geo > 0 && geo < items.len(), || "corpus is not mixed".into())
}

fn suite(items: &[CorpusItem], s: Suite) -> Result<(usize, usize), String> {
    let reps = run_suite(s, items, CAP).map_err(|e| e.to_string())?;
    let (_, rep) = &reps[0];
    // every suite tolerates zero violations
    ensure(rep.violations.is_empty(), || format!("{:?}", rep.violations[0]))?;
    Ok((rep.pairs, rep.skipped))
}

fn criterion_2(items: &[CorpusItem], built: Duration) -> Check {
    let start = Instant::now();
    corpus_shape(items)?;
    let (pairs, skipped) = suite(items, Suite::PlaneLaw)?;
    ensure(skipped == 0, || format!("{skipped} drawings skipped"))?;
    let t = built + start.elapsed();
    ensure(t < CORPUS_LIMIT, || format!("took {t:?}"))?;
    Ok(format!("{} drawings, {pairs} pairs, 0 violations, {:.2} s", items.len(), t.as_secs_f64()))
}

fn criterion_3(items: &[CorpusItem]) -> Check {
    let (pairs, _) = suite(items, Suite::Contraction)?;
    let plane = items.iter().filter(|i| i.drawing.crossing_count() == 0).count();
    Ok(format!("{pairs} image pairs, genus checked on {plane} crossing-free drawings, 0 violations"))
}

fn criterion_4() -> Check {
    let start = Instant::now();
    let mut crossings = 0;
    for seed in 0..PLANARIZE_RUNS as u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let vertices = rng.gen_range(4..=8);
        let p = GenParams {
            vertices,
            edges: rng.gen_range(vertices..=14),
            moves: rng.gen_range(1..=10),
            genus: 0,
            orientable: true,
        };
        let d = random_even_drawing(1000 + seed, p).map_err(|e| e.to_string())?;
        crossings += d.crossing_count();
        let out = planarize(&d).map_err(|e| format!("seed {seed}: {e}"))?;
        ensure(out.crossing_count() == 0, || format!("seed {seed}: crossings left"))?;
        ensure(out.rotations() == d.rotations(), || format!("seed {seed}: rotation system changed"))?;
        let g = out.augmented_map().map_err(|e| e.to_string())?.euler_genus();
        ensure(g == Genus { euler_genus: 0, orientable: true }, || format!("seed {seed}: {g}"))?;
    }
    let t = start.elapsed();
    ensure(t < PLANARIZE_LIMIT, || format!("took {t:?}"))?;
    Ok(format!("{PLANARIZE_RUNS} drawings, {crossings} crossings removed, {:.2} s", t.as_secs_f64()))
}

fn golden(name: &str) -> BTreeSet<String> {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/tests/golden").join(name);
    std::fs::read_to_string(path)
        .unwrap()
        .lines()
        .map(|l| {
            let (a, b) = l.split_once(';').unwrap();
            if a <= b {
                l.to_string()
            } else {
                format!("{b};{a}")
            }
        })
        .collect()
}

fn criterion_5() -> Check {
    let mut out = Vec::new();
    for (name, g, file) in [
        ("K5", fixtures::k5_convex_geo(), "k5_odd_pairs.txt"),
        ("K3,3", fixtures::k33_geo(), "k33_odd_pairs.txt"),
    ] {
        let d = ingest(&g).map_err(|e| e.to_string())?;
        let r = check_hypothesis(&d, CAP).map_err(|e| e.to_string())?;
        let got: BTreeSet<String> = r.odd_cycle_pairs().map(|(a, b)| pair_key(a, b)).collect();
        ensure(!got.is_empty(), || format!("{name}: no odd pair"))?;
        ensure(got == golden(file), || format!("{name}: odd pairs differ from {file}"))?;
        out.push(format!("{name} {} odd pairs", got.len()));
    }
    Ok(out.join(", "))
}

fn criterion_6(items: &[CorpusItem]) -> Check {
    let mut drawings: Vec<(String, DrawingMap)> =
        items.iter().map(|i| (i.label.clone(), i.drawing.clone())).collect();
    for (name, g) in [
        ("k4", fixtures::k4_convex_geo()),
        ("k5", fixtures::k5_convex_geo()),
        ("k33", fixtures::k33_geo()),
    ] {
        drawings.push((name.into(), ingest(&g).unwrap()));
    }
    let mut odd = 0;
    let mut odd_drawings = 0;
    for (label, d) in &drawings {
        let r = check_hypothesis(d, CAP).map_err(|e| e.to_string())?;
        if r.is_even() {
            continue;
        }
        odd_drawings += 1;
        let t = CrossingTable::new(d);
        for (a, b) in r.odd_cycle_pairs() {
            let w = lemma9_witness(d, a, b).map_err(|e| format!("{label}: {e}"))?;
            EvenSubgraph::new(d.graph(), w.subgraph.edges().iter().copied())
                .map_err(|e| format!("{label}: {e}"))?;
            let sc = t.self_crossings(&t.mask(w.subgraph.edges()).unwrap());
            ensure(sc == w.self_crossings && sc % 2 == 1, || format!("{label}: {}: sc {sc}", pair_key(a, b)))?;
            ensure(
                [a.edges().clone(), b.edges().clone(), symmetric_difference(a.edges(), b.edges())]
                    .contains(w.subgraph.edges()),
                || format!("{label}: witness is not built from the pair"),
            )?;
            odd += 1;
        }
        let any = even_subgraphs(d.graph(), CAP)
            .map_err(|e| e.to_string())?
            .iter()
            .any(|h| t.self_crossings(&t.mask(h.edges()).unwrap()) % 2 == 1);
        ensure(any, || format!("{label}: enumeration finds no odd even subgraph"))?;
    }
    ensure(odd > 0, || "no odd pair anywhere".into())?;
    let (pairs, _) = suite(items, Suite::Identities)?;
    Ok(format!("{odd} odd pairs in {odd_drawings} drawings witnessed, identities exact on {pairs} pairs"))
}

fn criterion_7() -> Check {
    let bases = [
        (fixtures::toroidal_k5(), Surface { euler_genus: 2, orientable: true }),
        (fixtures::projective_two_loops(), Surface { euler_genus: 1, orientable: false }),
    ];
    let mut strict = 0;
    for i in 0..SURFACE_RUNS {
        let (scheme, surface) = &bases[i % 2];
        let mut rng = ChaCha8Rng::seed_from_u64(i as u64);
        let mut d = DrawingMap::from_scheme(scheme, *surface);
        for _ in 0..rng.gen_range(1..=6) {
            d = random_finger_move(&d, &mut rng)
                .map_err(|e| e.to_string())?
                .ok_or_else(|| format!("run {i}: no finger move"))?;
        }
        let (s, cert) = embed_on_surface(&d, CAP).map_err(|e| format!("run {i}: {e}"))?;
        ensure(surface.admits(cert.scheme_genus), || format!("run {i}: {}", cert.scheme_genus))?;
        ensure(cert.scheme_genus.euler_genus <= surface.euler_genus, || format!("run {i}: genus too large"))?;
        ensure(s.flip_equivalent(scheme), || format!("run {i}: not flip-equivalent to the original"))?;
        strict += cert.strict_match as usize;
    }
    let d = fixtures::figure_eight();
    let (d2, _) = contract_edge(&d, EdgeId(1)).map_err(|e| e.to_string())?;
    let tails = sigma1(&d2, &ids(&[2]).into_iter().collect(), &ids(&[3]).into_iter().collect()).unwrap();
    ensure(tails == 2, || format!("figure-eight tails cross {tails} times"))?;
    Ok(format!(
        "{SURFACE_RUNS} certificates ({strict} strictly equal), figure-eight tails cross {tails} times"
    ))
}

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

fn ht(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_ht")).args(args).output().unwrap()
}

fn criterion_8(items: &[CorpusItem]) -> Check {
    let gen = ["gen", "--seed", "7", "--vertices", "7", "--edges", "12", "--moves", "6"];
    let (a, b) = (ht(&gen), ht(&gen));
    ensure(a.status.success() && a.stdout == b.stdout, || "gen output differs".into())?;

    let mut docs: Vec<DrawingMap> = items.iter().map(|i| i.drawing.clone()).collect();
    docs.push(fixtures::figure_eight());
    docs.push(DrawingMap::from_scheme(&fixtures::projective_two_loops(), Surface { euler_genus: 1, orientable: false }));
    docs.push(DrawingMap::from_scheme(&fixtures::toroidal_k5(), Surface { euler_genus: 2, orientable: true }));
    docs.push(parse_gd(std::str::from_utf8(&a.stdout).unwrap()).map_err(|e| e.to_string())?);
    for d in &docs {
        let text = write_gd(d);
        let back = parse_gd(&text).map_err(|e| e.to_string())?;
        ensure(&back == d && write_gd(&back) == text, || format!("round trip changed:\n{text}"))?;
    }

    let f = |n: &str| fixture(n).to_str().unwrap().to_string();
    let table: Vec<(Vec<String>, i32)> = vec![
        (vec!["check".into(), f("k4.gd")], 1),
        (vec!["check".into(), f("figure_eight.gd")], 0),
        (vec!["check".into(), f("loop_minus.gd")], 0),
        (vec!["check".into(), f("malformed.gd")], 2),
        (vec!["check".into(), f("missing.gd")], 2),
        (vec!["genus".into(), f("loop_minus.gd")], 0),
        (vec!["planarize".into(), f("k4.gd")], 1),
        (vec!["planarize".into(), f("figure_eight.gd")], 0),
        (vec!["planarize".into(), f("loop_minus.gd")], 2),
        (vec!["embed".into(), f("loop_minus.gd"), "--report".into()], 0),
        (vec!["embed".into(), f("k4.gd")], 1),
        (vec!["contract".into(), f("k4.gd"), "--edge".into(), "12".into()], 0),
        (vec!["contract".into(), f("loop_minus.gd"), "--edge".into(), "1".into()], 2),
        (vec!["ingest".into(), f("k4.geo")], 0),
        (vec!["ingest".into(), f("k5.geo")], 0),
        (vec!["ingest".into(), f("k33.geo")], 0),
        (vec!["ingest".into(), f("collinear.geo")], 2),
        (vec!["ingest".into(), f("via_on_edge.geo")], 2),
        (vec!["ingest".into(), f("via_on_edge.geo"), "--jitter".into(), "7".into()], 0),
        (vec!["ingest".into(), f("malformed.geo")], 2),
        (vec!["render".into(), f("k33.geo")], 0),
        (vec!["render".into(), f("figure_eight.gd")], 0),
        (vec!["lemma9".into(), f("k4.gd"), "--pair".into(), "12,23,13;12,24,14".into()], 0),
        (vec!["lemma9".into(), f("k4.gd"), "--pair".into(), "12,23;12,24,14".into()], 2),
        (vec!["verify".into(), f("k4.gd")], 0),
        (vec!["verify".into(), f("malformed.gd")], 2),
        (vec!["bogus".into()], 2),
    ];
    for (args, want) in &table {
        let argv: Vec<&str> = args.iter().map(String::as_str).collect();
        let got = ht(&argv).status.code();
        ensure(got == Some(*want), || format!("ht {} exited {got:?}, expected {want}", args.join(" ")))?;
    }
    Ok(format!("gen byte-identical, {} documents round-trip, {} exit codes match", docs.len(), table.len()))
}

fn run(n: usize, name: &str, f: impl FnOnce() -> Check) -> bool {
    let start = Instant::now();
    let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
        let msg = p
            .downcast_ref::<String>()
            .cloned()
            .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
            .unwrap_or_default();
        Err(format!("panicked: {msg}"))
    });
    let (tag, detail, ok) = match outcome {
        Ok(d) => ("PASS", d, true),
        Err(d) => ("FAIL", d, false),
    };
    // straight to the process stdout so the lines survive libtest capture
    let mut out = std::io::stdout().lock();
    writeln!(out, "{tag} criterion {n} {name} [{:.2} s]: {detail}", start.elapsed().as_secs_f64()).unwrap();
    ok
}

#[test]
fn acceptance() {
    let start = Instant::now();
    let items = corpus(SEED, CORPUS_SIZE).expect("corpus");
    let built = start.elapsed();
    let results = [
        run(1, "k4-fixture", criterion_1),
        run(2, "plane-parity-law", || criterion_2(&items, built)),
        run(3, "contraction-preservation", || criterion_3(&items)),
        run(4, "planarization", criterion_4),
        run(5, "nonplanar-odd-pairs", criterion_5),
        run(6, "odd-even-subgraph-witness", || criterion_6(&items)),
        run(7, "surface-certificates", criterion_7),
        run(8, "determinism-and-formats", || criterion_8(&items)),
    ];
    let failed: Vec<usize> = (1..=8).filter(|&i| !results[i - 1]).collect();
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
