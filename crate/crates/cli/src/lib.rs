//! The `ht` command line: file formats, commands and verification suites.
//!
//! Exit codes: 0 success, 1 odd pair or property violation, 2 usage, I/O,
//! parse or validation failure.

pub mod format;
pub mod verify;

use std::ffi::OsString;
use std::fmt;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};

use ht_core::calculus::{check_hypothesis, decomposition_identities, lemma9_witness, WitnessSource};
use ht_core::geo::{ingest, ingest_jittered};
use ht_core::svg::{render_drawing, render_geometric};
use ht_core::transform::{contract_edge, embed_on_surface, planarize_with_stack, random_even_drawing, GenParams};
use ht_core::{Cycle, DrawingMap, EdgeId, Error, Surface};

use format::{edge_list, parse_edge_lists, parse_gd, parse_geo, sniff, write_gd, DocKind};
use verify::{corpus, run_suite, CorpusItem, Suite};

pub const DEFAULT_MAX_CYCLES: usize = 100_000;
const JITTER_ATTEMPTS: usize = 32;

#[derive(Parser, Debug)]
#[command(name = "ht", version, about = "Cycle-pair crossing parity, planarization and surface certificates")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Report cycle pairs that cross an odd number of times.
    Check {
        file: PathBuf,
        #[arg(long, default_value_t = DEFAULT_MAX_CYCLES)]
        max_cycles: usize,
        /// Also print the sigma1/sigma/omega table for every pair.
        #[arg(long)]
        counts: bool,
    },
    /// Crossing-free drawing with the same rotation system.
    Planarize {
        file: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[arg(long, default_value_t = DEFAULT_MAX_CYCLES)]
        max_cycles: usize,
    },
    /// Embedding scheme certified against the declared surface.
    Embed {
        file: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Print the certificate.
        #[arg(long)]
        report: bool,
        #[arg(long, default_value_t = DEFAULT_MAX_CYCLES)]
        max_cycles: usize,
    },
    /// Euler genus of the crossing-augmented map.
    Genus { file: PathBuf },
    /// Contract one non-loop edge.
    Contract {
        file: PathBuf,
        #[arg(long)]
        edge: u32,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Random drawing satisfying the even hypothesis.
    Gen {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 6)]
        vertices: usize,
        #[arg(long, default_value_t = 9)]
        edges: usize,
        #[arg(long, default_value_t = 4)]
        moves: usize,
        #[arg(long, default_value_t = 0)]
        genus: usize,
        #[arg(long)]
        nonorientable: bool,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Convert a polyline drawing (.geo) into a drawing document.
    Ingest {
        file: PathBuf,
        /// Displace via points with this seed while the input is degenerate.
        #[arg(long)]
        jitter: Option<u64>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// SVG picture of a .geo or .gd document.
    Render {
        file: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Layout seed for .gd input.
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Even subgraph with an odd number of self-crossings from an odd pair.
    Lemma9 {
        file: PathBuf,
        /// Two cycles as edge lists, e.g. "12,23,13;12,24,14".
        #[arg(long)]
        pair: String,
    },
    /// Run invariant suites on a file or on a generated corpus.
    Verify {
        #[arg(required_unless_present = "corpus", conflicts_with = "corpus")]
        file: Option<PathBuf>,
        #[arg(long)]
        corpus: bool,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Corpus size.
        #[arg(long, default_value_t = 200)]
        count: usize,
        #[arg(long, value_enum, default_value_t = Suite::All)]
        suite: Suite,
        #[arg(long, default_value_t = DEFAULT_MAX_CYCLES)]
        max_cycles: usize,
    },
}

#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl Failure {
    fn input(message: impl Into<String>) -> Self {
        Failure {
            code: 2,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::OddPairFound { .. } | Error::CertificateFailed(_) | Error::EvenPair { .. } => 1,
            _ => 2,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

type Outcome = Result<u8, Failure>;

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

fn with_path<E: fmt::Display>(path: &Path) -> impl Fn(E) -> Failure + '_ {
    move |e| Failure::input(format!("{}: {e}", path.display()))
}

fn load_gd(path: &Path) -> Result<DrawingMap, Failure> {
    parse_gd(&read(path)?).map_err(with_path(path))
}

/// Writes to `output`, or to `out` when no path is given.
fn emit(out: &mut dyn Write, output: Option<&Path>, text: &str) -> Result<(), Failure> {
    match output {
        Some(p) => std::fs::write(p, text).map_err(with_path(p)),
        None => out.write_all(text.as_bytes()).map_err(|e| Failure::input(e.to_string())),
    }
}

fn yes(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn cmd_check(out: &mut dyn Write, file: &Path, cap: usize, counts: bool) -> Outcome {
    let d = load_gd(file)?;
    let r = check_hypothesis(&d, cap)?;
    let mut s = String::new();
    s += &format!("cycles\t{}\npairs\t{}\nodd-pairs\t{}\n", r.cycles.len(), r.pairs.len(), r.odd_pairs.len());
    for p in r.pairs.iter().filter(|p| p.sigma1_parity == 1) {
        let (a, b) = (&r.cycles[p.first], &r.cycles[p.second]);
        s += &format!("odd\t{}\t{}\t{}\n", edge_list(a.edge_list()), edge_list(b.edge_list()), p.sigma1);
    }
    if counts {
        s += "first\tsecond\tsigma1\tsigma\tomega\n";
        for p in &r.pairs {
            let (a, b) = (&r.cycles[p.first], &r.cycles[p.second]);
            s += &format!(
                "{}\t{}\t{}\t{}\t{}\n",
                edge_list(a.edge_list()),
                edge_list(b.edge_list()),
                p.sigma1,
                p.sigma_parity,
                p.omega_parity
            );
        }
    }
    emit(out, None, &s)?;
    Ok(if r.is_even() { 0 } else { 1 })
}

fn cmd_planarize(out: &mut dyn Write, file: &Path, output: Option<&Path>, cap: usize) -> Outcome {
    let d = load_gd(file)?;
    let (p, _) = planarize_with_stack(&d, cap)?;
    emit(out, output, &write_gd(&p))?;
    Ok(0)
}

fn cmd_embed(out: &mut dyn Write, file: &Path, output: Option<&Path>, report: bool, cap: usize) -> Outcome {
    let d = load_gd(file)?;
    let (scheme, cert) = embed_on_surface(&d, cap)?;
    let doc = write_gd(&DrawingMap::from_scheme(&scheme, d.surface()));
    if report {
        let s = format!(
            "declared\t{}\nscheme\t{}\nloops-stage\t{}\ncontractions\t{}\nparity-checks\t{}\nstrict-match\t{}\nflip-equivalent\t{}\n",
            cert.declared,
            cert.scheme_genus,
            cert.loops_stage_genus,
            cert.contractions,
            cert.parity_checks,
            yes(cert.strict_match),
            yes(cert.flip_equivalent)
        );
        emit(out, None, &s)?;
        if let Some(p) = output {
            emit(out, Some(p), &doc)?;
        }
    } else {
        emit(out, output, &doc)?;
    }
    Ok(0)
}

fn cmd_genus(out: &mut dyn Write, file: &Path) -> Outcome {
    let d = load_gd(file)?;
    let g = d.augmented_map().map_err(Failure::input)?.euler_genus();
    emit(out, None, &format!("{g}\n"))?;
    Ok(0)
}

fn cmd_contract(out: &mut dyn Write, file: &Path, edge: u32, output: Option<&Path>) -> Outcome {
    let d = load_gd(file)?;
    let (d2, corr) = contract_edge(&d, EdgeId(edge))?;
    let (gone, kept) = corr.merged;
    let text = write_gd(&d2);
    match output {
        Some(p) => {
            emit(out, Some(p), &text)?;
            emit(out, None, &format!("contracted\t{}\nmerged\t{gone}\t{kept}\n", corr.contracted))?;
        }
        None => emit(out, None, &text)?,
    }
    Ok(0)
}

fn cmd_ingest(out: &mut dyn Write, file: &Path, jitter: Option<u64>, output: Option<&Path>) -> Outcome {
    let g = parse_geo(&read(file)?).map_err(with_path(file))?;
    let d = match jitter {
        Some(seed) => ingest_jittered(&g, seed, JITTER_ATTEMPTS)?,
        None => ingest(&g)?,
    };
    emit(out, output, &write_gd(&d))?;
    Ok(0)
}

fn cmd_render(out: &mut dyn Write, file: &Path, output: Option<&Path>, seed: u64) -> Outcome {
    let text = read(file)?;
    let svg = match sniff(&text).map_err(with_path(file))? {
        DocKind::Geometric => render_geometric(&parse_geo(&text).map_err(with_path(file))?)?,
        DocKind::Drawing => render_drawing(&parse_gd(&text).map_err(with_path(file))?, seed),
    };
    emit(out, output, &svg)?;
    Ok(0)
}

fn cmd_lemma9(out: &mut dyn Write, file: &Path, pair: &str) -> Outcome {
    let d = load_gd(file)?;
    let lists = parse_edge_lists(pair).map_err(Failure::input)?;
    let [a, b] = <[Vec<EdgeId>; 2]>::try_from(lists)
        .map_err(|l| Failure::input(format!("--pair needs two cycles, got {}", l.len())))?;
    let c1 = Cycle::new(d.graph(), a)?;
    let c2 = Cycle::new(d.graph(), b)?;
    let w = lemma9_witness(&d, &c1, &c2)?;
    let r = decomposition_identities(&d, &c1, &c2)?;
    let source = match w.source {
        WitnessSource::FirstCycle => "first-cycle",
        WitnessSource::SecondCycle => "second-cycle",
        WitnessSource::SymmetricDifference => "symmetric-difference",
    };
    let [s1, s2] = r.self_crossing_split();
    let (add_l, add_r) = r.additivity();
    let (sd, _) = r.symmetric_difference_count();
    let s = format!(
        "pair\t{}\t{}\nsigma1\t{}\nwitness\t{}\nself-crossings\t{}\nsource\t{source}\n\
         sc-first\t{} = {}\nsc-second\t{} = {}\nadditivity\t{add_l} = {add_r}\n\
         sc-symmetric-difference\t{sd} = {} + {} - {} - {} + {}\nidentities\t{}\n",
        edge_list(c1.edge_list()),
        edge_list(c2.edge_list()),
        r.sigma1_pair,
        edge_list(w.subgraph.edges().iter().copied()),
        w.self_crossings,
        s1.0,
        s1.1,
        s2.0,
        s2.1,
        r.sc_c1,
        r.sc_c2,
        2 * r.sc_shared,
        r.sigma1_pair,
        2 * r.sigma1_private,
        if r.holds() { "hold" } else { "FAIL" }
    );
    emit(out, None, &s)?;
    Ok(if r.holds() { 0 } else { 1 })
}

fn cmd_verify(
    out: &mut dyn Write,
    file: Option<&Path>,
    seed: u64,
    count: usize,
    suite: Suite,
    cap: usize,
) -> Outcome {
    let items = match file {
        Some(p) => vec![CorpusItem {
            label: p.display().to_string(),
            drawing: load_gd(p)?,
        }],
        None => corpus(seed, count)?,
    };
    let mut s = String::new();
    let mut failed = false;
    for (suite, rep) in run_suite(suite, &items, cap)? {
        s += &format!(
            "suite\t{}\tdrawings\t{}\tskipped\t{}\tpairs\t{}\tviolations\t{}\n",
            suite.name(),
            rep.drawings,
            rep.skipped,
            rep.pairs,
            rep.violations.len()
        );
        if let Some(v) = rep.violations.first() {
            failed = true;
            s += &format!("counterexample\t{}\t{}\t{}\n", v.suite.name(), v.label, v.detail);
        }
    }
    emit(out, None, &s)?;
    Ok(if failed { 1 } else { 0 })
}

fn dispatch(cli: Cli, out: &mut dyn Write) -> Outcome {
    match cli.command {
        Command::Check {
            file,
            max_cycles,
            counts,
        } => cmd_check(out, &file, max_cycles, counts),
        Command::Planarize {
            file,
            output,
            max_cycles,
        } => cmd_planarize(out, &file, output.as_deref(), max_cycles),
        Command::Embed {
            file,
            output,
            report,
            max_cycles,
        } => cmd_embed(out, &file, output.as_deref(), report, max_cycles),
        Command::Genus { file } => cmd_genus(out, &file),
        Command::Contract { file, edge, output } => cmd_contract(out, &file, edge, output.as_deref()),
        Command::Gen {
            seed,
            vertices,
            edges,
            moves,
            genus,
            nonorientable,
            output,
        } => {
            let p = GenParams {
                vertices,
                edges,
                moves,
                genus,
                orientable: !nonorientable,
            };
            let d = random_even_drawing(seed, p)?;
            debug_assert_eq!(d.surface(), Surface { euler_genus: genus, orientable: !nonorientable });
            emit(out, output.as_deref(), &write_gd(&d))?;
            Ok(0)
        }
        Command::Ingest { file, jitter, output } => cmd_ingest(out, &file, jitter, output.as_deref()),
        Command::Render { file, output, seed } => cmd_render(out, &file, output.as_deref(), seed),
        Command::Lemma9 { file, pair } => cmd_lemma9(out, &file, &pair),
        Command::Verify {
            file,
            corpus: _,
            seed,
            count,
            suite,
            max_cycles,
        } => cmd_verify(out, file.as_deref(), seed, count, suite, max_cycles),
    }
}

/// Parses `args` (program name first) and runs the command; returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = err.write_all(text.as_bytes());
                2
            } else {
                let _ = out.write_all(text.as_bytes());
                0
            };
        }
    };
    match dispatch(cli, out) {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {f}");
            f.code
        }
    }
}
