use std::collections::BTreeMap;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use smallcancel::arrays::{ArrayParams, Arrays};
use smallcancel::cayley::Region;
use smallcancel::presentation::{parse_presentation, piece_table};
use smallcancel::properarray::freeproduct::{CyclicWordLength, FreeProduct, PhiTildeFactor};
use smallcancel::properarray::{ProperArray, ProperArrayParams};
use smallcancel::rational::{fmt_decimal, fmt_exact, parse_rational, q};
use smallcancel::wordproblem::DehnIndex;
use smallcancel::{Error, Presentation, Q};

use sc_arrays::fixtures::{relaxed_params, RegionSpec, Scenario};
use sc_arrays::report::{Check, Report};
use sc_arrays::sampling::{rng_for, triples};
use sc_arrays::suites;

const DEFAULT_MAX_VERTICES: usize = 2_000_000;

#[derive(Parser, Debug)]
#[command(name = "sc-arrays", version, about = "Small-cancellation arrays: checks, regions and verification suites")]
struct Cli {
    /// Presentation file: `gens: ...`, `lambda: p/q`, then one relator per line.
    #[arg(long, global = true)]
    presentation: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value = "paper")]
    mode: Mode,
    #[arg(long, global = true, default_value_t = 1)]
    seed: u64,
    /// Sampled pairs per scenario in `verify`.
    #[arg(long, global = true, default_value_t = 200)]
    samples: usize,
    /// Write the JSON report here instead of standard output.
    #[arg(long, global = true)]
    report: Option<PathBuf>,
    /// Ball vertex cap; `SC_ARRAYS_MAX_VERTICES` overrides the default.
    #[arg(long, global = true)]
    max_vertices: Option<usize>,
    /// Build balls without the small-cancellation check (fold tests only).
    #[arg(long, global = true)]
    unsafe_no_cprime: bool,
    /// Array constants for relaxed mode, as rationals such as `7.1/33`.
    #[arg(long, global = true)]
    mu: Option<String>,
    #[arg(long, global = true)]
    nu10: Option<String>,
    #[arg(long, global = true)]
    nu11: Option<String>,
    #[arg(long, global = true)]
    nu20: Option<String>,
    #[arg(long, global = true)]
    nu21: Option<String>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Mode {
    Paper,
    Relaxed,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Suite {
    AdLemma,
    XiDrift,
    EtaDrift,
    Phi,
    Embed,
    Freeproduct,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Piece table, C'(lambda) verdict and word-problem answers.
    Check {
        /// Words to test for triviality; may be repeated.
        #[arg(long)]
        word: Vec<String>,
    },
    /// Build a ball of the Cayley graph.
    Ball {
        #[arg(long)]
        radius: usize,
        #[arg(long)]
        stats: bool,
        /// Print the region graph in DOT format.
        #[arg(long)]
        dump_dot: bool,
    },
    /// Contour and edge arrays for one pair.
    Arrays {
        /// Two words separated by a comma.
        #[arg(long)]
        pair: String,
        #[arg(long)]
        nu0: String,
        #[arg(long)]
        nu1: String,
        #[arg(long, default_value_t = 8)]
        radius: usize,
    },
    /// Run a verification suite and emit a report.
    Verify {
        #[arg(long, value_enum)]
        suite: Suite,
        /// Ball radius for presentations with pieces; syllable length for
        /// the free-product suite.
        #[arg(long)]
        radius: Option<usize>,
        /// Largest sampled distance between `g` and `h`.
        #[arg(long)]
        max_dist: Option<usize>,
        /// Valency bound for the embed suite.
        #[arg(long = "N", default_value_t = 1)]
        n_bound: usize,
        #[arg(long, default_value_t = 2_000_000)]
        cap: usize,
    },
    /// Write the presentation of the target group.
    Embed {
        #[arg(long = "N")]
        n_bound: usize,
        /// Relators longer than this are not materialized.
        #[arg(long, default_value_t = 2_000_000)]
        cap: usize,
    },
}

/// Failures outside the report: usage (2) or an invariant breach (3).
enum Abort {
    Usage(String),
    Invariant(String),
}

impl From<Error> for Abort {
    fn from(e: Error) -> Abort {
        match e {
            Error::InvariantViolation(_) => Abort::Invariant(e.to_string()),
            _ => Abort::Usage(e.to_string()),
        }
    }
}

enum Output {
    Report(Report),
    Text(String),
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(&cli) {
        Ok(Output::Text(s)) => match write_out(&cli, &s) {
            Ok(()) => ExitCode::SUCCESS,
            Err(e) => usage_exit(&e),
        },
        Ok(Output::Report(mut r)) => {
            r.finish();
            if let Err(e) = write_out(&cli, &r.to_json()) {
                return usage_exit(&e);
            }
            let s = &r.summary;
            eprintln!("{} pass, {} fail, {} skipped, {} informational fail", s.pass, s.fail, s.skipped, s.informational_fail);
            ExitCode::from(if r.any_failed() { 1 } else { 0 })
        }
        Err(Abort::Usage(m)) => usage_exit(&m),
        Err(Abort::Invariant(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(3)
        }
    }
}

fn usage_exit(m: &str) -> ExitCode {
    eprintln!("error: {m}");
    ExitCode::from(2)
}

fn write_out(cli: &Cli, s: &str) -> Result<(), String> {
    match &cli.report {
        Some(path) => std::fs::write(path, s).map_err(|e| format!("{}: {e}", path.display())),
        None => {
            let mut out = std::io::stdout().lock();
            match out.write_all(s.as_bytes()).and_then(|_| out.flush()) {
                Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(format!("stdout: {e}")),
                _ => Ok(()),
            }
        }
    }
}

fn load(cli: &Cli) -> Result<Presentation, Abort> {
    let path = cli.presentation.as_ref().ok_or_else(|| Abort::Usage("--presentation is required".into()))?;
    let text = std::fs::read_to_string(path).map_err(|e| Abort::Usage(format!("{}: {e}", path.display())))?;
    parse_presentation(&text).map_err(|e| Abort::Usage(format!("{}: {e}", path.display())))
}

fn max_vertices(cli: &Cli) -> Result<usize, Abort> {
    if let Some(n) = cli.max_vertices {
        return Ok(n);
    }
    match std::env::var("SC_ARRAYS_MAX_VERTICES") {
        Ok(v) => v.trim().parse().map_err(|_| Abort::Usage(format!("SC_ARRAYS_MAX_VERTICES: bad value `{v}`"))),
        Err(_) => Ok(DEFAULT_MAX_VERTICES),
    }
}

fn rational(s: &str, flag: &str) -> Result<Q, Abort> {
    parse_rational(s).map_err(|e| Abort::Usage(format!("--{flag}: {e}")))
}

fn num(x: &Q) -> Value {
    json!({ "exact": fmt_exact(x), "decimal": fmt_decimal(x, 6) })
}

fn config(cli: &Cli, command: &str) -> BTreeMap<String, String> {
    let mut c = BTreeMap::new();
    c.insert("command".into(), command.into());
    if let Some(p) = &cli.presentation {
        c.insert("presentation".into(), p.display().to_string());
    }
    c.insert("mode".into(), format!("{:?}", cli.mode).to_lowercase());
    c.insert("seed".into(), cli.seed.to_string());
    c
}

/// Paper mode pins the constants; relaxed mode takes overrides over the
/// relaxed defaults.
fn proper_params(cli: &Cli, lambda: &Q) -> Result<ProperArrayParams, Abort> {
    let given = [&cli.mu, &cli.nu10, &cli.nu11, &cli.nu20, &cli.nu21];
    match cli.mode {
        Mode::Paper => {
            if given.iter().any(|g| g.is_some()) {
                return Err(Abort::Usage("paper mode fixes mu and nu; use --mode relaxed to override".into()));
            }
            Ok(ProperArrayParams::paper())
        }
        Mode::Relaxed => {
            let d = relaxed_params();
            let pick = |s: &Option<String>, dflt: &Q, flag: &str| match s {
                Some(s) => rational(s, flag),
                None => Ok(dflt.clone()),
            };
            let lambda = if *lambda > q(1, 8) { lambda.clone() } else { d.lambda.clone() };
            Ok(ProperArrayParams::relaxed(
                lambda,
                pick(&cli.mu, &d.mu, "mu")?,
                pick(&cli.nu10, &d.nu10, "nu10")?,
                pick(&cli.nu11, &d.nu11, "nu11")?,
                pick(&cli.nu20, &d.nu20, "nu20")?,
                pick(&cli.nu21, &d.nu21, "nu21")?,
            )?)
        }
    }
}

fn run(cli: &Cli) -> Result<Output, Abort> {
    if cli.mode == Mode::Paper {
        // Rejected up front so commands that never build arrays still refuse.
        proper_params(cli, &q(1, 33))?;
    }
    match &cli.command {
        Command::Check { word } => check(cli, word),
        Command::Ball { radius, stats, dump_dot } => ball(cli, *radius, *stats, *dump_dot),
        Command::Arrays { pair, nu0, nu1, radius } => arrays(cli, pair, nu0, nu1, *radius),
        Command::Verify { suite, radius, max_dist, n_bound, cap } => verify(cli, *suite, *radius, *max_dist, *n_bound, *cap),
        Command::Embed { n_bound, cap } => embed(cli, *n_bound, *cap),
    }
}

fn check(cli: &Cli, words: &[String]) -> Result<Output, Abort> {
    let p = load(cli)?;
    let report = piece_table(&p);
    let mut r = Report::new("check", config(cli, "check"));
    let mut c = Check::new("c-prime").param("lambda", fmt_exact(p.lambda()));
    c.pairs_tested = p.symmetrized_len() * p.symmetrized_len().saturating_sub(1) / 2;
    c.max_observed = Some(sc_arrays::report::Num::count(report.max_piece));
    if let Some(v) = &report.violation {
        c.notes.push(format!("piece {} of length {}", p.format_word(&v.piece), v.len()));
    }
    r.push(c.with_verdict(report.satisfied()));
    let mut star = Check::new("long-relators-and-all-letters").param("lambda", fmt_exact(p.lambda()));
    star.informational = true;
    r.push(star.with_verdict(report.star_verdict));

    let dehn_ok = report.satisfied() && *p.lambda() <= q(1, 6);
    let index = DehnIndex::new(&p);
    let mut answers = Vec::new();
    for w in words {
        let word = p.word(w).map_err(|e| Abort::Usage(format!("--word {w}: {e}")))?;
        let reduced = index.dehn_reduce(&word);
        answers.push(json!({
            "word": w,
            "dehn_reduced": p.format_word(&reduced),
            "is_identity": reduced.is_empty(),
        }));
    }
    if !words.is_empty() && !dehn_ok {
        let c = Check::new("word-problem-decided").note("Dehn's algorithm needs C'(1/6); answers are not certified");
        r.push(c.with_verdict(false));
    }
    r.data = Some(json!({
        "generators": p.alphabet(),
        "relators": p.classes().len(),
        "symmetrized_len": p.symmetrized_len(),
        "max_piece": report.max_piece,
        "words": answers,
    }));
    Ok(Output::Report(r))
}

fn ball(cli: &Cli, radius: usize, stats: bool, dump_dot: bool) -> Result<Output, Abort> {
    let p = load(cli)?;
    let cap = max_vertices(cli)?;
    let region = if cli.unsafe_no_cprime {
        Region::ball_unchecked(&p, radius, cap)?
    } else {
        Region::ball(&p, radius, cap)?
    };
    if dump_dot {
        return Ok(Output::Text(region.dot().unwrap_or_default()));
    }
    let mut r = Report::new("ball", config(cli, "ball"));
    let s = region.ball_stats().expect("ball regions have stats");
    let mut data = json!({
        "radius": s.radius,
        "vertices": s.vertices,
        "edges": s.edges,
        "contours": s.contours_inside,
    });
    if stats {
        data["tree_words"] = json!(s.tree_vertices);
        data["completed_edges"] = json!(s.completed_edges);
    }
    r.data = Some(data);
    Ok(Output::Report(r))
}

fn arrays(cli: &Cli, pair: &str, nu0: &str, nu1: &str, radius: usize) -> Result<Output, Abort> {
    let p = load(cli)?;
    let (u, v) = pair.split_once(',').ok_or_else(|| Abort::Usage("--pair expects `u,v`".into()))?;
    let g = p.word(u.trim())?;
    let h = p.word(v.trim())?;
    let (nu0, nu1) = (rational(nu0, "nu0")?, rational(nu1, "nu1")?);
    let params = match cli.mode {
        Mode::Paper => ArrayParams::new(q(1, 33), q(4, 33), nu0, nu1)?,
        Mode::Relaxed => {
            let d = proper_params(cli, p.lambda())?;
            ArrayParams::relaxed(d.lambda, d.mu, nu0, nu1)?
        }
    };
    let region = Region::auto(&p, radius, max_vertices(cli)?)?;
    let a = Arrays::new(&region, params);
    let (dist, geos) = &*a.geodesics(&g, &h)?;
    let xi: Vec<Value> = a
        .xi(&g, &h)?
        .iter()
        .map(|(c, x)| json!({ "start": p.format_word(&c.vertices()[0]), "reading": p.format_word(c.reading()), "value": num(x) }))
        .collect();
    let eta: Vec<Value> = a
        .eta(&g, &h, None)?
        .iter()
        .map(|(e, x)| {
            json!({ "tail": p.format_word(&e.tail), "generator": p.alphabet()[e.generator], "value": num(x) })
        })
        .collect();
    let mut cfg = config(cli, "arrays");
    cfg.insert("pair".into(), pair.into());
    let mut r = Report::new("arrays", cfg);
    r.data = Some(json!({ "distance": dist, "geodesics": geos.len(), "xi": xi, "eta": eta }));
    Ok(Output::Report(r))
}

fn scenario(cli: &Cli, p: &Presentation, radius: Option<usize>, max_dist: Option<usize>) -> Result<Scenario, Abort> {
    let name = cli
        .presentation
        .as_ref()
        .and_then(|x| x.file_stem())
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "presentation".into());
    let (region, dflt) = if p.is_piece_free() {
        (RegionSpec::PieceFree, 10)
    } else {
        let r = radius.unwrap_or(6);
        (RegionSpec::Ball { radius: r }, r.saturating_sub(1))
    };
    Ok(Scenario {
        name,
        presentation: p.clone(),
        region,
        params: proper_params(cli, p.lambda())?,
        max_dist: max_dist.unwrap_or(dflt),
    })
}

fn verify(
    cli: &Cli,
    suite: Suite,
    radius: Option<usize>,
    max_dist: Option<usize>,
    n_bound: usize,
    cap: usize,
) -> Result<Output, Abort> {
    let p = load(cli)?;
    let suite_name = suite.to_possible_value().expect("named").get_name().to_string();
    let mut cfg = config(cli, "verify");
    cfg.insert("suite".into(), suite_name.clone());
    let mut r = Report::new("verify", cfg);
    match suite {
        Suite::Embed => {
            r.config.insert("N".into(), n_bound.to_string());
            r.config.insert("cap".into(), cap.to_string());
            let (checks, emb) = suites::embed_suite(&r.config["presentation"].clone(), &p, n_bound, cap)?;
            r.extend(checks);
            r.data = Some(json!({ "M": emb.m, "emitted": emb.emitted, "skipped": emb.skipped }));
        }
        Suite::Freeproduct => {
            let region = Region::auto(&p, radius.unwrap_or(6), max_vertices(cli)?)?;
            let params = proper_params(cli, p.lambda())?;
            let fp = FreeProduct::new(vec![
                Box::new(CyclicWordLength),
                Box::new(PhiTildeFactor::new(ProperArray::new(&region, params))),
            ]);
            let len = radius.unwrap_or(10);
            r.config.insert("max_syllable_length".into(), len.to_string());
            r.extend(suites::freeproduct_suite(&fp, 3, len, &[1, 2, 3])?);
        }
        _ => {
            let scn = scenario(cli, &p, radius, max_dist)?;
            r.config.insert("samples".into(), cli.samples.to_string());
            r.config.insert("max_dist".into(), scn.max_dist.to_string());
            let region = scn.build_region(max_vertices(cli)?)?;
            let mut rng = rng_for(cli.seed, &scn.name);
            let ts = triples(&region, &mut rng, cli.samples, scn.max_dist, 4)?;
            let checks = match suite {
                Suite::AdLemma => suites::arc_suite(&scn, &region, &ts)?,
                Suite::XiDrift => suites::xi_drift_suite(&scn, &region, &ts)?,
                Suite::EtaDrift => suites::eta_drift_suite(&scn, &region, &ts)?,
                _ => {
                    let mut c = suites::phi_suite(&scn, &region, &ts, &mut rng)?;
                    c.extend(suites::projection_suite(&mut rng, 1000)?);
                    c
                }
            };
            r.extend(checks);
        }
    }
    Ok(Output::Report(r))
}

fn embed(cli: &Cli, n_bound: usize, cap: usize) -> Result<Output, Abort> {
    let p = load(cli)?;
    let spec = smallcancel::properarray::embedding::EmbeddingSpec::new(&p, n_bound, 0)?;
    let emb = spec.emit(cap)?;
    for (c, len) in &emb.skipped {
        eprintln!("relator class {c}: length {len} exceeds the cap {cap}; not written");
    }
    if !emb.certified() {
        eprintln!("warning: the emitted presentation is not certified");
    }
    Ok(Output::Text(emb.presentation.to_text()))
}
