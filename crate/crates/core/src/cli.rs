//! Command-line front end.

use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::json;

use crate::analysis::{budget, compute_rho};
use crate::config::Limits;
use crate::error::{Error, Result};
use crate::graph::{parse_host_graph, parse_pattern_with_cap, HostGraph, Pattern};
use crate::hardness::{audit_sizes, generate_instance, plan_reduction, reduce, verify_reduction, VectorKind};
use crate::linalg::MaxEntryMode;
use crate::oracle::{oracle_solve, oracle_solve_non_induced, OracleBudgetGuard};
use crate::solvers::{non_induced_closure, solve, solve_pattern_set, PatternSet, SolveOptions, SolveResult};

pub const EXIT_FOUND: i32 = 0;
pub const EXIT_NOT_FOUND: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_RESOURCE: i32 = 3;
pub const EXIT_INTERNAL: i32 = 4;

/// Largest closure the non-induced mode will build.
const MAX_CLOSURE: usize = 20_000;

#[derive(Parser, Debug)]
#[command(name = "dompat", version, about = "Dominating sets inducing a fixed small pattern")]
pub struct Cli {
    /// Worker threads for parallel products (default: all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Largest candidate family (overrides DOMPAT_MAX_FAMILY).
    #[arg(long, global = true)]
    pub max_family: Option<usize>,
    /// Largest oracle scan (overrides DOMPAT_ORACLE_CAP).
    #[arg(long, global = true)]
    pub oracle_cap: Option<u64>,
    /// Largest pattern order (overrides DOMPAT_PATTERN_CAP).
    #[arg(long, global = true)]
    pub pattern_cap: Option<usize>,
    /// Largest gen-ov dimension (overrides DOMPAT_MAX_DIMENSION).
    #[arg(long, global = true)]
    pub max_dimension: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Print rho, the S / N(S) / R partition, covers and budget exponents.
    Analyze {
        #[arg(long)]
        pattern: String,
        #[arg(long)]
        json: bool,
    },
    /// Search for a dominating set inducing the pattern.
    Solve(SolveArgs),
    /// Brute-force search with the same flags as `solve`.
    Oracle(SolveArgs),
    /// Generate an orthogonal-vectors instance and reduce it to a graph.
    GenOv {
        #[arg(long)]
        pattern: String,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        d: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = Vectors::Random)]
        vectors: Vectors,
        /// Output prefix: writes PREFIX.el and PREFIX.blocks.json.
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Check the reduction against both oracles on seeded random instances.
    VerifyReduction {
        #[arg(long)]
        pattern: String,
        #[arg(long, default_value_t = 50)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 100_000)]
        max_product: usize,
        #[arg(long)]
        json: bool,
    },
    /// Time `solve` on random graphs over an (n, m) grid.
    Bench {
        #[arg(long)]
        pattern: String,
        /// Comma-separated `n:m` pairs.
        #[arg(long, default_value = "50:200,100:500,200:1000,400:2000")]
        grid: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        reps: usize,
        #[arg(long)]
        hashed: bool,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Args, Debug)]
pub struct SolveArgs {
    #[arg(long)]
    pub graph: PathBuf,
    /// Pattern spec; optional when `--set` is given.
    #[arg(long)]
    pub pattern: Option<String>,
    /// Deterministic max-entry products (the default).
    #[arg(long, conflicts_with = "hashed")]
    pub exact: bool,
    /// Hashed max-entry products, seeded by `--seed`.
    #[arg(long)]
    pub hashed: bool,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Comma-separated pattern specs of equal order.
    #[arg(long, conflicts_with = "non_induced")]
    pub set: Option<String>,
    /// Accept any dominating set whose induced graph contains the pattern.
    #[arg(long)]
    pub non_induced: bool,
    #[arg(long)]
    pub json: bool,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Vectors {
    Random,
    PlantedOrthogonal,
    None,
}

impl From<Vectors> for VectorKind {
    fn from(v: Vectors) -> Self {
        match v {
            Vectors::Random => VectorKind::Random,
            Vectors::PlantedOrthogonal => VectorKind::PlantedOrthogonal,
            Vectors::None => VectorKind::None,
        }
    }
}

/// Splits on commas outside square brackets.
pub fn split_specs(list: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut cur = String::new();
    for c in list.chars() {
        match c {
            '[' => depth += 1,
            ']' => depth -= 1,
            ',' if depth == 0 => {
                out.push(cur.trim().to_string());
                cur.clear();
                continue;
            }
            _ => {}
        }
        cur.push(c);
    }
    if !cur.trim().is_empty() {
        out.push(cur.trim().to_string());
    }
    out
}

/// Parses `argv` (including the program name), runs the command and
/// returns the process exit code.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_FOUND };
            let text = e.render().to_string();
            if code == EXIT_FOUND {
                let _ = write!(out, "{text}");
            } else {
                let _ = write!(err, "{text}");
            }
            return code;
        }
    };
    let mut limits = Limits::from_env();
    if let Some(v) = cli.max_family {
        limits.max_family = v;
    }
    if let Some(v) = cli.oracle_cap {
        limits.oracle_cap = v;
    }
    if let Some(v) = cli.pattern_cap {
        limits.pattern_cap = v;
    }
    if let Some(v) = cli.max_dimension {
        limits.max_dimension = v;
    }
    let mut buffer = Vec::new();
    let outcome = match cli.threads {
        Some(t) => match rayon::ThreadPoolBuilder::new().num_threads(t).build() {
            Ok(pool) => pool.install(|| dispatch(&cli.command, &limits, &mut buffer)),
            Err(e) => Err(Error::Invalid(format!("cannot build thread pool: {e}"))),
        },
        None => dispatch(&cli.command, &limits, &mut buffer),
    };
    if out.write_all(&buffer).and_then(|_| out.flush()).is_err() {
        return EXIT_INTERNAL;
    }
    match outcome {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            match e {
                _ if e.is_resource() => EXIT_RESOURCE,
                Error::Invariant(_) => EXIT_INTERNAL,
                _ => EXIT_USAGE,
            }
        }
    }
}

fn io_error(path: &std::path::Path, e: std::io::Error) -> Error {
    Error::Invalid(format!("{}: {e}", path.display()))
}

fn write_out(out: &mut dyn Write, text: &str) -> Result<()> {
    out.write_all(text.as_bytes()).map_err(|e| Error::Invalid(format!("cannot write output: {e}")))
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

fn dispatch(command: &Command, limits: &Limits, out: &mut Vec<u8>) -> Result<i32> {
    let pattern = |spec: &str| parse_pattern_with_cap(spec, limits.pattern_cap);
    match command {
        Command::Analyze { pattern: spec, json } => analyze(&pattern(spec)?, *json, out),
        Command::Solve(args) => solve_command(args, limits, false, out),
        Command::Oracle(args) => solve_command(args, limits, true, out),
        Command::GenOv { pattern: spec, n, m, d, seed, vectors, out: prefix, json } => {
            let p = pattern(spec)?;
            if *d > limits.max_dimension {
                return Err(Error::ResourceLimit { what: format!("dimension {d}"), limit: limits.max_dimension as u64 });
            }
            let layout = plan_reduction(&p, *n, *m)?;
            let inst = generate_instance(&layout.group_sizes, *d, (*vectors).into(), *seed)?;
            let reduced = reduce(&inst, &p, &layout)?;
            let audit = audit_sizes(&reduced.graph, &layout, *d)?;
            let el = PathBuf::from(format!("{}.el", prefix.display()));
            let blocks = PathBuf::from(format!("{}.blocks.json", prefix.display()));
            fs::write(&el, reduced.graph.to_edge_list()).map_err(|e| io_error(&el, e))?;
            fs::write(&blocks, to_json(&reduced.blocks)).map_err(|e| io_error(&blocks, e))?;
            if *json {
                let report = json!({
                    "pattern": p.name(),
                    "graph": el.display().to_string(),
                    "blocks": blocks.display().to_string(),
                    "layout": layout,
                    "audit": audit,
                });
                write_out(out, &to_json(&report))?;
            } else {
                write_out(
                    out,
                    &format!(
                        "wrote {} ({} vertices, {} edges) and {}\ngroups {:?}, guards {:?}\n",
                        el.display(),
                        audit.vertices,
                        audit.edges,
                        blocks.display(),
                        layout.group_sizes,
                        layout.guard_sizes
                    ),
                )?;
            }
            Ok(EXIT_FOUND)
        }
        Command::VerifyReduction { pattern: spec, trials, seed, max_product, json } => {
            let p = pattern(spec)?;
            let report = verify_reduction(&p, *trials, *seed, *max_product, &OracleBudgetGuard::new(limits.oracle_cap))?;
            if *json {
                write_out(out, &to_json(&report))?;
            } else {
                let mut text = format!("{}/{} equivalent\n", report.equivalent, report.trials);
                for f in &report.failures {
                    text.push_str(&format!("  {f}\n"));
                }
                write_out(out, &text)?;
            }
            Ok(if report.equivalent == report.trials { EXIT_FOUND } else { EXIT_NOT_FOUND })
        }
        Command::Bench { pattern: spec, grid, seed, reps, hashed, json } => bench(&pattern(spec)?, grid, *seed, *reps, *hashed, *json, limits, out),
    }
}

fn analyze(p: &Pattern, json: bool, out: &mut dyn Write) -> Result<i32> {
    let dec = compute_rho(p)?;
    let (_, b) = budget(p, 1, 1)?;
    if json {
        let report = json!({
            "pattern": p.name(),
            "k": p.k(),
            "rho": dec.rho,
            "S": dec.s,
            "NS": dec.ns,
            "R": dec.r,
            "isolated": p.isolated(),
            "matching": dec.matching,
            "cover": dec.r_cover,
            "cover_minus": dec.r_cover_minus,
            "tP_exponents": { "n_exp": b.n_exp(), "m_exp": b.m_exp() },
            "delta": dec.delta,
        });
        write_out(out, &to_json(&report))?;
    } else {
        let text = format!(
            "pattern  {}\nk        {}\nrho      {}\nS        {:?}\nN(S)     {:?}\nR        {:?}\nmatching {:?}\ncover    {:?}\nbudget   n^{} * m^{}\ndelta    {}\n",
            p.name(),
            p.k(),
            dec.rho,
            dec.s,
            dec.ns,
            dec.r,
            dec.matching,
            dec.r_cover,
            b.n_exp(),
            b.m_exp(),
            dec.delta
        );
        write_out(out, &text)?;
    }
    Ok(EXIT_FOUND)
}

fn solve_command(args: &SolveArgs, limits: &Limits, oracle: bool, out: &mut dyn Write) -> Result<i32> {
    let text = fs::read_to_string(&args.graph).map_err(|e| io_error(&args.graph, e))?;
    let g = parse_host_graph(&text)?;
    let parse = |spec: &str| parse_pattern_with_cap(spec, limits.pattern_cap);
    let options = SolveOptions {
        mode: if args.hashed { MaxEntryMode::Hashed { seed: args.seed, repetitions: None } } else { MaxEntryMode::Exact },
        limits: *limits,
    };
    let guard = OracleBudgetGuard::new(limits.oracle_cap);
    let (result, name) = match (&args.set, &args.pattern) {
        (Some(list), _) => {
            let members = split_specs(list).iter().map(|s| parse(s)).collect::<Result<Vec<_>>>()?;
            let set = PatternSet::new(members)?;
            let r = if oracle { oracle_set(&g, &set, &guard)? } else { solve_pattern_set(&g, &set, &options)? };
            (r, list.clone())
        }
        (None, Some(spec)) => {
            let p = parse(spec)?;
            let r = match (oracle, args.non_induced) {
                (true, true) => oracle_solve_non_induced(&g, &p, &guard)?,
                (true, false) => oracle_solve(&g, &p, &guard)?,
                (false, true) => solve_pattern_set(&g, &non_induced_closure(&p, MAX_CLOSURE)?, &options)?,
                (false, false) => {
                    if g.n() == 0 {
                        return Err(Error::Invalid("host graph has no vertices".into()));
                    }
                    solve(&g, &p, &options)?
                }
            };
            (r, p.name().to_string())
        }
        (None, None) => return Err(Error::Invalid("one of --pattern or --set is required".into())),
    };
    print_result(&g, &name, &result, args.json, out)?;
    Ok(if result.found { EXIT_FOUND } else { EXIT_NOT_FOUND })
}

fn oracle_set(g: &HostGraph, set: &PatternSet, guard: &OracleBudgetGuard) -> Result<SolveResult> {
    let mut last = None;
    for p in set.members() {
        let mut r = oracle_solve(g, p, guard)?;
        if r.found {
            r.matched = Some(p.name().to_string());
            return Ok(r);
        }
        last = Some(r);
    }
    Ok(last.expect("pattern sets are nonempty"))
}

fn print_result(g: &HostGraph, name: &str, r: &SolveResult, json: bool, out: &mut dyn Write) -> Result<()> {
    if json {
        let report = json!({
            "pattern": name,
            "n": g.n(),
            "m": g.m(),
            "found": r.found,
            "witness": r.witness,
            "matched": r.matched,
            "route": r.route,
            "stats": r.stats,
        });
        return write_out(out, &to_json(&report));
    }
    let mut text = match &r.witness {
        Some(w) => format!("found    {}\n", w.vertices.iter().map(usize::to_string).collect::<Vec<_>>().join(" ")),
        None => "not found\n".to_string(),
    };
    if let Some(m) = &r.matched {
        text.push_str(&format!("matched  {m}\n"));
    }
    text.push_str(&format!("route    {}\n", r.route.label()));
    if let Some(b) = &r.stats.found_by {
        text.push_str(&format!("branch   {b}\n"));
    }
    text.push_str(&format!("products {}\n", r.stats.products));
    write_out(out, &text)
}

#[allow(clippy::too_many_arguments)]
fn bench(p: &Pattern, grid: &str, seed: u64, reps: usize, hashed: bool, json: bool, limits: &Limits, out: &mut dyn Write) -> Result<i32> {
    let mut points = Vec::new();
    for item in grid.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let parsed = item.split_once(':').and_then(|(a, b)| Some((a.trim().parse::<usize>().ok()?, b.trim().parse::<usize>().ok()?)));
        match parsed {
            Some((n, m)) if n >= 1 => points.push((n, m)),
            _ => return Err(Error::Invalid(format!("grid entry `{item}` is not n:m with n >= 1"))),
        }
    }
    let options = SolveOptions {
        mode: if hashed { MaxEntryMode::Hashed { seed, repetitions: None } } else { MaxEntryMode::Exact },
        limits: *limits,
    };
    let (_, b) = budget(p, 1, 1)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rows = Vec::new();
    for (n, m) in points {
        for rep in 0..reps.max(1) {
            let g = HostGraph::random_gnm(n, m, &mut rng);
            let start = Instant::now();
            let r = solve(&g, p, &options)?;
            let secs = start.elapsed().as_secs_f64();
            let (value, _) = budget(p, n as u64, g.m() as u64)?;
            rows.push(json!({
                "n": n,
                "m": g.m(),
                "rep": rep,
                "found": r.found,
                "route": r.route,
                "seconds": secs,
                "budget": value,
                "log_budget": value.max(1.0).ln(),
                "log_seconds": secs.max(1e-9).ln(),
            }));
        }
    }
    if json {
        let report = json!({
            "pattern": p.name(),
            "tP_exponents": { "n_exp": b.n_exp(), "m_exp": b.m_exp() },
            "runs": rows,
        });
        write_out(out, &to_json(&report))?;
    } else {
        let mut text = format!("pattern {}  budget n^{} * m^{}\n", p.name(), b.n_exp(), b.m_exp());
        text.push_str(&format!("{:>7} {:>8} {:>4} {:>6} {:>18} {:>12} {:>12}\n", "n", "m", "rep", "found", "route", "seconds", "budget"));
        for r in &rows {
            text.push_str(&format!(
                "{:>7} {:>8} {:>4} {:>6} {:>18} {:>12.6} {:>12.3e}\n",
                r["n"].as_u64().unwrap_or(0),
                r["m"].as_u64().unwrap_or(0),
                r["rep"].as_u64().unwrap_or(0),
                r["found"].as_bool().unwrap_or(false),
                r["route"].as_str().unwrap_or(""),
                r["seconds"].as_f64().unwrap_or(0.0),
                r["budget"].as_f64().unwrap_or(0.0)
            ));
        }
        write_out(out, &text)?;
    }
    Ok(EXIT_FOUND)
}
