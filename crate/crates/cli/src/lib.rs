//! Implementation of the `frechet` command line tool.
//!
//! Exit codes: 0 for success (or a true decision), 1 for a false decision,
//! 2 for usage and input errors.

use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use frechet_core::approxdecide::{approx_decide_run, clamp_alpha, DecisionOutcome};
use frechet_core::bench::{run_bench, to_csv, AlphaPolicy, BenchConfig};
use frechet_core::freespace::{correspondence_cost, exact_decide, exact_frechet_witness, DEFAULT_REL_TOL};
use frechet_core::generate;
use frechet_core::io::{format_curve, parse_curve, DocStats, Outcome, Params, ResultDocument};
use frechet_core::optimize::approx_frechet_report;
use frechet_core::{Chain, Correspondence};

#[derive(Debug, Parser)]
#[command(name = "frechet", version, about = "Exact and approximate Fréchet distance between polygonal chains")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Decide whether the Fréchet distance is at most --delta (exit 0 yes, 1 no).
    Decide(DecideArgs),
    /// Compute the distance and a correspondence realising it.
    Compute(ComputeArgs),
    /// Write a synthetic curve.
    Gen(GenArgs),
    /// Time the decision procedure over growing random walks; CSV output.
    Bench(BenchArgs),
}

#[derive(Debug, Args)]
pub struct Common {
    /// First curve file.
    pub p: PathBuf,
    /// Second curve file.
    pub q: PathBuf,
    /// Grid parameter; clamped to [sqrt(n), n]. Defaults to sqrt(n).
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Use the exact free space algorithm instead.
    #[arg(long)]
    pub exact: bool,
    /// Write the document here instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Leave wall_time_ms out of the document, making output reproducible.
    #[arg(long)]
    pub no_timing: bool,
}

#[derive(Debug, Args)]
pub struct DecideArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long)]
    pub delta: f64,
}

#[derive(Debug, Args)]
pub struct ComputeArgs {
    #[command(flatten)]
    pub common: Common,
    /// Approximation slack, in (0, 1].
    #[arg(long, default_value_t = 1.0)]
    pub eps: f64,
    /// Relative tolerance of the exact bisection.
    #[arg(long, default_value_t = DEFAULT_REL_TOL)]
    pub tol: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Kind {
    Walk,
    Uniform,
    Zigzag,
    /// The straight segment under a zigzag with the same --n.
    Baseline,
    Circle,
    /// Perturb every vertex of --base by at most --rho.
    PerturbedCopy,
}

#[derive(Debug, Args)]
pub struct GenArgs {
    #[arg(long, value_enum)]
    pub kind: Kind,
    #[arg(long, default_value_t = 100)]
    pub n: usize,
    #[arg(long, default_value_t = 2)]
    pub d: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Step size, box size, amplitude or radius, depending on the kind.
    #[arg(long, default_value_t = 1.0)]
    pub scale: f64,
    #[arg(long, required_if_eq("kind", "perturbed-copy"))]
    pub base: Option<PathBuf>,
    #[arg(long, default_value_t = 0.1)]
    pub rho: f64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    /// Comma separated chain lengths.
    #[arg(long, value_delimiter = ',', default_values_t = [1000usize, 2000, 4000])]
    pub bench_sizes: Vec<usize>,
    /// `n`, `sqrt` or a fixed number.
    #[arg(long, default_value = "n")]
    pub alpha: AlphaPolicy,
    #[arg(long, default_value_t = 3)]
    pub reps: usize,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[arg(long, default_value_t = 2)]
    pub d: usize,
    /// Perturbation radius of the second curve; also the decision threshold.
    #[arg(long, default_value_t = 0.5)]
    pub rho: f64,
    /// Largest n that gets an exact cost ratio.
    #[arg(long, default_value_t = 300)]
    pub oracle_max_n: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Runs a parsed command line and returns the exit code.
pub fn run(cli: Cli) -> Result<i32> {
    match cli.command {
        Command::Decide(a) => decide(a),
        Command::Compute(a) => compute(a),
        Command::Gen(a) => gen(a),
        Command::Bench(a) => bench(a),
    }
}

pub fn read_curve(path: &Path) -> Result<Chain> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_curve(&text).with_context(|| format!("parsing {}", path.display()))
}

fn load(c: &Common) -> Result<(Chain, Chain)> {
    let p = read_curve(&c.p)?;
    let q = read_curve(&c.q)?;
    if p.dim() != q.dim() {
        bail!("{} has dimension {}, {} has dimension {}", c.p.display(), p.dim(), c.q.display(), q.dim());
    }
    Ok((p, q))
}

fn emit(text: &str, out: Option<&Path>) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn emit_document(doc: &ResultDocument, out: Option<&Path>) -> Result<()> {
    let mut text = serde_json::to_string_pretty(doc)?;
    text.push('\n');
    emit(&text, out)
}

fn breakpoints(c: Option<&Correspondence>) -> Vec<[f64; 2]> {
    c.map_or_else(Vec::new, |c| c.breakpoints().iter().map(|&(s, t)| [s, t]).collect())
}

fn base_stats(p: &Chain, q: &Chain) -> DocStats {
    DocStats { m: p.len(), n: q.len(), d: p.dim(), ..DocStats::default() }
}

fn elapsed_ms(start: Instant, no_timing: bool) -> Option<f64> {
    (!no_timing).then(|| start.elapsed().as_secs_f64() * 1e3)
}

fn decide(a: DecideArgs) -> Result<i32> {
    let (p, q) = load(&a.common)?;
    if !(a.delta >= 0.0 && a.delta.is_finite()) {
        bail!("--delta must be finite and non-negative, got {}", a.delta);
    }
    let start = Instant::now();
    let mut stats = base_stats(&p, &q);
    let mut params = Params { delta: Some(a.delta), exact: a.common.exact, ..Params::default() };
    let (ok, corr) = if a.common.exact {
        let d = exact_decide(&p, &q, a.delta, true);
        (d.reachable, d.correspondence.filter(|_| d.reachable))
    } else {
        let alpha = clamp_alpha(a.common.alpha.unwrap_or_else(|| default_alpha(&p, &q)), p.len(), q.len());
        params.alpha = Some(alpha);
        let run = approx_decide_run(&p, &q, a.delta, alpha);
        stats.bad_vertices = Some(run.stats.bad_vertices);
        stats.intervals_stored = Some(run.stats.intervals_stored);
        stats.decisions = Some(run.stats.runs);
        match run.outcome {
            DecisionOutcome::Success { correspondence, .. } => (true, Some(correspondence)),
            DecisionOutcome::Failure => (false, None),
        }
    };
    let cost = corr.as_ref().map(|c| correspondence_cost(&p, &q, c)).transpose()?;
    stats.wall_time_ms = elapsed_ms(start, a.common.no_timing);
    let doc = ResultDocument {
        command: "decide".into(),
        params,
        result: Outcome::Verdict(if ok { "success" } else { "failure" }.into()),
        cost,
        breakpoints: breakpoints(corr.as_ref()),
        stats,
    };
    emit_document(&doc, a.common.out.as_deref())?;
    Ok(if ok { 0 } else { 1 })
}

fn default_alpha(p: &Chain, q: &Chain) -> f64 {
    (p.len().max(q.len()) as f64).sqrt()
}

fn compute(a: ComputeArgs) -> Result<i32> {
    let (p, q) = load(&a.common)?;
    let start = Instant::now();
    let mut stats = base_stats(&p, &q);
    let mut params = Params { exact: a.common.exact, ..Params::default() };
    let (value, corr) = if a.common.exact {
        if !(a.tol > 0.0 && a.tol < 1.0) {
            bail!("--tol must lie in (0, 1), got {}", a.tol);
        }
        params.tol = Some(a.tol);
        exact_frechet_witness(&p, &q, a.tol)
    } else {
        let alpha = clamp_alpha(a.common.alpha.unwrap_or_else(|| default_alpha(&p, &q)), p.len(), q.len());
        params.alpha = Some(alpha);
        params.eps = Some(a.eps);
        let r = approx_frechet_report(&p, &q, alpha, a.eps)?;
        stats.decisions = Some(r.decisions);
        stats.branch = Some(r.branch.name().to_string());
        (r.value, r.correspondence)
    };
    let cost = correspondence_cost(&p, &q, &corr)?;
    stats.wall_time_ms = elapsed_ms(start, a.common.no_timing);
    let doc = ResultDocument {
        command: "compute".into(),
        params,
        result: Outcome::Value(value),
        cost: Some(cost),
        breakpoints: breakpoints(Some(&corr)),
        stats,
    };
    emit_document(&doc, a.common.out.as_deref())?;
    Ok(0)
}

fn gen(a: GenArgs) -> Result<i32> {
    let chain = match a.kind {
        Kind::Walk => generate::random_walk(a.n, a.d, a.seed, a.scale)?,
        Kind::Uniform => generate::uniform_points(a.n, a.d, a.seed, a.scale)?,
        Kind::Zigzag => generate::zigzag(a.n, a.d, a.scale)?,
        Kind::Baseline => generate::zigzag_baseline(a.n, a.d)?,
        Kind::Circle => generate::circle(a.n, a.d, a.scale)?,
        Kind::PerturbedCopy => {
            let base = read_curve(a.base.as_deref().expect("clap requires --base"))?;
            generate::perturbed_copy(&base, a.rho, a.seed)?
        }
    };
    emit(&format_curve(&chain), a.out.as_deref())?;
    Ok(0)
}

fn bench(a: BenchArgs) -> Result<i32> {
    if a.bench_sizes.iter().any(|&n| n < 2) {
        bail!("bench sizes must be at least 2");
    }
    let cfg = BenchConfig {
        sizes: a.bench_sizes,
        policy: a.alpha,
        reps: a.reps,
        d: a.d,
        seed: a.seed,
        rho: a.rho,
        oracle_max_n: a.oracle_max_n,
        ..BenchConfig::default()
    };
    let rows = run_bench(&cfg)?;
    emit(&to_csv(&rows), a.out.as_deref())?;
    Ok(0)
}
