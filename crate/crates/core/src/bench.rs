//! Scaling benchmark for the approximate decision procedure.
//!
//! Each size pairs a random walk with a perturbed copy at radius `rho` and
//! decides at `delta = rho`, which is at least the Fréchet distance, so every
//! run is a success and the walk covers the whole instance.

use std::time::Instant;

use serde::Serialize;

use crate::approxdecide::{approx_decide_run, clamp_alpha};
use crate::error::{FrechetError, Result};
use crate::freespace::exact_frechet;
use crate::generate::{perturbed_copy, random_walk};
use crate::geometry::Chain;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum AlphaPolicy {
    /// `alpha = n`
    Linear,
    /// `alpha = sqrt(n)`
    Sqrt,
    Fixed(f64),
}

impl AlphaPolicy {
    pub fn alpha(&self, n: usize) -> f64 {
        match self {
            AlphaPolicy::Linear => n as f64,
            AlphaPolicy::Sqrt => (n as f64).sqrt(),
            AlphaPolicy::Fixed(a) => *a,
        }
    }
}

impl std::str::FromStr for AlphaPolicy {
    type Err = FrechetError;

    fn from_str(s: &str) -> Result<AlphaPolicy> {
        match s {
            "n" | "linear" => Ok(AlphaPolicy::Linear),
            "sqrt" | "sqrt-n" => Ok(AlphaPolicy::Sqrt),
            _ => s
                .parse::<f64>()
                .ok()
                .filter(|a| *a > 0.0)
                .map(AlphaPolicy::Fixed)
                .ok_or_else(|| FrechetError::InvalidParameter(format!("alpha policy must be n, sqrt or a positive number, got {s}"))),
        }
    }
}

#[derive(Debug, Clone)]
pub struct BenchConfig {
    pub sizes: Vec<usize>,
    pub policy: AlphaPolicy,
    pub reps: usize,
    pub d: usize,
    pub seed: u64,
    pub rho: f64,
    /// Sizes up to this get an exact-oracle cost ratio.
    pub oracle_max_n: usize,
    /// Timed runs shorter than this are repeated and averaged.
    pub min_sample_ms: f64,
}

impl Default for BenchConfig {
    fn default() -> Self {
        BenchConfig {
            sizes: vec![1000, 2000, 4000],
            policy: AlphaPolicy::Linear,
            reps: 3,
            d: 2,
            seed: 1,
            rho: 0.5,
            oracle_max_n: 300,
            min_sample_ms: 20.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchRow {
    pub n: usize,
    pub alpha: f64,
    /// Minimum over repetitions.
    pub wall_time_ms: f64,
    pub intervals_stored: usize,
    pub bad_vertices: usize,
    pub success: bool,
    /// Measured cost over the exact distance, when the oracle was run.
    pub cost_ratio: Option<f64>,
    /// Time over the previous row's time when `n` doubled.
    pub doubling_ratio: Option<f64>,
}

/// The instance benchmarked at size `n`.
pub fn bench_instance(n: usize, cfg: &BenchConfig) -> Result<(Chain, Chain)> {
    let p = random_walk(n, cfg.d, cfg.seed.wrapping_add(n as u64), 1.0)?;
    let q = perturbed_copy(&p, cfg.rho, cfg.seed.wrapping_add(n as u64).wrapping_mul(31).wrapping_add(7))?;
    Ok((p, q))
}

/// Concurrency cap from `FRECHET_THREADS`, defaulting to the available cores.
pub fn thread_cap() -> usize {
    std::env::var("FRECHET_THREADS")
        .ok()
        .and_then(|s| s.parse::<usize>().ok())
        .filter(|t| *t > 0)
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |t| t.get()))
}

/// Runs the benchmark. Timings are sequential so they do not disturb each
/// other; only the oracle computations run concurrently.
pub fn run_bench(cfg: &BenchConfig) -> Result<Vec<BenchRow>> {
    if cfg.reps == 0 {
        return Err(FrechetError::InvalidParameter("need at least one repetition".into()));
    }
    let mut rows = Vec::with_capacity(cfg.sizes.len());
    let mut oracle_jobs = Vec::new();
    for &n in &cfg.sizes {
        let (p, q) = bench_instance(n, cfg)?;
        let alpha = clamp_alpha(cfg.policy.alpha(n), n, n);
        let mut best = f64::INFINITY;
        let mut last = None;
        for _ in 0..cfg.reps {
            let mut inner = 0usize;
            let start = Instant::now();
            loop {
                last = Some(approx_decide_run(&p, &q, cfg.rho, alpha));
                inner += 1;
                let ms = start.elapsed().as_secs_f64() * 1e3;
                if ms >= cfg.min_sample_ms || inner >= 1000 {
                    best = best.min(ms / inner as f64);
                    break;
                }
            }
        }
        let run = last.expect("at least one repetition");
        if n <= cfg.oracle_max_n {
            if let Some(c) = run.outcome.measured_cost() {
                oracle_jobs.push((rows.len(), p, q, c));
            }
        }
        let doubling_ratio = rows
            .last()
            .filter(|r: &&BenchRow| r.n * 2 == n && r.wall_time_ms > 0.0)
            .map(|r| best / r.wall_time_ms);
        rows.push(BenchRow {
            n,
            alpha,
            wall_time_ms: best,
            intervals_stored: run.stats.intervals_stored,
            bad_vertices: run.stats.bad_vertices,
            success: run.outcome.is_success(),
            cost_ratio: None,
            doubling_ratio,
        });
    }
    for (k, ratio) in oracle_ratios(oracle_jobs, thread_cap()) {
        rows[k].cost_ratio = ratio;
    }
    Ok(rows)
}

fn oracle_ratios(jobs: Vec<(usize, Chain, Chain, f64)>, threads: usize) -> Vec<(usize, Option<f64>)> {
    let chunk = jobs.len().div_ceil(threads.max(1)).max(1);
    std::thread::scope(|s| {
        let handles: Vec<_> = jobs
            .chunks(chunk)
            .map(|part| {
                s.spawn(move || {
                    part.iter()
                        .map(|(k, p, q, c)| {
                            let fd = exact_frechet(p, q, 1e-10);
                            (*k, (fd > 0.0).then(|| c / fd))
                        })
                        .collect::<Vec<_>>()
                })
            })
            .collect();
        handles.into_iter().flat_map(|h| h.join().expect("oracle thread panicked")).collect()
    })
}

/// CSV with a header row; empty fields for absent values.
pub fn to_csv(rows: &[BenchRow]) -> String {
    let opt = |x: Option<f64>| x.map_or(String::new(), |v| format!("{v:.4}"));
    let mut out = String::from("n,alpha,wall_time_ms,intervals_stored,bad_vertices,success,cost_ratio,doubling_ratio\n");
    for r in rows {
        out.push_str(&format!(
            "{},{:.4},{:.4},{},{},{},{},{}\n",
            r.n,
            r.alpha,
            r.wall_time_ms,
            r.intervals_stored,
            r.bad_vertices,
            r.success,
            opt(r.cost_ratio),
            opt(r.doubling_ratio)
        ));
    }
    out
}

/// Least-squares slope of `log time` against `log n`.
pub fn fitted_exponent(rows: &[BenchRow]) -> Option<f64> {
    let pts: Vec<(f64, f64)> = rows
        .iter()
        .filter(|r| r.wall_time_ms > 0.0)
        .map(|r| ((r.n as f64).ln(), r.wall_time_ms.ln()))
        .collect();
    if pts.len() < 2 {
        return None;
    }
    let k = pts.len() as f64;
    let (sx, sy) = pts.iter().fold((0.0, 0.0), |(a, b), (x, y)| (a + x, b + y));
    let (mx, my) = (sx / k, sy / k);
    let (num, den) = pts
        .iter()
        .fold((0.0, 0.0), |(a, b), (x, y)| (a + (x - mx) * (y - my), b + (x - mx) * (x - mx)));
    (den > 0.0).then(|| num / den)
}
