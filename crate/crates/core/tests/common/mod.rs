//! Shared test helpers: a brute-force oracle and seeded instance corpora.
#![allow(dead_code)]

use frechet_core::generate::{perturbed_copy, random_walk, uniform_points};
use frechet_core::geometry::{dist, lerp};
use frechet_core::Chain;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Discrete Fréchet distance of two point sequences, one DP row at a time.
pub fn discrete_frechet(a: &[Vec<f64>], b: &[Vec<f64>]) -> f64 {
    let mut prev = vec![f64::INFINITY; b.len()];
    let mut cur = vec![0.0; b.len()];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            let d = dist(x, y);
            let best = match (i, j) {
                (0, 0) => 0.0,
                (0, _) => cur[j - 1],
                (_, 0) => prev[0],
                _ => prev[j].min(prev[j - 1]).min(cur[j - 1]),
            };
            cur[j] = d.max(best);
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    prev[b.len() - 1]
}

/// Vertices plus evenly spaced points so consecutive samples are at most `h` apart.
pub fn resample(c: &Chain, h: f64) -> Vec<Vec<f64>> {
    let mut out = vec![c.vertex(1).to_vec()];
    for k in 2..=c.len() {
        let (a, b) = (c.vertex(k - 1), c.vertex(k));
        let pieces = (dist(a, b) / h).ceil().max(1.0) as usize;
        for s in 1..=pieces {
            out.push(lerp(a, b, s as f64 / pieces as f64));
        }
    }
    out
}

pub fn diameter(p: &Chain, q: &Chain) -> f64 {
    let pts: Vec<&[f64]> = p.vertices().chain(q.vertices()).collect();
    let mut d: f64 = 0.0;
    for a in &pts {
        for b in &pts {
            d = d.max(dist(a, b));
        }
    }
    d
}

/// Subdivision oracle: with samples at spacing `h`, the continuous distance
/// lies in `[DF_h - h, DF_h]`.
pub fn subdivision_bracket(p: &Chain, q: &Chain, h: f64) -> (f64, f64) {
    let df = discrete_frechet(&resample(p, h), &resample(q, h));
    (df - h, df)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    Uniform,
    Walks,
    Perturbed,
    Thinned,
}

/// One seeded pair of chains with at most `max_len` vertices each.
pub fn instance(seed: u64, max_len: usize, d: usize) -> (Chain, Chain, Kind) {
    let mut r = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed_f00d);
    let m = r.gen_range(2..=max_len);
    let n = r.gen_range(2..=max_len);
    let kind = match seed % 4 {
        0 => Kind::Uniform,
        1 => Kind::Walks,
        2 => Kind::Perturbed,
        _ => Kind::Thinned,
    };
    let (p, q) = match kind {
        Kind::Uniform => (
            uniform_points(m, d, seed, 10.0).unwrap(),
            uniform_points(n, d, seed + 1_000_003, 10.0).unwrap(),
        ),
        Kind::Walks => (
            random_walk(m, d, seed, 1.0).unwrap(),
            random_walk(n, d, seed + 1_000_003, 1.0).unwrap(),
        ),
        Kind::Perturbed => {
            let p = random_walk(m, d, seed, 1.0).unwrap();
            let rho = r.gen_range(0.01..0.5);
            let q = perturbed_copy(&p, rho, seed + 7).unwrap();
            (p, q)
        }
        Kind::Thinned => {
            let p = random_walk(m, d, seed, 1.0).unwrap();
            let rho = r.gen_range(0.01..0.5);
            let q = perturbed_copy(&p, rho, seed + 7).unwrap();
            let keep: Vec<usize> = (1..=q.len())
                .filter(|&k| k == 1 || k == q.len() || r.gen_bool(0.6))
                .collect();
            (p, q.select(&keep))
        }
    };
    (p, q, kind)
}

/// Runs `f` over `items` on up to `FRECHET_THREADS` threads, preserving order.
pub fn par_map<T: Sync, R: Send>(items: &[T], f: impl Fn(&T) -> R + Sync) -> Vec<R> {
    let threads = frechet_core::bench::thread_cap();
    let chunk = items.len().div_ceil(threads).max(1);
    std::thread::scope(|s| {
        let handles: Vec<_> = items.chunks(chunk).map(|c| s.spawn(|| c.iter().map(&f).collect::<Vec<R>>())).collect();
        handles.into_iter().flat_map(|h| h.join().unwrap()).collect()
    })
}
