//! Seeded synthetic curves for tests and benchmarks.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{FrechetError, Result};
use crate::geometry::Chain;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn check(n: usize, d: usize, min_d: usize) -> Result<()> {
    if n < 2 {
        return Err(FrechetError::InvalidParameter(format!("need at least 2 vertices, got {n}")));
    }
    if d < min_d {
        return Err(FrechetError::InvalidParameter(format!("need dimension at least {min_d}, got {d}")));
    }
    Ok(())
}

/// Random walk from the origin with steps uniform in `[-scale, scale]^d`.
pub fn random_walk(n: usize, d: usize, seed: u64, scale: f64) -> Result<Chain> {
    check(n, d, 1)?;
    let mut r = rng(seed);
    let mut pos = vec![0.0; d];
    let mut rows = Vec::with_capacity(n);
    rows.push(pos.clone());
    for _ in 1..n {
        for x in pos.iter_mut() {
            *x += r.gen_range(-scale..=scale);
        }
        rows.push(pos.clone());
    }
    Chain::new(rows)
}

/// Independent points uniform in `[0, scale]^d`.
pub fn uniform_points(n: usize, d: usize, seed: u64, scale: f64) -> Result<Chain> {
    check(n, d, 1)?;
    let mut r = rng(seed);
    Chain::new((0..n).map(|_| (0..d).map(|_| r.gen_range(0.0..scale)).collect()).collect())
}

/// Vertex `k` at `x = k`, `y` alternating between `0` and `amplitude`.
///
/// Its Fréchet distance to [`zigzag_baseline`] is exactly `amplitude`.
pub fn zigzag(n: usize, d: usize, amplitude: f64) -> Result<Chain> {
    check(n, d, 2)?;
    Chain::new(
        (0..n)
            .map(|k| {
                let mut v = vec![0.0; d];
                v[0] = k as f64;
                v[1] = if k % 2 == 1 { amplitude } else { 0.0 };
                v
            })
            .collect(),
    )
}

/// The segment along the x-axis under a zigzag of `n` vertices.
pub fn zigzag_baseline(n: usize, d: usize) -> Result<Chain> {
    check(n, d, 2)?;
    let mut end = vec![0.0; d];
    end[0] = (n - 1) as f64;
    Chain::new(vec![vec![0.0; d], end])
}

/// `n` equally spaced points on a circle of radius `scale` in the first two
/// coordinates; the curve stops one step short of closing.
pub fn circle(n: usize, d: usize, scale: f64) -> Result<Chain> {
    check(n, d, 2)?;
    Chain::new(
        (0..n)
            .map(|k| {
                let a = std::f64::consts::TAU * k as f64 / n as f64;
                let mut v = vec![0.0; d];
                v[0] = scale * a.cos();
                v[1] = scale * a.sin();
                v
            })
            .collect(),
    )
}

/// Moves every vertex by at most `rho`, so the vertex-wise matching certifies
/// a Fréchet distance of at most `rho` to `base`.
pub fn perturbed_copy(base: &Chain, rho: f64, seed: u64) -> Result<Chain> {
    if !(rho >= 0.0) {
        return Err(FrechetError::InvalidParameter(format!("rho must be non-negative, got {rho}")));
    }
    let mut r = rng(seed);
    let d = base.dim();
    // a cube of half-width rho / sqrt(d) fits inside the rho-ball
    let h = rho / (d as f64).sqrt();
    let rows = base
        .vertices()
        .map(|v| v.iter().map(|x| x + if h > 0.0 { r.gen_range(-h..=h) } else { 0.0 }).collect())
        .collect();
    Chain::new(rows)
}
