//! Classification grid: boxes of side `alpha * delta`, offsets chosen so few
//! vertices sit near a grid hyperplane, and good / bad / dangerous flags.

use crate::error::{FrechetError, Result};
use crate::geometry::{AxisBox, Chain};

/// Grid of axis-aligned boxes `[offset_k + z_k L, offset_k + (z_k + 1) L)`.
#[derive(Debug, Clone, PartialEq)]
pub struct GridSpec {
    pub side: f64,
    pub offsets: Vec<f64>,
    /// Vertices within this distance of a grid hyperplane are bad.
    pub margin: f64,
}

impl GridSpec {
    pub fn new(side: f64, offsets: Vec<f64>, margin: f64) -> Result<GridSpec> {
        if !(side > 0.0) || !side.is_finite() {
            return Err(FrechetError::InvalidParameter(format!("grid side must be positive, got {side}")));
        }
        if margin < 0.0 {
            return Err(FrechetError::InvalidParameter(format!("negative margin {margin}")));
        }
        if let Some(o) = offsets.iter().find(|o| !(0.0..side).contains(*o)) {
            return Err(FrechetError::InvalidParameter(format!("offset {o} outside [0, {side})")));
        }
        Ok(GridSpec { side, offsets, margin })
    }

    /// Integer box coordinates of `p`; boundaries belong to the higher box.
    pub fn box_of(&self, p: &[f64]) -> Vec<i64> {
        p.iter()
            .zip(&self.offsets)
            .map(|(x, o)| ((x - o) / self.side).floor() as i64)
            .collect()
    }

    pub fn box_at(&self, index: &[i64]) -> AxisBox {
        AxisBox {
            lo: index
                .iter()
                .zip(&self.offsets)
                .map(|(z, o)| o + *z as f64 * self.side)
                .collect(),
            side: self.side,
        }
    }

    pub fn box_containing(&self, p: &[f64]) -> AxisBox {
        self.box_at(&self.box_of(p))
    }

    /// Whether `p` is farther than `margin` from every grid hyperplane.
    pub fn is_interior(&self, p: &[f64], slack: f64) -> bool {
        p.iter()
            .zip(&self.offsets)
            .all(|(x, o)| !near_boundary(*x, *o, self.side, self.margin + slack))
    }
}

/// Whether coordinate `x` lies within `margin` of a hyperplane `offset + z L`.
#[inline]
fn near_boundary(x: f64, offset: f64, side: f64, margin: f64) -> bool {
    let r = (x - offset).rem_euclid(side);
    r <= margin || side - r <= margin
}

/// Picks, per dimension, the offset among `{0, 2 margin, 4 margin, ...} ∩ [0, L)`
/// that leaves the fewest vertices within `margin` of a hyperplane (smallest
/// candidate on ties).
///
/// Each vertex is near a hyperplane for at most two candidates, so the winner
/// has at most `2 |vertices| / K` near vertices with `K` the candidate count.
pub fn choose_offsets<'a, I>(vertices: I, dim: usize, side: f64, margin: f64) -> Result<Vec<f64>>
where
    I: IntoIterator<Item = &'a [f64]> + Clone,
{
    if margin < 0.0 {
        return Err(FrechetError::InvalidParameter(format!("negative margin {margin}")));
    }
    if !(side > 2.0 * margin) {
        return Err(FrechetError::InvalidParameter(format!(
            "grid side {side} must exceed twice the margin {margin} (alpha too small)"
        )));
    }
    if margin == 0.0 {
        return Ok(vec![0.0; dim]);
    }
    let spacing = 2.0 * margin;
    let count = (side / spacing).ceil() as usize;
    let candidates: Vec<f64> = (0..count).map(|k| k as f64 * spacing).filter(|o| *o < side).collect();
    let mut offsets = Vec::with_capacity(dim);
    for k in 0..dim {
        let mut near = vec![0usize; candidates.len()];
        let mut hits: Vec<usize> = Vec::with_capacity(12);
        for v in vertices.clone() {
            let x = v[k];
            let r = x.rem_euclid(side);
            hits.clear();
            // candidates within circular distance `margin` of r, then verified
            for c in [r - side, r, r + side] {
                let first = ((c - margin) / spacing).floor() as i64 - 1;
                let last = ((c + margin) / spacing).ceil() as i64 + 1;
                for idx in first.max(0)..=last.min(candidates.len() as i64 - 1) {
                    let idx = idx as usize;
                    if near_boundary(x, candidates[idx], side, margin) {
                        hits.push(idx);
                    }
                }
            }
            hits.sort_unstable();
            hits.dedup();
            for &idx in &hits {
                near[idx] += 1;
            }
        }
        let best = (0..candidates.len())
            .min_by_key(|&i| (near[i], i))
            .expect("at least one candidate");
        offsets.push(candidates[best]);
    }
    Ok(offsets)
}

/// Good / bad / dangerous flags for both chains.
#[derive(Debug, Clone)]
pub struct Classification {
    pub spec: Option<GridSpec>,
    /// `p_good[i - 1]` for vertex `p_i`.
    pub p_good: Vec<bool>,
    pub q_good: Vec<bool>,
    /// `p_edge_bad[j - 2]` for edge `P[j - 1, j]`.
    pub p_edge_bad: Vec<bool>,
    pub q_edge_bad: Vec<bool>,
    pub p_dangerous: Vec<bool>,
    pub q_dangerous: Vec<bool>,
}

impl Classification {
    /// Every vertex bad: used when no vertex can be far enough from the grid
    /// (box side at most twice the margin, or `delta = 0`).
    pub fn all_bad(m: usize, n: usize) -> Classification {
        Classification::from_good(None, vec![false; m], vec![false; n])
    }

    fn from_good(spec: Option<GridSpec>, p_good: Vec<bool>, q_good: Vec<bool>) -> Classification {
        let edges_bad = |good: &[bool]| -> Vec<bool> { good.windows(2).map(|w| !(w[0] && w[1])).collect() };
        let dangerous = |edge_bad: &[bool], n: usize| -> Vec<bool> {
            (1..=n)
                .map(|k| (k >= 2 && edge_bad[k - 2]) || (k < n && edge_bad[k - 1]))
                .collect()
        };
        let p_edge_bad = edges_bad(&p_good);
        let q_edge_bad = edges_bad(&q_good);
        let p_dangerous = dangerous(&p_edge_bad, p_good.len());
        let q_dangerous = dangerous(&q_edge_bad, q_good.len());
        Classification {
            spec,
            p_good,
            q_good,
            p_edge_bad,
            q_edge_bad,
            p_dangerous,
            q_dangerous,
        }
    }

    pub fn p_good(&self, i: usize) -> bool {
        self.p_good[i - 1]
    }
    pub fn q_good(&self, j: usize) -> bool {
        self.q_good[j - 1]
    }
    /// Edge `P[i - 1, i]`.
    pub fn p_edge_bad(&self, i: usize) -> bool {
        self.p_edge_bad[i - 2]
    }
    /// Edge `Q[j - 1, j]`.
    pub fn q_edge_bad(&self, j: usize) -> bool {
        self.q_edge_bad[j - 2]
    }
    pub fn p_dangerous(&self, i: usize) -> bool {
        self.p_dangerous[i - 1]
    }
    pub fn q_dangerous(&self, j: usize) -> bool {
        self.q_dangerous[j - 1]
    }

    pub fn bad_vertices(&self) -> usize {
        self.p_good.iter().chain(&self.q_good).filter(|g| !**g).count()
    }
    pub fn bad_edges(&self) -> usize {
        self.p_edge_bad.iter().chain(&self.q_edge_bad).filter(|b| **b).count()
    }
    pub fn dangerous_vertices(&self) -> usize {
        self.p_dangerous.iter().chain(&self.q_dangerous).filter(|b| **b).count()
    }

    /// Indices of dangerous vertices of `P`, ascending.
    pub fn p_dangerous_indices(&self) -> Vec<usize> {
        (1..=self.p_dangerous.len()).filter(|&i| self.p_dangerous(i)).collect()
    }
    pub fn q_dangerous_indices(&self) -> Vec<usize> {
        (1..=self.q_dangerous.len()).filter(|&j| self.q_dangerous(j)).collect()
    }
}

/// Flags vertices good when farther than `spec.margin` (plus `slack`) from every
/// grid hyperplane; chain endpoints are always bad.
pub fn classify(p: &Chain, q: &Chain, spec: &GridSpec, slack: f64) -> Classification {
    let flags = |c: &Chain| -> Vec<bool> {
        let n = c.len();
        c.vertices()
            .enumerate()
            .map(|(k, v)| k != 0 && k + 1 != n && spec.is_interior(v, slack))
            .collect()
    };
    Classification::from_good(Some(spec.clone()), flags(p), flags(q))
}
