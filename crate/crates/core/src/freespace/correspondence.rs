//! Fréchet correspondences as monotone polylines in the parameter rectangle.

use serde::{Deserialize, Serialize};

use crate::error::{FrechetError, Result};
use crate::geometry::{dist, Chain};

/// A monotone polyline of breakpoints `(s, t)`; between consecutive
/// breakpoints the matching follows the straight segment joining them.
///
/// Vertical and horizontal pieces are legal: one curve may pause while the
/// other advances.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Correspondence {
    points: Vec<(f64, f64)>,
}

impl Correspondence {
    /// Validates monotonicity; consecutive duplicates are dropped.
    pub fn new(points: Vec<(f64, f64)>) -> Result<Correspondence> {
        if points.is_empty() {
            return Err(FrechetError::InvalidCorrespondence("no breakpoints".into()));
        }
        for (k, w) in points.windows(2).enumerate() {
            let ((s0, t0), (s1, t1)) = (w[0], w[1]);
            if !(s1 >= s0 && t1 >= t0) {
                return Err(FrechetError::InvalidCorrespondence(format!(
                    "breakpoint {} ({s1}, {t1}) precedes ({s0}, {t0})",
                    k + 2
                )));
            }
        }
        Ok(Correspondence::from_monotone(points))
    }

    pub(crate) fn from_monotone(mut points: Vec<(f64, f64)>) -> Correspondence {
        points.dedup();
        Correspondence { points }
    }

    /// The straight diagonal through every cell for chains of equal length.
    pub fn identity(n: usize) -> Correspondence {
        Correspondence::from_monotone((1..=n).map(|k| (k as f64, k as f64)).collect())
    }

    pub fn breakpoints(&self) -> &[(f64, f64)] {
        &self.points
    }

    pub fn into_breakpoints(self) -> Vec<(f64, f64)> {
        self.points
    }

    pub fn start(&self) -> (f64, f64) {
        self.points[0]
    }

    pub fn end(&self) -> (f64, f64) {
        *self.points.last().unwrap()
    }

    pub fn is_monotone(&self) -> bool {
        self.points.windows(2).all(|w| w[1].0 >= w[0].0 && w[1].1 >= w[0].1)
    }

    /// Starts at `(1, 1)` and ends at `(m, n)`.
    pub fn is_full(&self, m: usize, n: usize) -> bool {
        self.start() == (1.0, 1.0) && self.end() == (m as f64, n as f64)
    }

    /// Swaps the roles of the two curves.
    pub fn reversed(&self) -> Correspondence {
        Correspondence {
            points: self.points.iter().map(|&(s, t)| (t, s)).collect(),
        }
    }

    /// Breakpoints refined at every crossing of an integer parameter line, so
    /// consecutive points always share a free-space cell.
    pub fn refined(&self) -> Vec<(f64, f64)> {
        let mut out = vec![self.points[0]];
        for w in self.points.windows(2) {
            let ((s0, t0), (s1, t1)) = (w[0], w[1]);
            let mut lambdas: Vec<f64> = Vec::new();
            push_integer_crossings(s0, s1, &mut lambdas);
            push_integer_crossings(t0, t1, &mut lambdas);
            lambdas.sort_by(f64::total_cmp);
            for l in lambdas {
                let p = (s0 + l * (s1 - s0), t0 + l * (t1 - t0));
                out.push(p);
            }
            out.push((s1, t1));
        }
        out.dedup();
        out
    }
}

fn push_integer_crossings(a: f64, b: f64, out: &mut Vec<f64>) {
    if b <= a {
        return;
    }
    let mut k = a.floor() + 1.0;
    while k < b {
        out.push((k - a) / (b - a));
        k += 1.0;
    }
}

/// Cost `max d(P(s), Q(t))` over all matched pairs.
///
/// Within one cell both curves move affinely along a straight piece, so the
/// distance is convex there and its maximum sits at a refined breakpoint.
pub fn correspondence_cost(p: &Chain, q: &Chain, corr: &Correspondence) -> Result<f64> {
    if !corr.is_monotone() {
        return Err(FrechetError::InvalidCorrespondence("breakpoints are not monotone".into()));
    }
    let (m, n) = (p.len() as f64, q.len() as f64);
    let mut cost = 0.0_f64;
    for (s, t) in corr.refined() {
        if !(1.0..=m).contains(&s) || !(1.0..=n).contains(&t) {
            return Err(FrechetError::InvalidCorrespondence(format!(
                "breakpoint ({s}, {t}) outside [1, {m}] x [1, {n}]"
            )));
        }
        cost = cost.max(dist(&p.eval(s), &q.eval(t)));
    }
    Ok(cost)
}

/// Range of first coordinates matched to shared parameter `r`.
fn preimage(path: &[(f64, f64)], r: f64) -> (f64, f64) {
    let first_ge = path.partition_point(|p| p.1 < r);
    let last_le = path.partition_point(|p| p.1 <= r);
    let interpolate = |k: usize| -> f64 {
        if k == 0 {
            return path[0].0;
        }
        if k >= path.len() {
            return path[path.len() - 1].0;
        }
        let (x0, r0) = path[k - 1];
        let (x1, r1) = path[k];
        x0 + (r - r0) / (r1 - r0) * (x1 - x0)
    };
    let lo = if first_ge < path.len() && path[first_ge].1 == r {
        path[first_ge].0
    } else {
        interpolate(first_ge)
    };
    let hi = if last_le > 0 && path[last_le - 1].1 == r {
        path[last_le - 1].0
    } else {
        interpolate(last_le)
    };
    (lo, hi)
}

/// Composes `a` (between P and R) with `b` (between R and Q).
///
/// Sweeps the shared parameter of R; wherever either input pauses on R, the
/// output first advances along P and then along Q. Every output pair is matched
/// to a common point of R, so the cost is at most `cost(a) + cost(b)`.
pub fn compose_correspondences(a: &Correspondence, b: &Correspondence) -> Result<Correspondence> {
    let tol = 1e-9;
    let (a_start, a_end) = (a.start().1, a.end().1);
    let (b_start, b_end) = (b.start().0, b.end().0);
    if (a_start - b_start).abs() > tol || (a_end - b_end).abs() > tol {
        return Err(FrechetError::InvalidCorrespondence(format!(
            "shared domains differ: [{a_start}, {a_end}] vs [{b_start}, {b_end}]"
        )));
    }
    let a_pts = a.breakpoints();
    // express b as (t, r) so one preimage routine serves both inputs
    let b_pts: Vec<(f64, f64)> = b.breakpoints().iter().map(|&(r, t)| (t, r)).collect();
    let mut rs: Vec<f64> = a_pts.iter().map(|p| p.1).chain(b_pts.iter().map(|p| p.1)).collect();
    rs.sort_by(f64::total_cmp);
    rs.dedup();
    let mut out = Vec::with_capacity(rs.len() * 3);
    for r in rs {
        let (s_lo, s_hi) = preimage(a_pts, r);
        let (t_lo, t_hi) = preimage(&b_pts, r);
        out.push((s_lo, t_lo));
        out.push((s_hi, t_lo));
        out.push((s_hi, t_hi));
    }
    Correspondence::new(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chain(rows: &[&[f64]]) -> Chain {
        Chain::new(rows.iter().map(|r| r.to_vec()).collect()).unwrap()
    }

    #[test]
    fn cost_examples() {
        let p = chain(&[&[0.0, 0.0], &[1.0, 0.0]]);
        let q = chain(&[&[0.0, 1.0], &[1.0, 1.0]]);
        let diag = Correspondence::new(vec![(1.0, 1.0), (2.0, 2.0)]).unwrap();
        assert!((correspondence_cost(&p, &q, &diag).unwrap() - 1.0).abs() < 1e-15);
        let stair = Correspondence::new(vec![(1.0, 1.0), (2.0, 1.0), (2.0, 2.0)]).unwrap();
        let c = correspondence_cost(&p, &q, &stair).unwrap();
        assert!((c - 2f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn non_monotone_is_rejected() {
        assert!(Correspondence::new(vec![(1.0, 1.0), (0.5, 2.0)]).is_err());
        let p = chain(&[&[0.0], &[1.0]]);
        let bad = Correspondence { points: vec![(2.0, 1.0), (1.0, 2.0)] };
        assert!(correspondence_cost(&p, &p, &bad).is_err());
    }

    #[test]
    fn refinement_hits_cell_boundaries() {
        let c = Correspondence::new(vec![(1.0, 1.0), (3.0, 2.0)]).unwrap();
        assert_eq!(c.refined(), vec![(1.0, 1.0), (2.0, 1.5), (3.0, 2.0)]);
    }

    #[test]
    fn compose_with_identity_keeps_cost() {
        let p = chain(&[&[0.0, 0.0], &[1.0, 0.5], &[2.0, 0.0]]);
        let r = chain(&[&[0.0, 1.0], &[1.0, 1.0], &[2.0, 1.0]]);
        let a = Correspondence::new(vec![(1.0, 1.0), (1.5, 1.0), (2.0, 2.5), (3.0, 3.0)]).unwrap();
        let composed = compose_correspondences(&a, &Correspondence::identity(3)).unwrap();
        let c0 = correspondence_cost(&p, &r, &a).unwrap();
        let c1 = correspondence_cost(&p, &r, &composed).unwrap();
        assert!((c0 - c1).abs() < 1e-12);
        assert!(composed.is_full(3, 3));
    }

    #[test]
    fn compose_handles_pauses_on_shared_curve() {
        // a pauses on r = 2 while s runs 2 -> 3; b pauses on r = 2 while t runs 1 -> 2
        let a = Correspondence::new(vec![(1.0, 1.0), (2.0, 2.0), (3.0, 2.0), (4.0, 3.0)]).unwrap();
        let b = Correspondence::new(vec![(1.0, 1.0), (2.0, 1.0), (2.0, 2.0), (3.0, 3.0)]).unwrap();
        let c = compose_correspondences(&a, &b).unwrap();
        assert_eq!(
            c.breakpoints(),
            &[(1.0, 1.0), (2.0, 1.0), (3.0, 1.0), (3.0, 2.0), (4.0, 3.0)]
        );
    }

    #[test]
    fn compose_rejects_mismatched_domains() {
        let a = Correspondence::new(vec![(1.0, 1.0), (2.0, 2.0)]).unwrap();
        let b = Correspondence::new(vec![(1.0, 1.0), (3.0, 2.0)]).unwrap();
        assert!(compose_correspondences(&a, &b).is_err());
    }
}
