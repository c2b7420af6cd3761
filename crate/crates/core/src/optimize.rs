//! From the decision procedure to a `(1 + eps) sqrt(d) (alpha + 2)`
//! approximation of the Fréchet distance, plus the `nu`-simplification used by
//! the long-edge branch.

use log::{debug, warn};
use serde::Serialize;

use crate::approxdecide::{clamp_alpha, decide_once, DecisionOutcome};
use crate::error::{FrechetError, Result};
use crate::freespace::{compose_correspondences, correspondence_cost, exact_frechet_witness, Correspondence, DEFAULT_REL_TOL};
use crate::geometry::{dist, Chain};

/// Sorted distinct pairwise distances between the vertices of both chains.
#[derive(Debug, Clone, PartialEq)]
pub struct CandidateSet {
    pub values: Vec<f64>,
}

pub fn candidate_distances(p: &Chain, q: &Chain) -> CandidateSet {
    let pts: Vec<&[f64]> = p.vertices().chain(q.vertices()).collect();
    let mut values = Vec::with_capacity(pts.len() * pts.len().saturating_sub(1) / 2);
    for (k, a) in pts.iter().enumerate() {
        for b in &pts[k + 1..] {
            let d = dist(a, b);
            if d > 0.0 {
                values.push(d);
            }
        }
    }
    values.sort_unstable_by(f64::total_cmp);
    values.dedup_by(|b, a| (*b - *a) <= 1e-12 * a.abs());
    CandidateSet { values }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimplificationResult {
    pub simplified: Chain,
    /// 1-based indices of the marked vertices of the input.
    pub marks: Vec<usize>,
}

/// Marks `r_1`, then repeatedly the first vertex at distance at least `nu`
/// from the last mark. The final vertex need not be marked.
pub fn nu_simplify(r: &Chain, nu: f64) -> SimplificationResult {
    assert!(nu > 0.0, "nu must be positive");
    let mut marks = vec![1];
    let mut current = r.vertex(1);
    for k in 2..=r.len() {
        if dist(r.vertex(k), current) >= nu {
            marks.push(k);
            current = r.vertex(k);
        }
    }
    let simplified = r.select(&marks);
    SimplificationResult { simplified, marks }
}

/// Witness of `FD(R, R^) <= nu`: hold each mark while `R` catches up to the
/// vertex before the next mark, then cross the next edge of both jointly.
pub fn simplification_correspondence(r: &Chain, result: &SimplificationResult) -> Result<Correspondence> {
    let marks = &result.marks;
    let ok = marks.first() == Some(&1)
        && marks.windows(2).all(|w| w[0] < w[1])
        && marks.last().is_some_and(|&k| k <= r.len())
        && result.simplified.len() == marks.len();
    if !ok {
        return Err(FrechetError::InvalidParameter("simplification does not belong to this chain".into()));
    }
    let mut pts = vec![(1.0, 1.0)];
    for (k, w) in marks.windows(2).enumerate() {
        let u = (k + 1) as f64;
        pts.push(((w[1] - 1) as f64, u));
        pts.push((w[1] as f64, u + 1.0));
    }
    pts.push((r.len() as f64, marks.len() as f64));
    Correspondence::new(pts)
}

/// Which step of the search produced the answer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Branch {
    /// The chains coincide up to tolerance.
    Zero,
    /// Binary search over the candidate distances alone.
    Candidates,
    /// Geometric ladder upward from the largest failing candidate.
    LowerLadder,
    /// Geometric ladder downward from the smallest succeeding candidate.
    UpperLadder,
    /// Exact distance of the simplified chains, lifted back.
    Simplified,
}

impl Branch {
    pub fn name(&self) -> &'static str {
        match self {
            Branch::Zero => "zero",
            Branch::Candidates => "candidates",
            Branch::LowerLadder => "lower_ladder",
            Branch::UpperLadder => "upper_ladder",
            Branch::Simplified => "simplified",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ApproxResult {
    pub value: f64,
    pub correspondence: Correspondence,
    pub branch: Branch,
    /// Number of decision procedure runs.
    pub decisions: usize,
    /// Largest failing and smallest succeeding decision value found by the searches.
    pub bracket: (Option<f64>, f64),
    /// In the simplification branch: whether every simplified edge was at
    /// least `1 + sqrt(d)` times the simplified distance.
    pub long_edges: Option<bool>,
}

/// `(value, correspondence)` with `value = cost(correspondence)` and
/// `FD <= value <= (1 + eps) sqrt(d) (alpha + 2) FD`.
pub fn approx_frechet(p: &Chain, q: &Chain, alpha: f64, eps: f64) -> Result<(f64, Correspondence)> {
    approx_frechet_report(p, q, alpha, eps).map(|r| (r.value, r.correspondence))
}

struct Prober<'a> {
    p: &'a Chain,
    q: &'a Chain,
    alpha: f64,
    runs: usize,
    best: Option<(f64, Correspondence)>,
}

impl Prober<'_> {
    fn probe(&mut self, delta: f64) -> bool {
        self.runs += 1;
        match decide_once(self.p, self.q, delta, self.alpha).outcome {
            DecisionOutcome::Success { correspondence, measured_cost } => {
                debug!("decision at {delta}: success, cost {measured_cost}");
                self.offer(measured_cost, correspondence);
                true
            }
            DecisionOutcome::Failure => {
                debug!("decision at {delta}: failure");
                false
            }
        }
    }

    fn offer(&mut self, cost: f64, corr: Correspondence) {
        if self.best.as_ref().is_none_or(|(c, _)| cost < *c) {
            self.best = Some((cost, corr));
        }
    }

    /// Over ascending `xs` where `lo` (if any) is known to fail and `hi` to
    /// succeed, narrows to an adjacent failing / succeeding pair.
    fn search(&mut self, xs: &[f64], lo: Option<usize>, hi: usize) -> (Option<usize>, usize) {
        let mut lo = lo.map_or(-1, |l| l as isize);
        let mut hi = hi as isize;
        while hi - lo > 1 {
            let mid = (lo + hi) / 2;
            if self.probe(xs[mid as usize]) {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        ((lo >= 0).then_some(lo as usize), hi as usize)
    }
}

pub fn approx_frechet_report(p: &Chain, q: &Chain, alpha: f64, eps: f64) -> Result<ApproxResult> {
    if !(eps > 0.0 && eps <= 1.0) {
        return Err(FrechetError::InvalidParameter(format!("eps must lie in (0, 1], got {eps}")));
    }
    if p.dim() != q.dim() {
        return Err(FrechetError::DimensionMismatch { expected: p.dim(), found: q.dim(), vertex: 1 });
    }
    let alpha = clamp_alpha(alpha, p.len(), q.len());
    let mut pr = Prober { p, q, alpha, runs: 0, best: None };
    let done = |pr: Prober<'_>, branch: Branch, bracket: (Option<f64>, f64), long_edges: Option<bool>| {
        let (value, correspondence) = pr.best.expect("some decision succeeded");
        ApproxResult { value, correspondence, branch, decisions: pr.runs, bracket, long_edges }
    };

    // (0) coincident chains
    if pr.probe(0.0) {
        return Ok(done(pr, Branch::Zero, (None, 0.0), None));
    }

    // (1) binary search over the candidate distances
    let mut z = candidate_distances(p, q).values;
    if z.is_empty() {
        z.push(dist(p.vertex(1), q.vertex(1)).max(f64::MIN_POSITIVE));
    }
    while !pr.probe(*z.last().unwrap()) {
        // the top candidate bounds FD, so this only guards against tolerance corner cases
        warn!("decision failed at the largest candidate {}, doubling", z.last().unwrap());
        let top = *z.last().unwrap() * 2.0;
        z.push(top);
    }
    let (lo, hi) = pr.search(&z, None, z.len() - 1);
    let mut b = z[hi];
    let a = match lo {
        Some(l) => z[l],
        None => {
            // (2) nothing failed: candidates can all exceed FD when endpoints coincide,
            // so halve until the decision fails to keep the ratio bounded
            let mut x = b;
            loop {
                x /= 2.0;
                if x < f64::MIN_POSITIVE {
                    return Ok(done(pr, Branch::Candidates, (None, b), None));
                }
                if !pr.probe(x) {
                    break x;
                }
                b = x;
            }
        }
    };
    debug!("candidate bracket a={a} b={b}");

    // (3) FD is small compared to a: climb from a in (1 + eps) steps
    let top = 12.0 * a / eps;
    if pr.probe(top) {
        let ladder = ladder_up(a, top, eps);
        let (lo, hi) = pr.search(&ladder, Some(0), ladder.len() - 1);
        return Ok(done(pr, Branch::LowerLadder, (lo.map(|l| ladder[l]), ladder[hi]), None));
    }

    // (4) FD is large compared to b: descend from b in (1 + eps) steps
    let d = p.dim() as f64;
    let bottom = b / (2.0 * (1.0 + eps / 2.0) * (1.0 + d.sqrt()) * alpha);
    if !pr.probe(bottom) {
        let ladder = ladder_down(b, bottom, eps);
        let (lo, hi) = pr.search(&ladder, Some(0), ladder.len() - 1);
        return Ok(done(pr, Branch::UpperLadder, (lo.map(|l| ladder[l]), ladder[hi]), None));
    }

    // (5) no vertex distance near FD: simplify and solve exactly
    let nu = 3.0 * a;
    let sp = nu_simplify(p, nu);
    let sq = nu_simplify(q, nu);
    let (fd_hat, c_hat) = exact_frechet_witness(&sp.simplified, &sq.simplified, DEFAULT_REL_TOL);
    let long_edges = long_edge_condition(&sp.simplified, &sq.simplified, fd_hat);
    if !long_edges {
        warn!("simplified chains have an edge shorter than (1 + sqrt d) FD = {}", (1.0 + d.sqrt()) * fd_hat);
    }
    let cp = simplification_correspondence(p, &sp)?;
    let cq = simplification_correspondence(q, &sq)?;
    let lifted = compose_correspondences(&cp, &compose_correspondences(&c_hat, &cq.reversed())?)?;
    let cost = correspondence_cost(p, q, &lifted)?;
    pr.offer(cost, lifted);
    Ok(done(pr, Branch::Simplified, (Some(top), bottom), Some(long_edges)))
}

/// `a, a (1 + eps), ...` below `top`, then `top`.
fn ladder_up(a: f64, top: f64, eps: f64) -> Vec<f64> {
    let mut out: Vec<f64> = (0..)
        .map(|k| a * (1.0 + eps).powi(k))
        .take_while(|x| *x < top)
        .collect();
    out.push(top);
    out
}

/// Ascending: `bottom`, then `b / (1 + eps)^k` above `bottom` up to `b`.
fn ladder_down(b: f64, bottom: f64, eps: f64) -> Vec<f64> {
    let mut out: Vec<f64> = (0..)
        .map(|k| b / (1.0 + eps).powi(k))
        .take_while(|x| *x > bottom)
        .collect();
    out.push(bottom);
    out.reverse();
    out
}

fn long_edge_condition(p: &Chain, q: &Chain, fd: f64) -> bool {
    let need = (1.0 + (p.dim() as f64).sqrt()) * fd;
    [p, q]
        .iter()
        .all(|c| (2..=c.len()).all(|k| dist(c.vertex(k - 1), c.vertex(k)) >= need))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chain(rows: &[&[f64]]) -> Chain {
        Chain::new(rows.iter().map(|r| r.to_vec()).collect()).unwrap()
    }

    #[test]
    fn candidates_on_a_line() {
        let p = chain(&[&[0.0, 0.0], &[3.0, 0.0]]);
        let q = chain(&[&[7.0, 0.0], &[0.0, 0.0]]);
        assert_eq!(candidate_distances(&p, &q).values, vec![3.0, 4.0, 7.0]);
    }

    #[test]
    fn simplify_examples() {
        let r = chain(&[&[0.0, 0.0], &[0.1, 0.0], &[0.2, 0.0], &[5.0, 0.0]]);
        let s = nu_simplify(&r, 1.0);
        assert_eq!(s.marks, vec![1, 4]);
        assert_eq!(s.simplified.to_rows(), vec![vec![0.0, 0.0], vec![5.0, 0.0]]);
        let c = simplification_correspondence(&r, &s).unwrap();
        assert!(correspondence_cost(&r, &s.simplified, &c).unwrap() <= 1.0);

        let short = chain(&[&[0.0, 0.0], &[0.5, 0.0]]);
        let s = nu_simplify(&short, 1.0);
        assert_eq!(s.marks, vec![1]);
        assert_eq!(s.simplified.len(), 1);
        let c = simplification_correspondence(&short, &s).unwrap();
        assert!((correspondence_cost(&short, &s.simplified, &c).unwrap() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn separated_chain_is_kept() {
        let r = chain(&[&[0.0], &[2.0], &[4.0]]);
        let s = nu_simplify(&r, 1.0);
        assert_eq!(s.simplified, r);
        let c = simplification_correspondence(&r, &s).unwrap();
        assert_eq!(correspondence_cost(&r, &s.simplified, &c).unwrap(), 0.0);
    }

    #[test]
    fn ladders_span_their_bracket() {
        let up = ladder_up(1.0, 12.0, 1.0);
        assert_eq!(up, vec![1.0, 2.0, 4.0, 8.0, 12.0]);
        let down = ladder_down(8.0, 0.7, 1.0);
        assert_eq!(down, vec![0.7, 1.0, 2.0, 4.0, 8.0]);
    }

    #[test]
    fn identical_chains_give_zero() {
        let p = chain(&[&[0.0, 0.0], &[1.0, 1.0], &[2.0, 0.0]]);
        let r = approx_frechet_report(&p, &p, 2.0, 0.5).unwrap();
        assert_eq!(r.value, 0.0);
        assert_eq!(r.branch, Branch::Zero);
        assert!(r.correspondence.is_full(3, 3));
    }

    #[test]
    fn parallel_segments() {
        let p = chain(&[&[0.0, 0.0], &[4.0, 0.0]]);
        let q = chain(&[&[0.0, 1.0], &[4.0, 1.0]]);
        let (v, c) = approx_frechet(&p, &q, 2.0, 1.0).unwrap();
        assert!(v >= 1.0 - 1e-9 && v <= 2.0 * 2f64.sqrt() * 4.0);
        assert!((correspondence_cost(&p, &q, &c).unwrap() - v).abs() <= 1e-12);
    }

    #[test]
    fn bad_eps_is_rejected() {
        let p = chain(&[&[0.0], &[1.0]]);
        assert!(approx_frechet(&p, &p, 1.0, 0.0).is_err());
        assert!(approx_frechet(&p, &p, 1.0, 1.5).is_err());
    }
}
