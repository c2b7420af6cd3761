//! Exact free-space machinery.
//!
//! The free space of `P` and `Q` at radius `delta` is the set of parameter
//! pairs `(s, t)` with `d(P(s), Q(t)) <= delta`. Cell `C(i, j)` is
//! `[i - 1, i] x [j - 1, j]` for `2 <= i <= m`, `2 <= j <= n`; the free part of
//! every cell is convex, which is what makes the `O(1)` propagation rule in
//! [`propagate_cell`] and straight in-cell correspondence pieces valid.

pub mod correspondence;

pub use correspondence::{compose_correspondences, correspondence_cost, Correspondence};

use crate::error::{FrechetError, Result};
use crate::geometry::{closest_param, dist, free_on_edge, Chain, ParamRange, Segment, Tolerance};

/// Default relative width at which [`exact_frechet`] stops bisecting.
pub const DEFAULT_REL_TOL: f64 = 1e-10;

/// Free intervals on the four sides of cell `C(i, j)`, in chain parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct FreeCell {
    pub i: usize,
    pub j: usize,
    /// `{i - 1} x [j - 1, j]`
    pub left: Option<ParamRange>,
    /// `{i} x [j - 1, j]`
    pub right: Option<ParamRange>,
    /// `[i - 1, i] x {j - 1}`
    pub bottom: Option<ParamRange>,
    /// `[i - 1, i] x {j}`
    pub top: Option<ParamRange>,
}

pub fn cell_free_intervals(p: &Chain, q: &Chain, i: usize, j: usize, delta: f64) -> Result<FreeCell> {
    if i < 2 || i > p.len() || j < 2 || j > q.len() {
        return Err(FrechetError::CellOutOfRange { i, j });
    }
    let radius = Tolerance::for_chains(p, q).radius(delta);
    Ok(free_cell(p, q, i, j, radius))
}

pub(crate) fn free_cell(p: &Chain, q: &Chain, i: usize, j: usize, radius: f64) -> FreeCell {
    FreeCell {
        i,
        j,
        left: free_on_edge(p.vertex(i - 1), radius, q, j),
        right: free_on_edge(p.vertex(i), radius, q, j),
        bottom: free_on_edge(q.vertex(j - 1), radius, p, i),
        top: free_on_edge(q.vertex(j), radius, p, i),
    }
}

/// Reachable parts of the right and top sides given reachable parts of the
/// left and bottom sides.
///
/// Entering from the bottom at `s_b` reaches the whole right side and the top
/// side from `s_b` on; entering from the left at `t_l` reaches the whole top
/// side and the right side from `t_l` on.
pub fn propagate_cell(
    cell: &FreeCell,
    left_reach: Option<ParamRange>,
    bottom_reach: Option<ParamRange>,
) -> (Option<ParamRange>, Option<ParamRange>) {
    let right = match (bottom_reach, left_reach) {
        (Some(_), _) => cell.right,
        (None, Some(l)) => cell.right.and_then(|r| r.clip(l.lo, f64::INFINITY)),
        (None, None) => None,
    };
    let top = match (left_reach, bottom_reach) {
        (Some(_), _) => cell.top,
        (None, Some(b)) => cell.top.and_then(|r| r.clip(b.lo, f64::INFINITY)),
        (None, None) => None,
    };
    (right, top)
}

/// Result of the exact decision procedure.
#[derive(Debug, Clone)]
pub struct ExactDecision {
    pub reachable: bool,
    pub correspondence: Option<Correspondence>,
}

/// Decides `FD(P, Q) <= delta`; with `want_correspondence` a witness of cost at
/// most `delta` (up to the comparison tolerance) is reconstructed.
pub fn exact_decide(p: &Chain, q: &Chain, delta: f64, want_correspondence: bool) -> ExactDecision {
    let radius = Tolerance::for_chains(p, q).radius(delta);
    decide_with_radius(p, q, radius, want_correspondence)
}

/// Reachable intervals for every vertical side `V(i, j) = {i} x [j-1, j]` and
/// horizontal side `H(i, j) = [i-1, i] x {j}`.
struct ReachTable {
    n: usize,
    v: Vec<Option<ParamRange>>,
    h: Vec<Option<ParamRange>>,
}

impl ReachTable {
    fn v(&self, i: usize, j: usize) -> Option<ParamRange> {
        self.v[(i - 1) * self.n + (j - 1)]
    }
    fn h(&self, i: usize, j: usize) -> Option<ParamRange> {
        self.h[(i - 1) * self.n + (j - 1)]
    }
}

pub(crate) fn decide_with_radius(p: &Chain, q: &Chain, radius: f64, want: bool) -> ExactDecision {
    let (m, n) = (p.len(), q.len());
    let fail = ExactDecision { reachable: false, correspondence: None };
    if m == 1 || n == 1 {
        let ok = if m == 1 {
            q.vertices().all(|v| dist(p.vertex(1), v) <= radius)
        } else {
            p.vertices().all(|v| dist(q.vertex(1), v) <= radius)
        };
        if !ok {
            return fail;
        }
        let corr = want.then(|| Correspondence::from_monotone(vec![(1.0, 1.0), (m as f64, n as f64)]));
        return ExactDecision { reachable: true, correspondence: corr };
    }
    if dist(p.vertex(1), q.vertex(1)) > radius {
        return fail;
    }

    let mut table = want.then(|| ReachTable {
        n,
        v: vec![None; m * n],
        h: vec![None; m * n],
    });

    // column s = 1: reachable while the free space stays connected along it
    let mut col: Vec<Option<ParamRange>> = vec![None; n + 1];
    let mut prev_hi = 1.0;
    for j in 2..=n {
        let free = free_on_edge(p.vertex(1), radius, q, j);
        match free {
            Some(r) if r.lo == prev_hi => {
                col[j] = Some(r);
                prev_hi = if r.hi == j as f64 { r.hi } else { f64::NAN };
            }
            _ => break,
        }
    }
    let mut row_hi = 1.0;
    let mut row_open = true;
    let mut bottom_row: Vec<Option<ParamRange>> = vec![None; m + 1];
    for i in 2..=m {
        if !row_open {
            break;
        }
        match free_on_edge(q.vertex(1), radius, p, i) {
            Some(r) if r.lo == row_hi => {
                bottom_row[i] = Some(r);
                if r.hi == i as f64 {
                    row_hi = r.hi;
                } else {
                    row_open = false;
                }
            }
            _ => row_open = false,
        }
    }
    if let Some(t) = table.as_mut() {
        for j in 2..=n {
            t.v[j - 1] = col[j];
        }
        for i in 2..=m {
            t.h[(i - 1) * n] = bottom_row[i];
        }
    }

    for i in 2..=m {
        let mut below = bottom_row[i];
        for j in 2..=n {
            let left = col[j];
            if left.is_none() && below.is_none() {
                col[j] = None;
                continue;
            }
            let cell = free_cell(p, q, i, j, radius);
            let (right, top) = propagate_cell(&cell, left, below);
            col[j] = right;
            below = top;
            if let Some(t) = table.as_mut() {
                t.v[(i - 1) * n + (j - 1)] = right;
                t.h[(i - 1) * n + (j - 1)] = top;
            }
        }
        if i == m {
            let reachable = col[n].is_some_and(|r| r.hi == n as f64) || below.is_some_and(|r| r.hi == m as f64);
            if !reachable {
                return fail;
            }
        }
    }

    let correspondence = table.map(|t| backtrack(&t, p, q, m, n));
    ExactDecision { reachable: true, correspondence }
}

/// Walks stored reachable intervals backwards from `(m, n)`. Each step enters
/// the current cell through the reachable entry point nearest to the matching
/// vertex, which keeps coincident stretches exactly on the diagonal.
fn backtrack(t: &ReachTable, p: &Chain, q: &Chain, m: usize, n: usize) -> Correspondence {
    #[derive(Clone, Copy)]
    enum At {
        V(usize, usize, f64),
        H(usize, usize, f64),
    }
    // best point of `range` capped at `cap` for vertex `center` against `edge` of `chain`
    let pick = |center: &[f64], chain: &Chain, edge: usize, range: ParamRange, cap: f64| -> (f64, f64) {
        let hi = range.hi.min(cap);
        let x = ((edge - 1) as f64 + closest_param(center, chain.edge(edge))).clamp(range.lo, hi);
        (x, dist(center, &chain.eval(x)))
    };
    let mut pts = Vec::new();
    let mut at = if t.v(m, n).is_some_and(|r| r.hi == n as f64) {
        At::V(m, n, n as f64)
    } else {
        At::H(m, n, m as f64)
    };
    loop {
        let (i, j) = match at {
            At::V(i, j, tv) => {
                pts.push((i as f64, tv));
                if i == 1 {
                    break;
                }
                (i, j)
            }
            At::H(i, j, sv) => {
                pts.push((sv, j as f64));
                if j == 1 {
                    break;
                }
                (i, j)
            }
        };
        // entering from the left side caps t, entering from below caps s
        let (cap_t, cap_s) = match at {
            At::V(_, _, tv) => (tv, i as f64),
            At::H(_, _, sv) => (j as f64, sv),
        };
        let left = (i > 1)
            .then(|| t.v(i - 1, j))
            .flatten()
            .filter(|l| l.lo <= cap_t)
            .map(|l| pick(p.vertex(i - 1), q, j, l, cap_t));
        let below = (j > 1)
            .then(|| t.h(i, j - 1))
            .flatten()
            .filter(|b| b.lo <= cap_s)
            .map(|b| pick(q.vertex(j - 1), p, i, b, cap_s));
        at = match (left, below) {
            (Some((x, dl)), Some((_, db))) if dl <= db => At::V(i - 1, j, x),
            (Some((x, _)), None) => At::V(i - 1, j, x),
            (_, Some((x, _))) => At::H(i, j - 1, x),
            (None, None) => unreachable!("reachable side without entry"),
        };
    }
    pts.push((1.0, 1.0));
    pts.reverse();
    Correspondence::from_monotone(pts)
}

/// Decides `FD(segment, chain[range]) <= delta` in a single free-space row.
pub fn segment_chain_decide(seg: Segment<'_>, chain: &Chain, range: ParamRange, delta: f64) -> bool {
    let scale = seg.a.iter().chain(seg.b).fold(chain.coord_scale(), |m, x| m.max(x.abs()));
    let radius = Tolerance::for_scale(scale).radius(delta);
    segment_chain_match(seg, chain, range, radius, false).0
}

/// Like [`segment_chain_decide`] with an explicit radius; the optional witness
/// is returned as `(u, t)` pairs with `u in [0, 1]` along the segment and `t` a
/// parameter of `chain`.
pub(crate) fn segment_chain_match(
    seg: Segment<'_>,
    chain: &Chain,
    range: ParamRange,
    radius: f64,
    want: bool,
) -> (bool, Option<Vec<(f64, f64)>>) {
    let edge = Chain::new(vec![seg.a.to_vec(), seg.b.to_vec()]).expect("segment endpoints are finite");
    let sub = chain.subchain(range);
    let d = decide_with_radius(&edge, &sub.chain, radius, want);
    let witness = d.correspondence.map(|c| {
        let degenerate = edge.len() == 1;
        c.into_breakpoints()
            .into_iter()
            .map(|(s, u)| (if degenerate { 0.0 } else { s - 1.0 }, sub.to_parent(u)))
            .collect()
    });
    (d.reachable, witness)
}

/// Exact Fréchet distance up to relative width `rel_tol`, by bisection of
/// [`exact_decide`] between the endpoint lower bound and the largest vertex
/// pair distance (the distance is convex per cell, so it peaks at vertices).
pub fn exact_frechet(p: &Chain, q: &Chain, rel_tol: f64) -> f64 {
    bisect(p, q, rel_tol).0
}

/// [`exact_frechet`] together with a correspondence whose cost is within the
/// final bisection bracket.
pub fn exact_frechet_witness(p: &Chain, q: &Chain, rel_tol: f64) -> (f64, Correspondence) {
    let (value, hi) = bisect(p, q, rel_tol);
    let corr = exact_decide(p, q, hi, true)
        .correspondence
        .expect("upper bracket is always feasible");
    (value, corr)
}

/// Returns the estimate and an upper bracket at which the decision succeeds.
fn bisect(p: &Chain, q: &Chain, rel_tol: f64) -> (f64, f64) {
    assert!(rel_tol > 0.0, "rel_tol must be positive");
    let (m, n) = (p.len(), q.len());
    let mut lo = dist(p.vertex(1), q.vertex(1)).max(dist(p.vertex(m), q.vertex(n)));
    let mut hi = p
        .vertices()
        .flat_map(|a| q.vertices().map(move |b| dist(a, b)))
        .fold(lo, f64::max);
    if exact_decide(p, q, lo, false).reachable {
        return (lo, lo);
    }
    let floor = 1e-12 * p.coord_scale().max(q.coord_scale()).max(1.0);
    while hi - lo > (rel_tol * hi).max(floor) {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        // uninflated radius: the tolerance would bias the estimate low by tau
        if decide_with_radius(p, q, mid, false).reachable {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    (0.5 * (lo + hi), hi)
}
