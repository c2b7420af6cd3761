//! Approximate decision procedure: decides `FD(P, Q) <= delta` up to a factor
//! `sqrt(d) (alpha + 2)` while only storing reachability intervals between
//! dangerous vertices and bad edges.
//!
//! Cells are processed in lexicographic order. An interval entering a cell
//! through a good edge starts a greedy box-to-box walk; one entering through
//! a bad edge is pushed across the cell directly. Every designation carries a
//! provenance record so a successful run can hand back a correspondence.

mod greedy;
pub mod store;

use log::{debug, warn};
use serde::Serialize;

use crate::error::{FrechetError, Result};
use crate::freespace::{decide_with_radius, Correspondence};
use crate::freespace::correspondence::correspondence_cost;
use crate::geometry::{closest_param, dist, free_on_edge, Chain, ParamRange, Tolerance};
use crate::grid::{choose_offsets, classify, Classification, GridSpec};

pub use greedy::Emission;
use greedy::{run_greedy, GreedyEnv};
pub use store::{
    ApproxInterval, GreedyCall, IntervalKey, IntervalStore, Orientation, ProvenanceRecord, Side, Source,
    StoreDiagnostics,
};

#[derive(Debug, Clone, PartialEq)]
pub enum DecisionOutcome {
    Success {
        correspondence: Correspondence,
        measured_cost: f64,
    },
    Failure,
}

impl DecisionOutcome {
    pub fn is_success(&self) -> bool {
        matches!(self, DecisionOutcome::Success { .. })
    }

    pub fn measured_cost(&self) -> Option<f64> {
        match self {
            DecisionOutcome::Success { measured_cost, .. } => Some(*measured_cost),
            DecisionOutcome::Failure => None,
        }
    }

    pub fn correspondence(&self) -> Option<&Correspondence> {
        match self {
            DecisionOutcome::Success { correspondence, .. } => Some(correspondence),
            DecisionOutcome::Failure => None,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct DecisionStats {
    pub m: usize,
    pub n: usize,
    pub d: usize,
    /// `alpha` after clamping.
    pub alpha: f64,
    pub bad_vertices: usize,
    pub bad_edges: usize,
    pub dangerous_vertices: usize,
    pub intervals_stored: usize,
    pub cells_processed: usize,
    pub greedy_calls: usize,
    pub upper_endpoint_mismatches: usize,
    pub hull_merges: usize,
    pub order_violations: usize,
    pub restriction_violations: usize,
    /// Single runs of the procedure behind this decision.
    pub runs: usize,
    /// `delta` and `alpha` of the run whose outcome was reported.
    pub run_delta: f64,
    pub run_alpha: f64,
}

/// Everything a run produced, for callers that want to inspect the store.
#[derive(Debug, Clone)]
pub struct DecisionRun {
    pub outcome: DecisionOutcome,
    pub stats: DecisionStats,
    pub store: IntervalStore,
}

/// Certified approximation bound: the expanded box of side `(alpha + 2) delta`
/// has diameter `sqrt(d) (alpha + 2) delta`.
pub fn cost_bound(dim: usize, alpha: f64, delta: f64) -> f64 {
    (dim as f64).sqrt() * (alpha + 2.0) * delta
}

/// Clamps `alpha` to `[sqrt(n), n]` for `n = max(m, n)`.
pub fn clamp_alpha(alpha: f64, m: usize, n: usize) -> f64 {
    let n = m.max(n).max(1) as f64;
    let (lo, hi) = (n.sqrt(), n);
    if alpha.is_nan() || alpha < lo || alpha > hi {
        let clamped = if alpha.is_nan() { lo } else { alpha.clamp(lo, hi) };
        warn!("alpha {alpha} outside [{lo}, {hi}], using {clamped}");
        clamped
    } else {
        alpha
    }
}

/// Grid, classification and tolerances for one `(P, Q, delta, alpha)`.
pub struct DecisionContext<'a> {
    p: &'a Chain,
    q: &'a Chain,
    delta: f64,
    alpha: f64,
    tol: Tolerance,
    class: Classification,
}

impl<'a> DecisionContext<'a> {
    /// # Panics
    /// If the chains differ in dimension or `delta` is negative or not finite.
    pub fn new(p: &'a Chain, q: &'a Chain, delta: f64, alpha: f64) -> DecisionContext<'a> {
        assert_eq!(p.dim(), q.dim(), "chains must share a dimension");
        assert!(delta >= 0.0 && delta.is_finite(), "delta must be finite and non-negative");
        DecisionContext::unclamped(p, q, delta, clamp_alpha(alpha, p.len(), q.len()))
    }

    fn unclamped(p: &'a Chain, q: &'a Chain, delta: f64, alpha: f64) -> DecisionContext<'a> {
        assert_eq!(p.dim(), q.dim(), "chains must share a dimension");
        assert!(delta >= 0.0 && delta.is_finite(), "delta must be finite and non-negative");
        let tol = Tolerance::for_chains(p, q);
        let side = alpha * delta;
        let margin = 3.0 * delta;
        let class = if delta > 0.0 && side > 2.0 * margin && p.len() > 1 && q.len() > 1 {
            let vertices = p.vertices().chain(q.vertices());
            let offsets = choose_offsets(vertices, p.dim(), side, margin).expect("side exceeds twice the margin");
            let spec = GridSpec::new(side, offsets, margin).expect("offsets lie in [0, side)");
            classify(p, q, &spec, tol.0)
        } else {
            Classification::all_bad(p.len(), q.len())
        };
        DecisionContext { p, q, delta, alpha, tol, class }
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn classification(&self) -> &Classification {
        &self.class
    }

    fn radius(&self) -> f64 {
        self.tol.radius(self.delta)
    }

    fn env(&self) -> Option<GreedyEnv<'_>> {
        Some(GreedyEnv {
            p: self.p,
            q: self.q,
            class: &self.class,
            spec: self.class.spec.as_ref()?,
            radius: self.radius(),
            inner: self.delta + 0.5 * self.tol.0,
        })
    }

    /// Designations made by `GreedyMappingP(i, t)`.
    pub fn greedy_mapping_p(&self, i: usize, t: f64) -> Result<Vec<Emission>> {
        self.greedy_mapping(GreedyCall { side: Side::P, vertex: i, param: t })
    }

    /// Designations made by `GreedyMappingQ(j, s)`.
    pub fn greedy_mapping_q(&self, j: usize, s: f64) -> Result<Vec<Emission>> {
        self.greedy_mapping(GreedyCall { side: Side::Q, vertex: j, param: s })
    }

    fn greedy_mapping(&self, call: GreedyCall) -> Result<Vec<Emission>> {
        let env = self
            .env()
            .ok_or_else(|| FrechetError::InvalidParameter("no grid: every vertex is bad".into()))?;
        let (a, b, good) = match call.side {
            Side::P => (self.p, self.q, &self.class.p_good),
            Side::Q => (self.q, self.p, &self.class.q_good),
        };
        if call.vertex < 1 || call.vertex > a.len() || !good[call.vertex - 1] {
            return Err(FrechetError::InvalidParameter(format!("vertex {} is not good", call.vertex)));
        }
        let pt = b.point_at(call.param)?;
        if dist(a.vertex(call.vertex), &pt) > self.radius() {
            return Err(FrechetError::InvalidParameter(format!(
                "start pair ({}, {}) is not free",
                call.vertex, call.param
            )));
        }
        let mut out = Vec::new();
        run_greedy(&env, call, false, |_, e, _| {
            out.push(e);
            true
        });
        Ok(out)
    }

    /// Whether `key` pairs a dangerous vertex with a bad edge.
    fn key_allowed(&self, key: &IntervalKey) -> bool {
        match key.orientation {
            Orientation::Vertical => self.class.p_dangerous(key.i) && self.class.q_edge_bad(key.j),
            Orientation::Horizontal => self.class.q_dangerous(key.j) && self.class.p_edge_bad(key.i),
        }
    }
}

/// Decides `FD(P, Q) <= delta` approximately.
///
/// Failure means `FD > delta`. Success carries a correspondence of cost at
/// most `sqrt(d) (alpha + 2) delta`. Unlike a single run, the answer is
/// monotone in `delta`; see [`approx_decide_run`].
pub fn approx_decide(p: &Chain, q: &Chain, delta: f64, alpha: f64) -> DecisionOutcome {
    approx_decide_run(p, q, delta, alpha).outcome
}

/// [`approx_decide`] returning statistics and the interval store as well.
///
/// A single run ([`decide_once`]) can succeed below `FD` and then fail at a
/// larger `delta`, because the grid changes with `delta`. This wrapper only
/// runs the procedure at `lambda` in the fixed lattice `{2^k}` and at two
/// values of alpha, `alpha` and `alpha / 2 - 1`, and accepts a run whose
/// measured cost is within the bound for `delta`. The answer is whether any
/// such run at `lambda <= 2^ceil(log2 delta)` is accepted; that set only grows
/// with `delta`, so the answer is monotone. The smaller alpha run at the top
/// lattice point is complete for `delta` and certifies the bound on its own,
/// and once it fails `FD` exceeds the top point, which rules out every lattice
/// point more than a factor `sqrt(d) (alpha + 2)` below it.
pub fn approx_decide_run(p: &Chain, q: &Chain, delta: f64, alpha: f64) -> DecisionRun {
    assert!(delta >= 0.0 && delta.is_finite(), "delta must be finite and non-negative");
    let alpha = clamp_alpha(alpha, p.len(), q.len());
    let bound = cost_bound(p.dim(), alpha, delta) * (1.0 + 1e-9);
    let top = lattice_ceil(delta);
    let alphas = [alpha, alpha / 2.0 - 1.0];
    let mut runs = 0usize;
    let mut last = None;
    let mut lambda = top;
    loop {
        for a in alphas {
            runs += 1;
            let mut run = run_context(&DecisionContext::unclamped(p, q, lambda, a));
            run.stats.alpha = alpha;
            run.stats.runs = runs;
            let accepted = match run.outcome.measured_cost() {
                Some(c) => c <= bound || top == 0.0,
                None => false,
            };
            if accepted {
                return run;
            }
            last = Some(run);
        }
        lambda /= 2.0;
        if top == 0.0 || cost_bound(p.dim(), alpha, lambda) * (1.0 + 1e-6) < top {
            break;
        }
    }
    let mut run = last.expect("at least one run");
    run.outcome = DecisionOutcome::Failure;
    run
}

/// Smallest power of two at least `x`, or 0.
fn lattice_ceil(x: f64) -> f64 {
    if x == 0.0 {
        return 0.0;
    }
    let mut l = 2f64.powi(x.log2().ceil() as i32);
    while l < x {
        l *= 2.0;
    }
    l
}

/// One run of the decision procedure at exactly `delta` and the clamped `alpha`.
/// Sound and complete, but not monotone in `delta` below `FD`.
pub fn decide_once(p: &Chain, q: &Chain, delta: f64, alpha: f64) -> DecisionRun {
    run_context(&DecisionContext::new(p, q, delta, alpha))
}

fn run_context(ctx: &DecisionContext<'_>) -> DecisionRun {
    let (p, q, delta) = (ctx.p, ctx.q, ctx.delta);
    let (m, n) = (p.len(), q.len());
    let radius = ctx.radius();
    let mut stats = DecisionStats {
        m,
        n,
        d: p.dim(),
        alpha: ctx.alpha,
        bad_vertices: ctx.class.bad_vertices(),
        bad_edges: ctx.class.bad_edges(),
        dangerous_vertices: ctx.class.dangerous_vertices(),
        runs: 1,
        run_delta: delta,
        run_alpha: ctx.alpha,
        ..DecisionStats::default()
    };
    let mut store = IntervalStore::new(m, n);

    if m == 1 || n == 1 {
        // one curve is a point: the exact row sweep is already linear
        let d = decide_with_radius(p, q, radius, true);
        let outcome = finish(p, q, d.correspondence.filter(|_| d.reachable));
        return DecisionRun { outcome, stats, store };
    }
    if dist(p.vertex(1), q.vertex(1)) > radius {
        return DecisionRun { outcome: DecisionOutcome::Failure, stats, store };
    }

    if let Some(r) = free_on_edge(p.vertex(1), radius, q, 2).filter(|r| r.lo <= 1.0) {
        let rec = store.record(r, None, Source::Seed);
        store.designate(IntervalKey::vertical(1, 2), r, rec);
    }
    if let Some(r) = free_on_edge(q.vertex(1), radius, p, 2).filter(|r| r.lo <= 1.0) {
        let rec = store.record(r, None, Source::Seed);
        store.designate(IntervalKey::horizontal(2, 1), r, rec);
    }

    let env = ctx.env();
    while let Some((i, j)) = store.pop_cell() {
        stats.cells_processed += 1;
        let left = IntervalKey::vertical(i - 1, j);
        if let Some(ta) = store.get(&left).map(|iv| iv.range.lo) {
            let anchor = (left, left.point(ta));
            if !ctx.class.p_edge_bad(i) {
                stats.greedy_calls += 1;
                let call = GreedyCall { side: Side::P, vertex: i - 1, param: ta };
                greedy_into_store(ctx, env.as_ref().expect("good edge implies a grid"), call, anchor, &mut store, &mut stats);
            } else {
                let v = free_on_edge(p.vertex(i), radius, q, j).and_then(|r| r.clip(ta, j as f64));
                let h = free_on_edge(q.vertex(j), radius, p, i);
                designate_direct(ctx, &mut store, &mut stats, anchor, v, h, i, j);
            }
        }
        let bottom = IntervalKey::horizontal(i, j - 1);
        if let Some(sa) = store.get(&bottom).map(|iv| iv.range.lo) {
            let anchor = (bottom, bottom.point(sa));
            if !ctx.class.q_edge_bad(j) {
                stats.greedy_calls += 1;
                let call = GreedyCall { side: Side::Q, vertex: j - 1, param: sa };
                greedy_into_store(ctx, env.as_ref().expect("good edge implies a grid"), call, anchor, &mut store, &mut stats);
            } else {
                let v = free_on_edge(p.vertex(i), radius, q, j);
                let h = free_on_edge(q.vertex(j), radius, p, i).and_then(|r| r.clip(sa, i as f64));
                designate_direct(ctx, &mut store, &mut stats, anchor, v, h, i, j);
            }
        }
    }

    stats.intervals_stored = store.len() + usize::from(store.terminal().is_some());
    let d = &store.diagnostics;
    stats.upper_endpoint_mismatches = d.upper_endpoint_mismatches;
    stats.hull_merges = d.hull_merges;
    stats.order_violations = d.order_violations;
    debug!("approx_decide delta={delta} alpha={} stats={stats:?}", ctx.alpha);

    let corr = reconstruct(ctx, &store).unwrap_or_else(|e| panic!("interval bookkeeping is inconsistent: {e}"));
    let outcome = finish(p, q, corr);
    DecisionRun { outcome, stats, store }
}

fn finish(p: &Chain, q: &Chain, corr: Option<Correspondence>) -> DecisionOutcome {
    match corr {
        Some(c) => {
            let measured_cost = correspondence_cost(p, q, &c).expect("reconstructed paths are monotone and in range");
            DecisionOutcome::Success { correspondence: c, measured_cost }
        }
        None => DecisionOutcome::Failure,
    }
}

#[allow(clippy::too_many_arguments)]
fn designate_direct(
    ctx: &DecisionContext<'_>,
    store: &mut IntervalStore,
    stats: &mut DecisionStats,
    anchor: (IntervalKey, (f64, f64)),
    v: Option<ParamRange>,
    h: Option<ParamRange>,
    i: usize,
    j: usize,
) {
    for (key, range) in [(IntervalKey::vertical(i, j), v), (IntervalKey::horizontal(i, j), h)] {
        if let Some(range) = range {
            if !ctx.key_allowed(&key) {
                stats.restriction_violations += 1;
            }
            let rec = store.record(range, Some(anchor), Source::Direct);
            store.designate(key, range, rec);
        }
    }
}

fn greedy_into_store(
    ctx: &DecisionContext<'_>,
    env: &GreedyEnv<'_>,
    call: GreedyCall,
    anchor: (IntervalKey, (f64, f64)),
    store: &mut IntervalStore,
    stats: &mut DecisionStats,
) {
    run_greedy(env, call, false, |emission, e, _| {
        let source = Source::Greedy { call, emission };
        match e {
            Emission::Terminal => {
                let rec = store.record(ParamRange::point(0.0), Some(anchor), source);
                store.designate_terminal(rec);
            }
            Emission::Interval { key, range } => {
                if !ctx.key_allowed(&key) {
                    stats.restriction_violations += 1;
                }
                let rec = store.record(range, Some(anchor), source);
                store.designate(key, range, rec);
            }
        }
        true
    });
}

/// Local path of `rec` from its anchor (or `(1, 1)`) to its canonical point.
fn local_path(ctx: &DecisionContext<'_>, rec: &ProvenanceRecord) -> Result<Vec<(f64, f64)>> {
    match (&rec.source, rec.anchor) {
        (Source::Seed, _) => Ok(vec![(1.0, 1.0)]),
        (Source::Direct, Some((_, pt))) => Ok(vec![pt]),
        (Source::Greedy { call, emission }, Some(_)) => {
            let env = ctx
                .env()
                .ok_or_else(|| FrechetError::BrokenProvenance("greedy record without a grid".into()))?;
            let mut found = None;
            run_greedy(&env, *call, true, |k, _, path| {
                if k == *emission {
                    found = path;
                    false
                } else {
                    true
                }
            });
            found.ok_or_else(|| FrechetError::BrokenProvenance(format!("replay of {call:?} lost emission {emission}")))
        }
        (src, None) => Err(FrechetError::BrokenProvenance(format!("{src:?} record without an anchor"))),
    }
}

/// Walks provenance backwards from `(m, n)` and concatenates the local paths;
/// `None` when `(m, n)` was never designated.
fn reconstruct(ctx: &DecisionContext<'_>, store: &IntervalStore) -> Result<Option<Correspondence>> {
    let (m, n) = (ctx.p.len(), ctx.q.len());
    let end = (m as f64, n as f64);
    let final_v = IntervalKey::vertical(m, n);
    let final_h = IntervalKey::horizontal(m, n);
    let Some(first) = store
        .covering_record(&final_v, n as f64)
        .or_else(|| store.covering_record(&final_h, m as f64))
        .or(store.terminal())
    else {
        return Ok(None);
    };
    let mut rec = first.clone();
    let mut target = end;
    let mut pieces: Vec<Vec<(f64, f64)>> = Vec::new();
    let limit = store.intervals().map(|iv| iv.records.len()).sum::<usize>() + 2;
    for _ in 0..limit {
        let anchor = match (&rec.source, rec.anchor) {
            (Source::Direct, Some((key, pt))) => Some((key, direct_anchor(ctx, store, key, pt, target))),
            (_, a) => a,
        };
        let mut local = match (&rec.source, anchor) {
            (Source::Direct, Some((_, pt))) => vec![pt],
            _ => local_path(ctx, &rec)?,
        };
        local.push(target);
        pieces.push(local);
        let Some((key, pt)) = anchor else {
            let points: Vec<(f64, f64)> = pieces.into_iter().rev().flatten().collect();
            return monotone(points).map(Some);
        };
        rec = store
            .covering_record(&key, key.coordinate(pt))
            .ok_or_else(|| FrechetError::BrokenProvenance(format!("no record of {key:?} covers {pt:?}")))?
            .clone();
        target = pt;
    }
    Err(FrechetError::BrokenProvenance("provenance chain does not terminate".into()))
}

/// A direct record reaches its range by one straight segment from anywhere on
/// the predecessor interval that stays monotone, so pick the point nearest to
/// the predecessor's vertex instead of the recorded lower endpoint. Falls back
/// to the recorded anchor if that point is not covered by a record.
fn direct_anchor(
    ctx: &DecisionContext<'_>,
    store: &IntervalStore,
    key: IntervalKey,
    recorded: (f64, f64),
    target: (f64, f64),
) -> (f64, f64) {
    let Some(iv) = store.get(&key) else { return recorded };
    let (center, chain, edge) = match key.orientation {
        Orientation::Vertical => (ctx.p.vertex(key.i), ctx.q, key.j),
        Orientation::Horizontal => (ctx.q.vertex(key.j), ctx.p, key.i),
    };
    let cap = iv.range.hi.min(key.coordinate(target));
    let foot = (edge - 1) as f64 + closest_param(center, chain.edge(edge));
    let x = foot.min(cap).max(iv.range.lo);
    if x <= key.coordinate(target) && store.covering_record(&key, x).is_some() {
        key.point(x)
    } else {
        recorded
    }
}

/// Absorbs rounding-level backward steps; anything larger is a bookkeeping bug.
fn monotone(mut points: Vec<(f64, f64)>) -> Result<Correspondence> {
    let mut hi = (f64::NEG_INFINITY, f64::NEG_INFINITY);
    for p in points.iter_mut() {
        if p.0 < hi.0 - 1e-7 || p.1 < hi.1 - 1e-7 {
            return Err(FrechetError::BrokenProvenance(format!("path steps back to {p:?} after {hi:?}")));
        }
        p.0 = p.0.max(hi.0);
        p.1 = p.1.max(hi.1);
        hi = *p;
    }
    Correspondence::new(points)
}
