//! Greedy box-to-box mapping from a good vertex.
//!
//! The walk is written once for an oriented pair `(a, b)`: `a` owns the good
//! vertex, `b` carries the matched parameter. Running it with `a = P` gives
//! `GreedyMappingP`, with `a = Q` gives `GreedyMappingQ`, and case (d) simply
//! flips the orientation and keeps walking.

use log::trace;

use crate::freespace::segment_chain_match;
use crate::geometry::{dist_to_segment, first_boundary_crossing, free_on_edge, within_expanded_box, AxisBox, Chain, ParamRange};
use crate::grid::{Classification, GridSpec};

use super::store::{GreedyCall, IntervalKey, Side};

/// What one greedy run hands back to the decision procedure.
#[derive(Debug, Clone, PartialEq)]
pub enum Emission {
    /// `(m, n)` itself is approximately reachable.
    Terminal,
    Interval { key: IntervalKey, range: ParamRange },
}

pub(crate) struct GreedyEnv<'a> {
    pub p: &'a Chain,
    pub q: &'a Chain,
    pub class: &'a Classification,
    pub spec: &'a GridSpec,
    pub radius: f64,
    /// Slightly smaller radius for locating matching targets, so the located
    /// points pass the `radius` test after re-evaluation.
    pub inner: f64,
}

#[derive(Clone, Copy)]
struct View<'a> {
    a: &'a Chain,
    b: &'a Chain,
    side: Side,
}

impl<'a> View<'a> {
    fn new(env: &GreedyEnv<'a>, side: Side) -> View<'a> {
        match side {
            Side::P => View { a: env.p, b: env.q, side },
            Side::Q => View { a: env.q, b: env.p, side },
        }
    }

    fn flip(self) -> View<'a> {
        View {
            a: self.b,
            b: self.a,
            side: match self.side {
                Side::P => Side::Q,
                Side::Q => Side::P,
            },
        }
    }

    fn a_edge_bad(&self, class: &Classification, k: usize) -> bool {
        match self.side {
            Side::P => class.p_edge_bad(k),
            Side::Q => class.q_edge_bad(k),
        }
    }

    fn b_edge_bad(&self, class: &Classification, k: usize) -> bool {
        self.flip().a_edge_bad(class, k)
    }

    /// Side for vertex `a_k` against edge `b[l - 1, l]`.
    fn vertex_edge(&self, k: usize, l: usize) -> IntervalKey {
        match self.side {
            Side::P => IntervalKey::vertical(k, l),
            Side::Q => IntervalKey::horizontal(l, k),
        }
    }

    /// Side for edge `a[k - 1, k]` against vertex `b_l`.
    fn edge_vertex(&self, k: usize, l: usize) -> IntervalKey {
        match self.side {
            Side::P => IntervalKey::horizontal(k, l),
            Side::Q => IntervalKey::vertical(l, k),
        }
    }

    fn point(&self, sa: f64, tb: f64) -> (f64, f64) {
        match self.side {
            Side::P => (sa, tb),
            Side::Q => (tb, sa),
        }
    }
}

/// First free parameter of `center` on `chain` in `[from, to]`.
fn first_free(center: &[f64], radius: f64, chain: &Chain, from: f64, to: f64) -> Option<f64> {
    (chain.edge_of(from)..=chain.edge_of(to))
        .find_map(|j| free_on_edge(center, radius, chain, j)?.clip(from.max((j - 1) as f64), to.min(j as f64)))
        .map(|r| r.lo)
}

/// Last free parameter of `center` on `chain` in `[from, to]`.
fn last_free(center: &[f64], radius: f64, chain: &Chain, from: f64, to: f64) -> Option<f64> {
    (chain.edge_of(from)..=chain.edge_of(to))
        .rev()
        .find_map(|j| free_on_edge(center, radius, chain, j)?.clip(from.max((j - 1) as f64), to.min(j as f64)))
        .map(|r| r.hi)
}

/// First parameter after `from` where `b` comes within `radius` of `center`,
/// giving up once `b` has a vertex farther than `radius` from both the box
/// and the edge `a[k - 1, k]`; past such a vertex the matching step would
/// fail its containment check anyway.
fn far_target(view: &View<'_>, k: usize, bx: &AxisBox, radius: f64, from: f64) -> Option<f64> {
    let (a, b) = (view.a, view.b);
    let center = a.vertex(k);
    let (ea, eb) = (a.vertex(k - 1), a.vertex(k));
    for j in b.edge_of(from)..=b.len() {
        if let Some(r) = free_on_edge(center, radius, b, j).and_then(|r| r.clip(from.max((j - 1) as f64), j as f64)) {
            return Some(r.lo);
        }
        let v = b.vertex(j);
        if bx.distance(v) > radius && dist_to_segment(v, ea, eb) > radius {
            return None;
        }
    }
    None
}

/// Runs the greedy mapping for `call`.
///
/// `sink` receives each emission with its index and, when `record` is set,
/// the monotone local path from the call's start point to the emission's
/// canonical point. Returning `false` from `sink` stops the run.
pub(crate) fn run_greedy<F>(env: &GreedyEnv<'_>, call: GreedyCall, record: bool, mut sink: F)
where
    F: FnMut(usize, Emission, Option<Vec<(f64, f64)>>) -> bool,
{
    let radius = env.radius;
    let mut view = View::new(env, call.side);
    let mut i = call.vertex;
    let mut t = call.param;
    let mut path: Vec<(f64, f64)> = Vec::new();
    if record {
        path.push(call.start_point());
    }
    let mut emitted = 0usize;
    let mut emit = |e: Emission, via: &[(f64, f64)], path: &[(f64, f64)]| -> bool {
        let local = record.then(|| {
            let mut full = path.to_vec();
            full.extend_from_slice(via);
            full
        });
        emitted += 1;
        sink(emitted - 1, e, local)
    };

    loop {
        let (a, b) = (view.a, view.b);
        let (a_len, b_len) = (a.len(), b.len());
        let bx = env.spec.box_containing(a.vertex(i));
        let se = first_boundary_crossing(a, i as f64, &bx).filter(|&s| s < a_len as f64);
        let te = first_boundary_crossing(b, t, &bx).filter(|&x| x < b_len as f64);

        // case (b): one curve finishes inside the box
        if se.is_none() || te.is_none() {
            trace!("greedy {:?} at ({i}, {t}): a curve ends in the box", view.side);
            let rest_ok = if se.is_none() {
                within_expanded_box(b, ParamRange::new(t, b_len as f64), &bx, radius)
            } else {
                within_expanded_box(a, ParamRange::new(i as f64, a_len as f64), &bx, radius)
            };
            if rest_ok {
                emit(Emission::Terminal, &[view.point(a_len as f64, b_len as f64)], &path);
            }
            return;
        }
        let (se, te) = (se.unwrap(), te.unwrap());
        let ie = se.ceil() as usize;
        let je = te.ceil() as usize;
        trace!("greedy {:?} at ({i}, {t}): exits s={se} t={te}", view.side);

        if !view.a_edge_bad(env.class, ie) {
            // case (c): carry b along the good exit edge of a
            let Some(tf) = far_target(&view, ie, &bx, env.inner, t) else { return };
            let Some(tc) = last_free(a.vertex(ie - 1), env.inner, b, t, tf) else { return };
            if !within_expanded_box(b, ParamRange::new(t, tc), &bx, radius) {
                return;
            }
            let (ok, witness) = segment_chain_match(a.edge(ie), b, ParamRange::new(tc, tf), radius, record);
            if !ok {
                return;
            }
            if record {
                path.push(view.point((ie - 1) as f64, tc));
                let base = (ie - 1) as f64;
                path.extend(witness.unwrap_or_default().into_iter().map(|(u, x)| view.point(base + u, x)));
            }
            i = ie;
            t = tf;
        } else if !view.b_edge_bad(env.class, je) {
            // case (d): same step with the roles exchanged, then keep going from b's vertex.
            // b may already be inside its exit edge, so only the part after t is matched.
            let t0 = t.max((je - 1) as f64);
            let start = b.eval(t0);
            let Some(sf) = far_target(&view.flip(), je, &bx, env.inner, i as f64) else { return };
            let Some(sc) = last_free(&start, env.inner, a, i as f64, sf) else { return };
            if !within_expanded_box(a, ParamRange::new(i as f64, sc), &bx, radius) {
                return;
            }
            let seg = crate::geometry::Segment::new(&start, b.vertex(je));
            let (ok, witness) = segment_chain_match(seg, a, ParamRange::new(sc, sf), radius, record);
            if !ok {
                return;
            }
            if record {
                path.push(view.point(sc, t0));
                let span = je as f64 - t0;
                path.extend(witness.unwrap_or_default().into_iter().map(|(u, x)| view.point(x, t0 + u * span)));
            }
            view = view.flip();
            i = je;
            t = sf;
        } else {
            // case (e): both exit edges are bad, hand the boundary over to the main loop
            let exit_a = a.eval(se);
            for l in b.edge_of(t)..=je {
                let Some(tk) = first_free(&exit_a, radius, b, t.max((l - 1) as f64), te.min(l as f64)) else {
                    continue;
                };
                let via = [view.point(se, t), view.point(se, tk)];
                if let Some(r) = free_on_edge(a.vertex(ie), radius, b, l).and_then(|r| r.clip(tk, l as f64)) {
                    let e = Emission::Interval { key: view.vertex_edge(ie, l), range: r };
                    if !emit(e, &via, &path) {
                        return;
                    }
                }
                if let Some(r) = free_on_edge(b.vertex(l), radius, a, ie).and_then(|r| r.clip(se, ie as f64)) {
                    let e = Emission::Interval { key: view.edge_vertex(ie, l), range: r };
                    if !emit(e, &via, &path) {
                        return;
                    }
                }
            }
            let exit_b = b.eval(te);
            for k in a.edge_of(i as f64)..=ie {
                let Some(sk) = first_free(&exit_b, radius, a, (i as f64).max((k - 1) as f64), se.min(k as f64)) else {
                    continue;
                };
                let via = [view.point(i as f64, te), view.point(sk, te)];
                if let Some(r) = free_on_edge(b.vertex(je), radius, a, k).and_then(|r| r.clip(sk, k as f64)) {
                    let e = Emission::Interval { key: view.edge_vertex(k, je), range: r };
                    if !emit(e, &via, &path) {
                        return;
                    }
                }
                if let Some(r) = free_on_edge(a.vertex(k), radius, b, je).and_then(|r| r.clip(te, je as f64)) {
                    let e = Emission::Interval { key: view.vertex_edge(k, je), range: r };
                    if !emit(e, &via, &path) {
                        return;
                    }
                }
            }
            return;
        }
    }
}
