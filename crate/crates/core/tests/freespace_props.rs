mod common;

use common::{diameter, instance, subdivision_bracket};
use frechet_core::freespace::{
    cell_free_intervals, compose_correspondences, correspondence_cost, exact_decide, exact_frechet, exact_frechet_witness,
    propagate_cell, segment_chain_decide, Correspondence,
};
use frechet_core::geometry::{Chain, ParamRange, Segment};
use proptest::prelude::*;

fn chain(rows: &[&[f64]]) -> Chain {
    Chain::new(rows.iter().map(|r| r.to_vec()).collect()).unwrap()
}

fn small_chain(d: usize) -> impl Strategy<Value = Chain> {
    prop::collection::vec(prop::collection::vec(-5.0..5.0f64, d), 2..=6)
        .prop_filter_map("degenerate", |rows| Chain::new(rows).ok())
}

fn pair() -> impl Strategy<Value = (Chain, Chain)> {
    (1usize..=3).prop_flat_map(|d| (small_chain(d), small_chain(d)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn decision_is_monotone_and_symmetric((p, q) in pair(), lo in 0.0..6.0f64, step in 0.0..3.0f64) {
        let (a, b) = (exact_decide(&p, &q, lo, false).reachable, exact_decide(&p, &q, lo + step, false).reachable);
        prop_assert!(!a || b, "true at {lo}, false at {}", lo + step);
        prop_assert_eq!(a, exact_decide(&q, &p, lo, false).reachable);
    }

    #[test]
    fn returned_correspondences_are_sound((p, q) in pair(), delta in 0.0..8.0f64) {
        let d = exact_decide(&p, &q, delta, true);
        if d.reachable {
            let c = d.correspondence.unwrap();
            prop_assert!(c.is_monotone() && c.is_full(p.len(), q.len()));
            let cost = correspondence_cost(&p, &q, &c).unwrap();
            prop_assert!(cost <= delta * (1.0 + 1e-9) + 1e-8, "cost {cost} above {delta}");
        }
    }

    #[test]
    fn propagation_stays_inside_free_intervals((p, q) in pair(), delta in 0.0..6.0f64, i in 0usize..6, j in 0usize..6, l in prop::option::of((0.0..1.0f64, 0.0..1.0f64)), b in prop::option::of((0.0..1.0f64, 0.0..1.0f64))) {
        let i = 2 + i % (p.len() - 1);
        let j = 2 + j % (q.len() - 1);
        let cell = cell_free_intervals(&p, &q, i, j, delta).unwrap();
        let clip = |side: Option<ParamRange>, r: Option<(f64, f64)>| -> Option<ParamRange> {
            let (x, y) = r?;
            let side = side?;
            let (lo, hi) = (side.lo + x.min(y) * side.len(), side.lo + x.max(y) * side.len());
            Some(ParamRange::new(lo, hi))
        };
        let (right, top) = propagate_cell(&cell, clip(cell.left, l), clip(cell.bottom, b));
        let within = |x: Option<ParamRange>, outer: Option<ParamRange>| match (x, outer) {
            (None, _) => true,
            (Some(x), Some(o)) => o.lo <= x.lo && x.hi <= o.hi,
            (Some(_), None) => false,
        };
        prop_assert!(within(right, cell.right));
        prop_assert!(within(top, cell.top));
    }

    #[test]
    fn cost_ignores_collinear_breakpoints((p, q) in pair(), delta in 1.0..8.0f64, f in 0.05..0.95f64) {
        if let Some(c) = exact_decide(&p, &q, delta, true).correspondence {
            let pts = c.breakpoints();
            let mut dense = Vec::with_capacity(2 * pts.len());
            for w in pts.windows(2) {
                dense.push(w[0]);
                dense.push((w[0].0 + f * (w[1].0 - w[0].0), w[0].1 + f * (w[1].1 - w[0].1)));
            }
            dense.push(*pts.last().unwrap());
            let denser = Correspondence::new(dense).unwrap();
            let (a, b) = (correspondence_cost(&p, &q, &c).unwrap(), correspondence_cost(&p, &q, &denser).unwrap());
            prop_assert!((a - b).abs() <= 1e-12 * a.max(1.0), "{a} vs {b}");
        }
    }

    #[test]
    fn composition_is_subadditive((p, r) in pair(), seed in any::<u64>()) {
        let q = frechet_core::generate::random_walk(5, p.dim(), seed, 2.0).unwrap();
        let (_, a) = exact_frechet_witness(&p, &r, 1e-9);
        let (_, b) = exact_frechet_witness(&r, &q, 1e-9);
        let composed = compose_correspondences(&a, &b).unwrap();
        prop_assert!(composed.is_monotone() && composed.is_full(p.len(), q.len()));
        let lhs = correspondence_cost(&p, &q, &composed).unwrap();
        let rhs = correspondence_cost(&p, &r, &a).unwrap() + correspondence_cost(&r, &q, &b).unwrap();
        prop_assert!(lhs <= rhs * (1.0 + 1e-9) + 1e-12, "{lhs} > {rhs}");
    }
}

#[test]
fn exact_distance_inside_subdivision_sandwich() {
    for seed in 0..120u64 {
        let d = 1 + (seed as usize) % 3;
        let (p, q, _) = instance(seed, 8, d);
        let h = 1e-3 * diameter(&p, &q).max(1e-9);
        let (lo, hi) = subdivision_bracket(&p, &q, h);
        let fd = exact_frechet(&p, &q, 1e-10);
        let slack = 1e-8 * hi.max(1.0);
        assert!(lo - slack <= fd && fd <= hi + slack, "seed {seed}: {fd} outside [{lo}, {hi}]");
    }
}

#[test]
fn apex_forces_distance_two() {
    let p = chain(&[&[0.0, 0.0], &[2.0, 2.0], &[4.0, 0.0]]);
    let q = chain(&[&[0.0, 0.0], &[4.0, 0.0]]);
    let h = 1e-3;
    let (lo, hi) = subdivision_bracket(&p, &q, h);
    let fd = exact_frechet(&p, &q, 1e-12);
    assert!((fd - 2.0).abs() < 1e-9 && lo <= fd && fd <= hi + 1e-12);
}

#[test]
fn segment_against_a_tent() {
    let a = [0.0, 0.0];
    let b = [4.0, 0.0];
    let q = chain(&[&[0.0, 1.0], &[2.0, 3.0], &[4.0, 1.0]]);
    let full = ParamRange::new(1.0, 3.0);
    assert!(!segment_chain_decide(Segment::new(&a, &b), &q, full, 2.9));
    assert!(segment_chain_decide(Segment::new(&a, &b), &q, full, 3.0));
    let (lo, hi) = subdivision_bracket(&chain(&[&a, &b]), &q, 1e-3);
    assert!(lo <= 3.0 && 3.0 <= hi + 1e-12);
}

#[test]
fn segment_decision_matches_exact_decision() {
    for seed in 0..500u64 {
        let d = 1 + (seed as usize) % 3;
        let (p, q, _) = instance(seed, 7, d);
        let seg = p.edge(2);
        let edge = Chain::new(vec![seg.a.to_vec(), seg.b.to_vec()]).unwrap();
        let (a, b) = (1.0 + (seed % 3) as f64 * 0.25, q.len() as f64 - (seed % 2) as f64 * 0.3);
        let (a, b) = (a.min(b), a.max(b));
        let sub = q.subchain(ParamRange::new(a, b)).chain;
        let delta = exact_frechet(&edge, &sub, 1e-10) * if seed % 2 == 0 { 1.001 } else { 0.999 };
        assert_eq!(
            segment_chain_decide(seg, &q, ParamRange::new(a, b), delta),
            exact_decide(&edge, &sub, delta, false).reachable,
            "seed {seed}"
        );
    }
}
