mod common;

use common::{instance, par_map};
use frechet_core::freespace::{compose_correspondences, correspondence_cost, exact_frechet, exact_frechet_witness};
use frechet_core::geometry::{dist, Chain};
use frechet_core::optimize::{
    approx_frechet_report, candidate_distances, nu_simplify, simplification_correspondence, Branch,
};
use proptest::prelude::*;

fn chain(max_len: usize) -> impl Strategy<Value = Chain> {
    (1usize..=3).prop_flat_map(move |d| {
        prop::collection::vec(prop::collection::vec(-5.0..5.0f64, d), 1..=max_len)
            .prop_filter_map("degenerate", |rows| Chain::new(rows).ok())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn simplified_edges_are_long(r in chain(30), nu in 0.05..4.0f64) {
        let res = nu_simplify(&r, nu);
        prop_assert_eq!(res.marks[0], 1);
        prop_assert!(res.marks.windows(2).all(|w| w[0] < w[1]));
        for k in 2..=res.simplified.len() {
            let e = res.simplified.edge(k);
            prop_assert!(dist(e.a, e.b) >= nu);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn candidates_bracket_every_vertex_pair(p in chain(12), q in chain(12)) {
        prop_assume!(p.dim() == q.dim());
        let z = candidate_distances(&p, &q).values;
        prop_assert!(z.windows(2).all(|w| w[0] < w[1]));
        let pts: Vec<&[f64]> = p.vertices().chain(q.vertices()).collect();
        for a in &pts {
            for b in &pts {
                let x = dist(a, b);
                if x > 0.0 {
                    // some candidate within the dedup tolerance of x, so x <= z' <= 2 z
                    let near = z.iter().any(|c| (c - x).abs() <= 1e-12 * x.max(*c) * 2.0);
                    prop_assert!(near, "pair distance {x} missing");
                }
            }
        }
    }
}

#[test]
fn simplification_is_within_nu() {
    for seed in 0..200u64 {
        let d = 1 + (seed as usize) % 3;
        let (r, _, _) = instance(seed, 8, d);
        let nu = 0.2 + (seed % 7) as f64 * 0.3;
        let res = nu_simplify(&r, nu);
        let corr = simplification_correspondence(&r, &res).unwrap();
        assert!(corr.is_full(r.len(), res.simplified.len()));
        let cost = correspondence_cost(&r, &res.simplified, &corr).unwrap();
        assert!(cost <= nu * (1.0 + 1e-9), "seed {seed}: witness cost {cost} > {nu}");
        let fd = exact_frechet(&r, &res.simplified, 1e-10);
        assert!(fd <= nu * (1.0 + 1e-9), "seed {seed}: {fd} > {nu}");

        // composing with an exact correspondence adds at most nu
        let (_, other, _) = instance(seed + 10_000, 8, d);
        let (_, exact) = exact_frechet_witness(&res.simplified, &other, 1e-10);
        let c = correspondence_cost(&res.simplified, &other, &exact).unwrap();
        let lifted = compose_correspondences(&corr, &exact).unwrap();
        let lc = correspondence_cost(&r, &other, &lifted).unwrap();
        assert!(lc <= (c + nu) * (1.0 + 1e-9), "seed {seed}: {lc} > {c} + {nu}");
    }
}

#[test]
fn parallel_segments_regression() {
    let p = Chain::new(vec![vec![0.0, 0.0], vec![4.0, 0.0]]).unwrap();
    let q = Chain::new(vec![vec![0.0, 1.0], vec![4.0, 1.0]]).unwrap();
    let r = approx_frechet_report(&p, &q, 2.0, 1.0).unwrap();
    assert!(1.0 <= r.value && r.value <= 2.0 * 2f64.sqrt() * 4.0);
    // measured baseline: the diagonal correspondence is found
    assert!((r.value - 1.0).abs() < 1e-12, "{}", r.value);
}

#[test]
fn gap_in_candidates_takes_the_simplification_branch() {
    let p = Chain::new(vec![vec![0.0, 0.0], vec![0.01, 0.0], vec![1000.0, 0.0]]).unwrap();
    let q = Chain::new(vec![vec![0.0, 0.0], vec![500.0, 30.0], vec![1000.0, 0.0]]).unwrap();
    let fd = exact_frechet(&p, &q, 1e-12);
    assert!((fd - 30.0).abs() < 1e-6);
    let r = approx_frechet_report(&p, &q, 3f64.sqrt(), 1.0).unwrap();
    assert_eq!(r.branch, Branch::Simplified);
    assert_eq!(r.long_edges, Some(true));
    assert!(r.value >= fd * (1.0 - 1e-9));
    assert!(r.value <= 2.0 * 2f64.sqrt() * (3f64.sqrt() + 2.0) * fd);
    let again = correspondence_cost(&p, &q, &r.correspondence).unwrap();
    assert!((again - r.value).abs() <= 1e-9 * r.value);
}

#[test]
fn reported_value_is_the_measured_cost() {
    let seeds: Vec<u64> = (0..120).collect();
    let bad = par_map(&seeds, |&seed| {
        let d = 1 + (seed as usize) % 3;
        let (p, q, _) = instance(seed, 25, d);
        let fd = exact_frechet(&p, &q, 1e-10);
        let alpha = p.len().max(q.len()) as f64;
        let r = approx_frechet_report(&p, &q, alpha, 0.5).unwrap();
        let again = correspondence_cost(&p, &q, &r.correspondence).unwrap();
        let consistent = (again - r.value).abs() <= 1e-9 * r.value.max(1e-300);
        let above = r.value >= fd * (1.0 - 1e-9) - 1e-12;
        (!consistent || !above).then(|| format!("seed {seed}: value {} cost {again} fd {fd}", r.value))
    });
    let bad: Vec<String> = bad.into_iter().flatten().collect();
    assert!(bad.is_empty(), "{bad:#?}");
}
