use frechet_core::geometry::{
    ball_segment_intersection, dist, first_boundary_crossing, within_expanded_box, AxisBox, Chain, ParamRange, Segment,
};
use proptest::prelude::*;

fn point(d: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-10.0..10.0f64, d)
}

fn chain(d: usize, max_len: usize) -> impl Strategy<Value = Chain> {
    prop::collection::vec(point(d), 2..=max_len).prop_filter_map("degenerate chain", |rows| {
        Chain::new(rows).ok().filter(|c| c.len() >= 2)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn ball_segment_matches_sampling((a, b, c) in (1usize..=3).prop_flat_map(|d| (point(d), point(d), point(d))), r in 0.0..8.0f64) {
        let seg = Segment::new(&a, &b);
        let range = ball_segment_intersection(&c, r, seg);
        let slack = 1e-8;
        for k in 0..=100 {
            let u = k as f64 / 100.0;
            let dd = dist(&seg.point_at(u), &c);
            let inside = range.is_some_and(|x| x.lo - 1e-12 <= u && u <= x.hi + 1e-12);
            if dd < r - slack {
                prop_assert!(inside, "u={u} at distance {dd} < {r} but outside {range:?}");
            } else if dd > r + slack {
                prop_assert!(!inside, "u={u} at distance {dd} > {r} but inside {range:?}");
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn point_at_is_lipschitz_within_an_edge(c in chain(3, 8), j in 0usize..8, u in 0.0..1.0f64, v in 0.0..1.0f64) {
        let j = 2 + j % (c.len() - 1);
        let (s, t) = ((j - 1) as f64 + u, (j - 1) as f64 + v);
        let (ps, pt) = (c.point_at(s).unwrap(), c.point_at(t).unwrap());
        prop_assert_eq!(dist(&ps, &ps), 0.0);
        let len = c.edge(j).length();
        prop_assert!(dist(&ps, &pt) <= len * (s - t).abs() + 1e-12);
    }

    #[test]
    fn boundary_crossing_matches_sampling(c in chain(2, 6), side in 1.0..15.0f64, start in 0.0..1.0f64) {
        // a box around the start point so the precondition holds
        let s0 = 1.0 + start * (c.len() - 1) as f64 * 0.5;
        let p0 = c.eval(s0);
        let bx = AxisBox::new(p0.iter().map(|x| x - side * 0.37).collect(), side).unwrap();
        let crossing = first_boundary_crossing(&c, s0, &bx);
        let end = crossing.unwrap_or(c.len() as f64);
        let on_boundary = |s: f64| -> bool {
            let p = c.eval(s);
            bx.distance(&p) <= 1e-9 && bx.lo.iter().zip(&p).any(|(lo, x)| (x - lo).abs() <= 1e-9 || (x - lo - side).abs() <= 1e-9)
        };
        if let Some(s) = crossing {
            prop_assert!(s > s0 && on_boundary(s), "crossing {s} not on the boundary");
        }
        for k in 1..400 {
            let s = s0 + (end - s0) * k as f64 / 400.0;
            if s < end - 1e-9 {
                let p = c.eval(s);
                let strictly_inside = bx.lo.iter().zip(&p).all(|(lo, x)| *x > lo + 1e-9 && *x < lo + side - 1e-9);
                prop_assert!(strictly_inside, "left the box at {s} before {end}");
            }
        }
    }

    #[test]
    fn expanded_box_matches_dense_sampling(c in chain(2, 6), lo in point(2), side in 0.5..8.0f64, margin in 0.0..6.0f64, a in 0.0..1.0f64, b in 0.0..1.0f64) {
        let span = (c.len() - 1) as f64;
        let (a, b) = (1.0 + a.min(b) * span, 1.0 + a.max(b) * span);
        let bx = AxisBox::new(lo, side).unwrap();
        let got = within_expanded_box(&c, ParamRange::new(a, b), &bx, margin);
        let mut worst: f64 = 0.0;
        let first = a.floor() as usize + 1;
        for j in first.max(2)..=c.len() {
            let (lo_s, hi_s) = (a.max((j - 1) as f64), b.min(j as f64));
            if lo_s > hi_s {
                continue;
            }
            for k in 0..=1000 {
                worst = worst.max(bx.distance(&c.eval(lo_s + (hi_s - lo_s) * k as f64 / 1000.0)));
            }
        }
        worst = worst.max(bx.distance(&c.eval(a))).max(bx.distance(&c.eval(b)));
        if worst < margin - 1e-9 {
            prop_assert!(got);
        } else if worst > margin + 1e-9 {
            prop_assert!(!got, "worst sampled distance {worst} exceeds {margin}");
        }
    }
}
