use atsp_core::geometry::{ball_query, hausdorff_distance, Ball};
use atsp_core::Point;
use proptest::prelude::*;

fn point_set(dim: usize, max: usize) -> impl Strategy<Value = Vec<Point>> {
    prop::collection::vec(prop::collection::vec(-10.0f64..10.0, dim), 1..max)
        .prop_map(|rows| rows.into_iter().map(|r| Point::new(r).unwrap()).collect())
}

/// Independent directed sup-inf, written with explicit indices.
fn directed(a: &[Point], b: &[Point]) -> f64 {
    let mut worst = 0.0f64;
    for i in 0..a.len() {
        let mut best = f64::INFINITY;
        for j in 0..b.len() {
            let mut sq = 0.0;
            for k in 0..a[i].dim() {
                let d = a[i].coords()[k] - b[j].coords()[k];
                sq += d * d;
            }
            best = best.min(sq.sqrt());
        }
        worst = worst.max(best);
    }
    worst
}

proptest! {
    #[test]
    fn hausdorff_matches_double_loop(a in point_set(2, 12), b in point_set(2, 12)) {
        let h = hausdorff_distance(&a, &b).unwrap();
        prop_assert_eq!(h, directed(&a, &b).max(directed(&b, &a)));
    }

    #[test]
    fn hausdorff_is_a_metric(a in point_set(3, 8), b in point_set(3, 8), c in point_set(3, 8)) {
        let ab = hausdorff_distance(&a, &b).unwrap();
        prop_assert_eq!(ab, hausdorff_distance(&b, &a).unwrap());
        prop_assert_eq!(hausdorff_distance(&a, &a).unwrap(), 0.0);
        let ac = hausdorff_distance(&a, &c).unwrap();
        let cb = hausdorff_distance(&c, &b).unwrap();
        prop_assert!(ab <= ac + cb + 1e-12);
    }

    #[test]
    fn ball_query_is_a_filter(set in point_set(2, 30), r in 0.0f64..15.0, closed in any::<bool>()) {
        let center = set[0].clone();
        let ball = if closed { Ball::Closed } else { Ball::Open };
        let got = ball_query(&set, &center, r, ball).unwrap();
        let want: Vec<usize> = (0..set.len())
            .filter(|&i| {
                let d = directed(std::slice::from_ref(&center), std::slice::from_ref(&set[i]));
                if closed { d <= r } else { d < r }
            })
            .collect();
        prop_assert_eq!(got, want);
    }
}

#[test]
fn hausdorff_rejects_empty_sets() {
    let a = vec![Point::new(vec![0.0]).unwrap()];
    assert!(hausdorff_distance(&a, &[]).is_err());
}
