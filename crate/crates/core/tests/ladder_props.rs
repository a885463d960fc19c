mod common;

use atsp_core::geometry::{hausdorff_distance, is_maximal_net};
use atsp_core::nets::{build_ladder, dyadic_scale};
use atsp_core::{DistanceMeter, Phase, Point, PointCloud};
use proptest::prelude::*;

fn subset(cloud: &PointCloud, idx: &[usize]) -> Vec<Point> {
    idx.iter().map(|&i| cloud.point(i).clone()).collect()
}

fn check_ladder(cloud: &PointCloud) -> Result<(), TestCaseError> {
    let ladder = build_ladder(cloud, &mut DistanceMeter::new()).unwrap();
    let all: Vec<Point> = cloud.points().to_vec();
    prop_assert!(ladder.last().is_complete());
    for lvl in &ladder.levels {
        let mut seen: Vec<usize> = lvl.net.iter().chain(&lvl.residual).copied().collect();
        seen.sort_unstable();
        prop_assert_eq!(seen, (0..cloud.len()).collect::<Vec<_>>());
        if cloud.r0() > 0.0 {
            let eps = dyadic_scale(cloud.r0(), lvl.exponent);
            prop_assert!(is_maximal_net(&subset(cloud, &lvl.net), &all, eps).unwrap());
        }
    }
    for w in ladder.levels.windows(2) {
        prop_assert!(w[1].exponent > w[0].exponent);
        prop_assert!(w[1].net.starts_with(&w[0].net));
        prop_assert!(w[1].net.len() > w[0].net.len());
        let h = hausdorff_distance(&subset(cloud, &w[0].net), &subset(cloud, &w[1].net)).unwrap();
        let s = dyadic_scale(cloud.r0(), w[1].exponent);
        prop_assert!(s <= h && h < 2.0 * s, "s = {s}, dist_H = {h}");
    }
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]
    #[test]
    fn ladders_are_nested_maximal_nets(rows in prop::collection::vec(prop::collection::vec(-5.0f64..5.0, 2), 1..60)) {
        let (cloud, _) = PointCloud::from_points(rows.into_iter().map(|r| Point::new(r).unwrap()).collect()).unwrap();
        check_ladder(&cloud)?;
    }
}

#[test]
fn mixed_clouds_satisfy_sandwich() {
    for seed in 0..30 {
        check_ladder(&common::mixed_cloud(seed)).unwrap();
    }
}

#[test]
fn dyadic_family_meter_is_cubic() {
    for n in [8usize, 16, 32, 64, 128] {
        let cloud = common::dyadic_family(n);
        let mut m = DistanceMeter::new();
        let ladder = build_ladder(&cloud, &mut m).unwrap();
        assert_eq!(ladder.len(), n);
        let sum: u64 = (1..n as u64).map(|i| i * (n as u64 - i)).sum();
        assert!(m.count(Phase::NetRefinement) >= sum);
        assert!(m.count(Phase::NetRefinement) as f64 >= (n as f64).powi(3) / 32.0);
    }
}
