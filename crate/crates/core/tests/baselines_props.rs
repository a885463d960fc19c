mod common;

use atsp_core::baselines::{cycle_length, mst_length, nearest_insertion_tour, optimal_cycle_length, BaselineReport};
use rand::Rng;

#[test]
fn insertion_and_mst_bracket_the_optimum() {
    for seed in 0..20 {
        let mut r = common::rng(seed);
        for n in 1..=9 {
            let dim = r.random_range(1..=3);
            let cloud = common::cloud(&common::uniform_rows(&mut r, n, dim));
            let opt = optimal_cycle_length(&cloud).unwrap();
            let (cycle, ni) = nearest_insertion_tour(&cloud, 0).unwrap();
            let mst = mst_length(&cloud);
            assert_eq!(cycle.len(), n);
            assert_eq!(ni, cycle_length(&cloud, &cycle));
            assert!(mst <= opt + 1e-12, "seed {seed} n {n}");
            assert!(opt <= ni + 1e-12);
            assert!(ni <= 2.0 * opt + 1e-12);
        }
    }
}

#[test]
fn report_ratios() {
    let cloud = common::cloud(&[vec![0.0, 0.0], vec![1.0, 0.0], vec![1.0, 1.0], vec![0.0, 1.0]]);
    let rep = BaselineReport::compute(&cloud, 6.0);
    assert_eq!(rep.mst_length, 3.0);
    assert_eq!(rep.optimal_cycle_length, Some(4.0));
    assert_eq!(rep.atsp_over_mst(), Some(2.0));
    assert_eq!(rep.atsp_over_optimal(), Some(1.5));
    assert_eq!(rep.insertion_over_optimal(), Some(1.0));
}
