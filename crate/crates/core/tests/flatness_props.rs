mod common;

use std::f64::consts::PI;

use atsp_core::flatness::{alpha_grid, alpha_grid_exhaustive, alpha_width, flat_pairs, FlatnessParams};
use atsp_core::geometry::{dist_point_to_line, distance_unmetered};
use atsp_core::nets::build_ladder;
use atsp_core::{DistanceMeter, Execution, Point};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

fn p(x: f64, y: f64) -> Point {
    Point::new(vec![x, y]).unwrap()
}

/// Points of `B(v, c0 scale)` within `scale / 20` of a random line passing
/// within `scale / 20` of `v` (v itself included).
fn near_collinear(r: &mut ChaCha8Rng, c0: f64, scale: f64) -> (Point, Vec<Point>) {
    let v = p(r.random_range(-1.0..1.0), r.random_range(-1.0..1.0));
    let theta = r.random_range(0.0..PI);
    let (d, n) = ([theta.cos(), theta.sin()], [-theta.sin(), theta.cos()]);
    let delta = r.random_range(-1.0..1.0) * scale / 20.0;
    let anchor = [v.coords()[0] + n[0] * delta, v.coords()[1] + n[1] * delta];
    let mut b = vec![v.clone()];
    let count = r.random_range(3..12);
    while b.len() < count {
        let t = r.random_range(-1.0..1.0) * c0 * scale;
        let u = r.random_range(-1.0..1.0) * scale / 20.0;
        let q = p(anchor[0] + t * d[0] + u * n[0], anchor[1] + t * d[1] + u * n[1]);
        if distance_unmetered(&q, &v).unwrap() < c0 * scale {
            b.push(q);
        }
    }
    (v, b)
}

#[test]
fn grid_flatness_bounded_for_near_collinear_sets() {
    let mut r = common::rng(42);
    for case in 0..50 {
        let c0 = if case % 2 == 0 { 1.0 } else { 2.0 };
        let l = (40.0 * c0) as u32;
        let scale = r.random_range(0.05..2.0);
        let (v, b) = near_collinear(&mut r, c0, scale);
        let grid = alpha_grid(&v, &b, scale, &FlatnessParams::grid(c0, l)).unwrap();
        let width = alpha_width(&v, &b, scale).unwrap();
        assert!(grid.alpha <= 1.0 / 16.0, "case {case}: {}", grid.alpha);
        assert!(width.alpha <= grid.alpha + 1e-12, "case {case}: {} > {}", width.alpha, grid.alpha);
        assert!(width.alpha <= 1.0 / 20.0 + 1e-12);
    }
}

#[test]
fn width_never_above_grid_on_random_sets() {
    let mut r = common::rng(7);
    for case in 0..200 {
        let (c0, l) = [(1.0, 3), (2.0, 4), (1.0, 6)][case % 3];
        let scale = r.random_range(0.2..2.0);
        let v = p(0.0, 0.0);
        let mut b = vec![v.clone()];
        for _ in 0..r.random_range(1..8) {
            let rad = r.random_range(0.0..c0 * scale);
            let a = r.random_range(0.0..2.0 * PI);
            b.push(p(rad * a.cos(), rad * a.sin()));
        }
        let grid = alpha_grid_exhaustive(&v, &b, scale, c0, l, u64::MAX).unwrap();
        let planar = alpha_grid(&v, &b, scale, &FlatnessParams::grid(c0, l)).unwrap();
        assert_eq!(planar, grid, "case {case}");
        let width = alpha_width(&v, &b, scale).unwrap();
        assert!(width.alpha <= grid.alpha + 1e-12, "case {case}");
    }
}

#[test]
fn points_lie_within_alpha_of_the_line() {
    let mut r = common::rng(9);
    for case in 0..100 {
        let scale = r.random_range(0.1..3.0);
        let dim = 2 + case % 2;
        let v = Point::new(vec![0.0; dim]).unwrap();
        let b: Vec<Point> = (0..r.random_range(1..10))
            .map(|_| Point::new((0..dim).map(|_| r.random_range(-1.0..1.0) * scale).collect()).unwrap())
            .collect();
        let mut results = vec![alpha_width(&v, &b, scale).unwrap()];
        if dim == 2 {
            results.push(alpha_grid(&v, &b, scale, &FlatnessParams::grid(1.0, 5)).unwrap());
        } else {
            results.push(alpha_grid_exhaustive(&v, &b, scale, 1.0, 2, u64::MAX).unwrap());
        }
        for res in results {
            for z in &b {
                let d = dist_point_to_line(z, &res.line).unwrap();
                assert!(d <= res.alpha * scale + 1e-9 * scale, "case {case}");
            }
        }
    }
}

#[test]
fn grid_is_deterministic_across_execution_modes() {
    let mut r = common::rng(11);
    for _ in 0..20 {
        let (v, b) = near_collinear(&mut r, 1.0, 1.0);
        let seq = FlatnessParams { execution: Execution::Sequential, ..FlatnessParams::grid(1.0, 40) };
        let par = FlatnessParams { execution: Execution::Parallel, ..FlatnessParams::grid(1.0, 40) };
        assert_eq!(alpha_grid(&v, &b, 1.0, &seq).unwrap(), alpha_grid(&v, &b, 1.0, &par).unwrap());
    }
}

#[test]
fn flat_pairs_respect_annulus() {
    for seed in 0..20 {
        let mut r = common::rng(seed);
        let rows: Vec<Vec<f64>> = (0..60)
            .map(|_| {
                let t: f64 = r.random();
                vec![t, 0.2 * t + 1e-3 * r.random::<f64>()]
            })
            .collect();
        let cloud = common::cloud(&rows);
        let ladder = build_ladder(&cloud, &mut DistanceMeter::new()).unwrap();
        let params = FlatnessParams { c0: 8.0, ..Default::default() };
        for w in ladder.levels.windows(2) {
            let (x, xp) = (&w[0], &w[1]);
            let eps = x.scale(cloud.r0());
            let k = xp.exponent - x.exponent;
            for &v in &x.net {
                let pairs = flat_pairs(&cloud, v, &x.net, &xp.net, eps, k, &params, &mut DistanceMeter::new()).unwrap();
                assert!(pairs.len() <= 2);
                let outer = params.c0 * eps * 0.5f64.powi(k as i32 + 1);
                for fp in pairs {
                    let d = distance_unmetered(cloud.point(fp.0), cloud.point(fp.1)).unwrap();
                    assert!(eps <= d && d < outer);
                    assert!(fp.0 == v || fp.1 == v);
                }
            }
        }
    }
}
