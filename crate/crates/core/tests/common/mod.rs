#![allow(dead_code)]

use atsp_core::PointCloud;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn uniform_rows(rng: &mut ChaCha8Rng, n: usize, dim: usize) -> Vec<Vec<f64>> {
    (0..n).map(|_| (0..dim).map(|_| rng.random::<f64>()).collect()).collect()
}

pub fn cloud(rows: &[Vec<f64>]) -> PointCloud {
    PointCloud::from_rows(rows).unwrap()
}

/// `{0, 1, 1/2, ..., 2^(2-n)}` with 0 first.
pub fn dyadic_family(n: usize) -> PointCloud {
    let mut rows = vec![vec![0.0]];
    let mut x = 1.0;
    for _ in 1..n {
        rows.push(vec![x]);
        x *= 0.5;
    }
    cloud(&rows)
}

/// Random cloud from a mix of shapes: uniform, curve, near-line and clusters.
pub fn mixed_cloud(seed: u64) -> PointCloud {
    let mut r = rng(seed);
    let dim = 1 + (seed % 3) as usize;
    let n = r.random_range(2..=120);
    let rows: Vec<Vec<f64>> = match (seed / 3) % 4 {
        0 => uniform_rows(&mut r, n, dim),
        1 => (0..n)
            .map(|_| {
                let t: f64 = r.random();
                vec![t, 0.3 * (3.0 * t).sin() + 1e-3 * r.random::<f64>()]
            })
            .collect(),
        2 => (0..n)
            .map(|_| {
                let t: f64 = r.random();
                vec![t, 0.5 * t + 1e-4 * r.random::<f64>()]
            })
            .collect(),
        _ => (0..n)
            .map(|i| {
                let c = (i % 3) as f64 * 10.0;
                (0..dim).map(|_| c + r.random::<f64>() * 0.1).collect()
            })
            .collect(),
    };
    cloud(&rows)
}
