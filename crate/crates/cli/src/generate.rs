//! Seeded instance generators.

use atsp_core::PointCloud;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GenerateError {
    #[error("sharpness family needs n >= 8 and a multiple of 4, got {0}")]
    SharpnessSize(usize),
    #[error("need at least one point in at least one dimension")]
    Empty,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    Sharpness,
    Uniform { dim: usize },
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::Sharpness => "sharpness",
            Family::Uniform { .. } => "uniform",
        }
    }

    pub fn generate(self, n: usize, seed: u64) -> Result<PointCloud, GenerateError> {
        match self {
            Family::Sharpness => sharpness(n),
            Family::Uniform { dim } => uniform(n, dim, seed),
        }
    }
}

/// `{0, 1, 1/2, ..., 2^(2-n)}` on the line, 0 first: every net refinement
/// adds a single point, which makes the refinement work cubic in `n`.
pub fn sharpness(n: usize) -> Result<PointCloud, GenerateError> {
    if n < 8 || !n.is_multiple_of(4) {
        return Err(GenerateError::SharpnessSize(n));
    }
    let mut rows = vec![vec![0.0]];
    let mut x = 1.0;
    for _ in 1..n {
        rows.push(vec![x]);
        x *= 0.5;
    }
    Ok(PointCloud::from_rows(&rows).expect("finite distinct points"))
}

/// `n` points uniform in `[0,1)^dim`.
pub fn uniform(n: usize, dim: usize, seed: u64) -> Result<PointCloud, GenerateError> {
    if n == 0 || dim == 0 {
        return Err(GenerateError::Empty);
    }
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    let rows: Vec<Vec<f64>> = (0..n).map(|_| (0..dim).map(|_| r.random::<f64>()).collect()).collect();
    Ok(PointCloud::from_rows(&rows).expect("finite points"))
}

/// Member `seed` of the random test suite: dimension `1 + seed % 3`, at most
/// 200 points, drawn uniformly, along a curve, near a line or in clusters.
pub fn suite_cloud(seed: u64) -> PointCloud {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    let dim = 1 + (seed % 3) as usize;
    let n = r.random_range(2..=200);
    let rows: Vec<Vec<f64>> = match (seed / 3) % 4 {
        0 => (0..n).map(|_| (0..dim).map(|_| r.random::<f64>()).collect()).collect(),
        1 => (0..n)
            .map(|_| {
                let t: f64 = r.random();
                let mut p = vec![t, 0.3 * (3.0 * t).sin(), 0.2 * (5.0 * t).cos()];
                p.truncate(dim);
                p.iter_mut().for_each(|c| *c += 1e-3 * r.random::<f64>());
                p
            })
            .collect(),
        2 => (0..n)
            .map(|_| {
                let t: f64 = r.random();
                (0..dim).map(|a| t * (1.0 - 0.3 * a as f64) + 1e-4 * r.random::<f64>()).collect()
            })
            .collect(),
        _ => (0..n)
            .map(|i| {
                let c = (i % 3) as f64 * 10.0;
                (0..dim).map(|_| c + 0.1 * r.random::<f64>()).collect()
            })
            .collect(),
    };
    PointCloud::from_rows(&rows).expect("finite points")
}
