//! Reference tours and lower bounds: minimum spanning tree, nearest insertion
//! and an exact optimal cycle for tiny inputs.

use thiserror::Error;

use crate::geometry::{euclid, PointCloud};

/// Largest instance the exact cycle oracle accepts.
pub const OPTIMAL_LIMIT: usize = 10;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BaselineError {
    #[error("exact cycle search is limited to {OPTIMAL_LIMIT} points, got {0}")]
    TooLarge(usize),
    #[error("start index {0} out of range")]
    BadStart(usize),
}

fn dist_matrix(cloud: &PointCloud) -> Vec<Vec<f64>> {
    let n = cloud.len();
    (0..n).map(|i| (0..n).map(|j| euclid(cloud.coords(i), cloud.coords(j))).collect()).collect()
}

/// Euclidean minimum spanning tree length (dense Prim).
pub fn mst_length(cloud: &PointCloud) -> f64 {
    let n = cloud.len();
    if n <= 1 {
        return 0.0;
    }
    let mut in_tree = vec![false; n];
    let mut best = vec![f64::INFINITY; n];
    best[0] = 0.0;
    let mut total = 0.0;
    for _ in 0..n {
        let u = (0..n)
            .filter(|&i| !in_tree[i])
            .min_by(|&a, &b| best[a].total_cmp(&best[b]))
            .expect("a vertex remains");
        in_tree[u] = true;
        total += best[u];
        let cu = cloud.coords(u);
        for v in 0..n {
            if !in_tree[v] {
                best[v] = best[v].min(euclid(cu, cloud.coords(v)));
            }
        }
    }
    total
}

/// Length of the closed cycle visiting `order`.
pub fn cycle_length(cloud: &PointCloud, order: &[usize]) -> f64 {
    if order.len() < 2 {
        return 0.0;
    }
    let n = order.len();
    (0..n).map(|i| euclid(cloud.coords(order[i]), cloud.coords(order[(i + 1) % n]))).fold(0.0, |a, d| a + d)
}

/// Nearest insertion from `start`; ties go to the smaller index and the
/// earlier insertion position.
pub fn nearest_insertion_tour(cloud: &PointCloud, start: usize) -> Result<(Vec<usize>, f64), BaselineError> {
    let n = cloud.len();
    if start >= n {
        return Err(BaselineError::BadStart(start));
    }
    let d = dist_matrix(cloud);
    let mut cycle = vec![start];
    let mut in_cycle = vec![false; n];
    in_cycle[start] = true;
    // distance from each outside point to the cycle
    let mut near: Vec<f64> = d[start].clone();
    for _ in 1..n {
        let k = (0..n)
            .filter(|&i| !in_cycle[i])
            .min_by(|&a, &b| near[a].total_cmp(&near[b]).then(a.cmp(&b)))
            .expect("a point remains");
        let m = cycle.len();
        let mut pos = 1;
        if m >= 2 {
            let mut best = f64::INFINITY;
            for i in 0..m {
                let (a, b) = (cycle[i], cycle[(i + 1) % m]);
                let delta = d[a][k] + d[k][b] - d[a][b];
                if delta < best {
                    best = delta;
                    pos = i + 1;
                }
            }
        }
        cycle.insert(pos, k);
        in_cycle[k] = true;
        for i in 0..n {
            near[i] = near[i].min(d[k][i]);
        }
    }
    let len = cycle_length(cloud, &cycle);
    Ok((cycle, len))
}

/// Exact shortest closed tour: permutations below 8 points, Held-Karp up to 10.
pub fn optimal_cycle_length(cloud: &PointCloud) -> Result<f64, BaselineError> {
    let n = cloud.len();
    if n > OPTIMAL_LIMIT {
        return Err(BaselineError::TooLarge(n));
    }
    if n <= 1 {
        return Ok(0.0);
    }
    let d = dist_matrix(cloud);
    Ok(if n < 8 { by_permutation(&d) } else { held_karp(&d) })
}

fn by_permutation(d: &[Vec<f64>]) -> f64 {
    let n = d.len();
    let mut rest: Vec<usize> = (1..n).collect();
    let mut best = f64::INFINITY;
    permute(&mut rest, 0, &mut |p| {
        let mut len = d[0][p[0]] + d[p[p.len() - 1]][0];
        for w in p.windows(2) {
            len += d[w[0]][w[1]];
        }
        best = best.min(len);
    });
    best
}

fn permute(items: &mut [usize], k: usize, visit: &mut impl FnMut(&[usize])) {
    if k == items.len() {
        visit(items);
        return;
    }
    for i in k..items.len() {
        items.swap(k, i);
        permute(items, k + 1, visit);
        items.swap(k, i);
    }
}

fn held_karp(d: &[Vec<f64>]) -> f64 {
    let n = d.len();
    let m = n - 1;
    let full = 1usize << m;
    // dp[mask][j]: shortest path from 0 through `mask`, ending at j+1
    let mut dp = vec![f64::INFINITY; full * m];
    for j in 0..m {
        dp[(1 << j) * m + j] = d[0][j + 1];
    }
    for mask in 1..full {
        for j in 0..m {
            let cur = dp[mask * m + j];
            if mask & (1 << j) == 0 || !cur.is_finite() {
                continue;
            }
            for t in 0..m {
                if mask & (1 << t) == 0 {
                    let next = (mask | (1 << t)) * m + t;
                    dp[next] = dp[next].min(cur + d[j + 1][t + 1]);
                }
            }
        }
    }
    (0..m).map(|j| dp[(full - 1) * m + j] + d[j + 1][0]).fold(f64::INFINITY, f64::min)
}

/// Hamiltonian cycle from a closed walk by keeping first visits only. Not part
/// of the multiscale construction; provided for comparison.
pub fn shortcut(walk: &[usize]) -> Vec<usize> {
    let mut seen = std::collections::HashSet::new();
    walk.iter().copied().filter(|v| seen.insert(*v)).collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct BaselineReport {
    pub mst_length: f64,
    pub nearest_insertion_length: f64,
    /// Present for at most [`OPTIMAL_LIMIT`] points.
    pub optimal_cycle_length: Option<f64>,
    pub atsp_tour_length: f64,
}

impl BaselineReport {
    pub fn compute(cloud: &PointCloud, atsp_tour_length: f64) -> Self {
        let (_, ni) = nearest_insertion_tour(cloud, 0).expect("cloud is nonempty");
        BaselineReport {
            mst_length: mst_length(cloud),
            nearest_insertion_length: ni,
            optimal_cycle_length: optimal_cycle_length(cloud).ok(),
            atsp_tour_length,
        }
    }

    fn ratio(a: f64, b: f64) -> Option<f64> {
        (b > 0.0).then(|| a / b)
    }

    pub fn atsp_over_mst(&self) -> Option<f64> {
        Self::ratio(self.atsp_tour_length, self.mst_length)
    }

    pub fn atsp_over_optimal(&self) -> Option<f64> {
        self.optimal_cycle_length.and_then(|o| Self::ratio(self.atsp_tour_length, o))
    }

    pub fn insertion_over_optimal(&self) -> Option<f64> {
        self.optimal_cycle_length.and_then(|o| Self::ratio(self.nearest_insertion_length, o))
    }
}
