//! Flatness numbers around a vertex, their minimising lines, and flat pairs.
//!
//! `alpha` is the normalised half-thickness of the thinnest cylinder around
//! the neighbourhood `B(v, c0·scale) ∩ X'`. Two backends compute it:
//! `Grid` restricts lines to pairs of lattice points around `v`; `Width`
//! minimises over all lines (exactly for N = 2). `Width` is never larger.

mod frame;
mod grid;
mod width;

use thiserror::Error;

pub use frame::{orient, OrientedFrame};

use crate::exec::Execution;
use crate::geometry::{ball_indices, Ball, DistanceMeter, Line, Phase, Point, PointCloud};

pub(crate) use frame::orient_coords;

/// Default grid work budget (lattice pair evaluations).
pub const DEFAULT_GRID_BUDGET: u64 = 200_000_000;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FlatnessError {
    #[error("grid flatness needs ~{work} evaluations, above the budget of {budget}; use the width backend")]
    GridTooLarge { work: u64, budget: u64 },
    #[error("empty neighbourhood")]
    EmptyNeighbourhood,
    #[error("scale must be positive, got {0}")]
    BadScale(f64),
    #[error("vertex {0} is not a member of the net")]
    NotInNet(usize),
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum Backend {
    Grid,
    #[default]
    Width,
}

impl Backend {
    pub fn name(self) -> &'static str {
        match self {
            Backend::Grid => "grid",
            Backend::Width => "width",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct FlatnessParams {
    pub c0: f64,
    /// Grid half-resolution `L`; `None` picks `ceil(40 c0 sqrt(N-1))`.
    pub grid_l: Option<u32>,
    pub backend: Backend,
    pub threshold: f64,
    pub grid_budget: u64,
    pub execution: Execution,
}

impl Default for FlatnessParams {
    fn default() -> Self {
        FlatnessParams {
            c0: 300.0,
            grid_l: None,
            backend: Backend::Width,
            threshold: 1.0 / 16.0,
            grid_budget: DEFAULT_GRID_BUDGET,
            execution: Execution::default(),
        }
    }
}

impl FlatnessParams {
    pub fn grid(c0: f64, l: u32) -> Self {
        FlatnessParams { c0, grid_l: Some(l), backend: Backend::Grid, ..Default::default() }
    }

    /// Smallest `L` satisfying `L >= 40 c0 sqrt(N-1)`.
    pub fn faithful_grid_l(&self, dim: usize) -> u32 {
        let need = 40.0 * self.c0 * ((dim.max(1) - 1) as f64).sqrt();
        (need.ceil() as u32).max(1)
    }

    pub fn effective_grid_l(&self, dim: usize) -> u32 {
        self.grid_l.unwrap_or_else(|| self.faithful_grid_l(dim))
    }

    /// A warning when the grid resolution is coarser than the faithful profile.
    pub fn profile_warning(&self, dim: usize) -> Option<String> {
        if self.backend != Backend::Grid || dim < 2 {
            return None;
        }
        let (l, need) = (self.effective_grid_l(dim), self.faithful_grid_l(dim));
        (l < need).then(|| format!("grid L = {l} is below 40·c0·sqrt(N-1) = {need}; flatness comparison bounds do not apply"))
    }

    /// Flat iff `alpha <= threshold`.
    pub fn is_flat(&self, alpha: f64) -> bool {
        alpha <= self.threshold
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct FlatnessResult {
    /// Normalised by `scale`.
    pub alpha: f64,
    pub line: Line,
    /// Indices of the neighbourhood, in the caller's index space.
    pub neighborhood: Vec<usize>,
    pub scale: f64,
}

/// Unordered pair of cloud indices, stored ascending.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FlatPair(pub usize, pub usize);

impl FlatPair {
    pub fn new(a: usize, b: usize) -> Self {
        debug_assert_ne!(a, b);
        if a < b {
            FlatPair(a, b)
        } else {
            FlatPair(b, a)
        }
    }
}

/// Open-ball neighbourhood `B(v, c0·scale) ∩ x_prime`, as indices into `x_prime`.
pub fn neighborhood(v: &Point, x_prime: &[Point], scale: f64, c0: f64, meter: &mut DistanceMeter) -> Vec<usize> {
    let radius = c0 * scale;
    meter.with_phase(Phase::Flatness, |meter| {
        x_prime
            .iter()
            .enumerate()
            .filter(|(_, p)| Ball::Open.contains(meter.measure(v.coords(), p.coords()), radius))
            .map(|(i, _)| i)
            .collect()
    })
}

fn fit(v: &[f64], b: &[&[f64]], scale: f64, params: &FlatnessParams) -> Result<(f64, Line), FlatnessError> {
    if b.is_empty() {
        return Err(FlatnessError::EmptyNeighbourhood);
    }
    if !(scale > 0.0) {
        return Err(FlatnessError::BadScale(scale));
    }
    match params.backend {
        Backend::Width => {
            let (d, line) = width::width_fit(v, b);
            Ok((d / scale, line))
        }
        Backend::Grid => {
            let dim = v.len();
            if dim == 1 {
                return Ok((0.0, Line::axis(v)));
            }
            let l = params.effective_grid_l(dim);
            let g = if dim == 2 {
                grid::fit_planar(v, b, scale, params.c0, l, params.grid_budget, params.execution)?
            } else {
                grid::fit_brute(v, b, scale, params.c0, l, params.grid_budget)?
            };
            Ok((g.alpha, g.line(v, scale, params.c0, l)))
        }
    }
}

/// Grid-backend flatness of `b` around `v`.
pub fn alpha_grid(v: &Point, b: &[Point], scale: f64, params: &FlatnessParams) -> Result<FlatnessResult, FlatnessError> {
    let params = FlatnessParams { backend: Backend::Grid, ..params.clone() };
    let refs: Vec<&[f64]> = b.iter().map(Point::coords).collect();
    let (alpha, line) = fit(v.coords(), &refs, scale, &params)?;
    Ok(FlatnessResult { alpha, line, neighborhood: (0..b.len()).collect(), scale })
}

/// Exhaustive grid search over every lattice pair; any dimension, small `L`.
pub fn alpha_grid_exhaustive(
    v: &Point,
    b: &[Point],
    scale: f64,
    c0: f64,
    l: u32,
    budget: u64,
) -> Result<FlatnessResult, FlatnessError> {
    if b.is_empty() {
        return Err(FlatnessError::EmptyNeighbourhood);
    }
    let refs: Vec<&[f64]> = b.iter().map(Point::coords).collect();
    let g = grid::fit_brute(v.coords(), &refs, scale, c0, l, budget)?;
    Ok(FlatnessResult { alpha: g.alpha, line: g.line(v.coords(), scale, c0, l), neighborhood: (0..b.len()).collect(), scale })
}

/// Width-backend flatness of `b` around `v`.
pub fn alpha_width(v: &Point, b: &[Point], scale: f64) -> Result<FlatnessResult, FlatnessError> {
    let refs: Vec<&[f64]> = b.iter().map(Point::coords).collect();
    let (alpha, line) = fit(v.coords(), &refs, scale, &FlatnessParams::default())?;
    Ok(FlatnessResult { alpha, line, neighborhood: (0..b.len()).collect(), scale })
}

/// Neighbourhood query over cloud indices followed by the configured fit.
/// The returned neighbourhood holds cloud indices.
pub fn flatness_at(
    cloud: &PointCloud,
    v: usize,
    x_prime: &[usize],
    scale: f64,
    params: &FlatnessParams,
    meter: &mut DistanceMeter,
) -> Result<FlatnessResult, FlatnessError> {
    let mut hood = meter.with_phase(Phase::Flatness, |m| {
        ball_indices(cloud, x_prime, v, params.c0 * scale, Ball::Open, m)
    });
    hood.sort_unstable();
    let refs: Vec<&[f64]> = hood.iter().map(|&i| cloud.coords(i)).collect();
    let (alpha, line) = fit(cloud.coords(v), &refs, scale, params)?;
    Ok(FlatnessResult { alpha, line, neighborhood: hood, scale })
}

/// Flat pairs `{v, v'}` with `v' ∈ X`: the nearest `X`-points on either side
/// of `v` along the minimising line of `B(v, c0 2^-k eps) ∩ X'`, restricted to
/// `eps <= |v - v'| < c0 2^(-k-1) eps`.
#[allow(clippy::too_many_arguments)]
pub fn flat_pairs(
    cloud: &PointCloud,
    v: usize,
    x: &[usize],
    x_prime: &[usize],
    eps: f64,
    k: u32,
    params: &FlatnessParams,
    meter: &mut DistanceMeter,
) -> Result<Vec<FlatPair>, FlatnessError> {
    Ok(flat_pairs_detailed(cloud, v, x, x_prime, eps, k, params, meter)?.0)
}

#[allow(clippy::too_many_arguments)]
pub(crate) fn flat_pairs_detailed(
    cloud: &PointCloud,
    v: usize,
    x: &[usize],
    x_prime: &[usize],
    eps: f64,
    k: u32,
    params: &FlatnessParams,
    meter: &mut DistanceMeter,
) -> Result<(Vec<FlatPair>, Option<FlatnessResult>), FlatnessError> {
    if !x.contains(&v) {
        return Err(FlatnessError::NotInNet(v));
    }
    let scale = crate::nets::dyadic_scale(eps, k);
    let outer = params.c0 * scale * 0.5;
    let near: Vec<usize> =
        meter.with_phase(Phase::Flatness, |m| ball_indices(cloud, x, v, outer, Ball::Open, m));
    if near.len() <= 1 {
        return Ok((Vec::new(), None));
    }
    let res = flatness_at(cloud, v, x_prime, scale, params, meter)?;
    if !params.is_flat(res.alpha) {
        return Ok((Vec::new(), Some(res)));
    }
    let frame = orient_coords(&res.line, cloud.coords(v));
    let mut left: Option<usize> = None;
    let mut right: Option<usize> = None;
    for &w in near.iter().filter(|&&w| w != v) {
        let c = frame.first(cloud.coords(w));
        if c < 0.0 {
            if left.is_none_or(|l| frame.compare(cloud.coords(w), cloud.coords(l)).is_gt()) {
                left = Some(w);
            }
        } else if c > 0.0 && right.is_none_or(|r| frame.compare(cloud.coords(w), cloud.coords(r)).is_lt()) {
            right = Some(w);
        }
    }
    let mut pairs = Vec::with_capacity(2);
    for w in [left, right].into_iter().flatten() {
        let d = meter.with_phase(Phase::Flatness, |m| m.measure(cloud.coords(v), cloud.coords(w)));
        if eps <= d && d < outer {
            pairs.push(FlatPair::new(v, w));
        }
    }
    Ok((pairs, Some(res)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[f64]) -> Point {
        Point::new(c.to_vec()).unwrap()
    }

    #[test]
    fn neighborhood_examples() {
        let mut m = DistanceMeter::new();
        let v = p(&[0.0]);
        assert_eq!(neighborhood(&v, &[p(&[0.0])], 1.0, 300.0, &mut m), vec![0]);
        let xs = [p(&[0.0]), p(&[1.9]), p(&[2.1])];
        assert_eq!(neighborhood(&v, &xs, 1.0, 2.0, &mut m), vec![0, 1]);
        assert_eq!(neighborhood(&v, &[p(&[0.0]), p(&[1.0])], 0.625, 300.0, &mut m), vec![0, 1]);
        assert_eq!(m.count(Phase::Flatness), 6);
    }

    #[test]
    fn grid_examples() {
        let params = FlatnessParams::grid(2.0, 4);
        let v = p(&[0.0, 0.0]);
        let b = [p(&[0.0, 0.0]), p(&[1.0, 0.1]), p(&[2.0, 0.0])];
        let r = alpha_grid(&v, &b, 1.0, &params).unwrap();
        assert!((r.alpha - 0.099_503_719_020_998_92).abs() < 1e-15);
        assert!((r.line.direction()[1] / r.line.direction()[0] - 0.1).abs() < 1e-12);
        // collinear along a lattice line
        let b = [p(&[0.0, 0.0]), p(&[1.0, 1.0]), p(&[-1.5, -1.5])];
        assert!(alpha_grid(&v, &b, 1.0, &params).unwrap().alpha < 1e-12);
        assert_eq!(alpha_grid(&v, std::slice::from_ref(&v), 1.0, &params).unwrap().alpha, 0.0);
        assert_eq!(alpha_grid(&v, &[], 1.0, &params), Err(FlatnessError::EmptyNeighbourhood));
    }

    #[test]
    fn grid_infeasible_at_faithful_resolution() {
        let params = FlatnessParams { backend: Backend::Grid, ..Default::default() };
        assert_eq!(params.effective_grid_l(2), 12000);
        let v = p(&[0.0, 0.0]);
        let err = alpha_grid(&v, std::slice::from_ref(&v), 1.0, &params).unwrap_err();
        assert!(matches!(err, FlatnessError::GridTooLarge { .. }));
        assert!(err.to_string().contains("width backend"));
        assert!(FlatnessParams::grid(2.0, 4).profile_warning(2).is_some());
        assert!(FlatnessParams::grid(2.0, 80).profile_warning(2).is_none());
    }

    #[test]
    fn width_examples() {
        let v = p(&[0.0, 0.0]);
        let two = [p(&[0.0, 0.0]), p(&[3.0, 1.0])];
        assert_eq!(alpha_width(&v, &two, 1.0).unwrap().alpha, 0.0);
        let tri = [p(&[0.0, 0.0]), p(&[2.0, 0.0]), p(&[1.0, 0.2])];
        assert!((alpha_width(&v, &tri, 1.0).unwrap().alpha - 0.1).abs() < 1e-12);
        let col = [p(&[0.0, 0.0]), p(&[1.0, 2.0]), p(&[2.0, 4.0]), p(&[-1.0, -2.0])];
        assert!(alpha_width(&v, &col, 1.0).unwrap().alpha < 1e-12);
        let r = alpha_width(&v, &tri, 0.5).unwrap();
        assert!((r.alpha - 0.2).abs() < 1e-12);
    }

    #[test]
    fn one_dimensional_is_always_flat() {
        let v = p(&[0.0]);
        let b = [p(&[0.0]), p(&[5.0]), p(&[-3.0])];
        let r = alpha_width(&v, &b, 0.01).unwrap();
        assert_eq!(r.alpha, 0.0);
        assert_eq!(r.line.direction(), &[1.0]);
        assert_eq!(alpha_grid(&v, &b, 0.01, &FlatnessParams::grid(1.0, 3)).unwrap().alpha, 0.0);
    }

    fn cloud(rows: &[[f64; 2]]) -> PointCloud {
        PointCloud::from_rows(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn flat_pairs_on_a_line() {
        // X = {(-1,0),(0,0),(1,0)}, X' = X ∪ {(±0.5,0)}
        let c = cloud(&[[-1.0, 0.0], [0.0, 0.0], [1.0, 0.0], [-0.5, 0.0], [0.5, 0.0]]);
        let params = FlatnessParams::default();
        let pairs = flat_pairs(&c, 1, &[0, 1, 2], &[0, 1, 2, 3, 4], 1.0, 1, &params, &mut DistanceMeter::new()).unwrap();
        assert_eq!(pairs, vec![FlatPair(0, 1), FlatPair(1, 2)]);
    }

    #[test]
    fn flat_pairs_empty_cases() {
        let params = FlatnessParams::default();
        let mut m = DistanceMeter::new();
        // only v inside the inner ball
        let c = cloud(&[[0.0, 0.0], [1000.0, 0.0]]);
        assert!(flat_pairs(&c, 0, &[0, 1], &[0, 1], 1.0, 1, &params, &mut m).unwrap().is_empty());
        // a cross is far from flat
        let c = cloud(&[[0.0, 0.0], [1.0, 0.0], [-1.0, 0.0], [0.0, 1.0], [0.0, -1.0]]);
        let all = [0, 1, 2, 3, 4];
        assert!(flat_pairs(&c, 0, &all, &all, 1.0, 1, &params, &mut m).unwrap().is_empty());
        assert_eq!(flat_pairs(&c, 0, &[1, 2], &all, 1.0, 1, &params, &mut m), Err(FlatnessError::NotInNet(0)));
    }
}
