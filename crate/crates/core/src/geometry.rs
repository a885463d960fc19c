//! Points, clouds, lines and the metered Euclidean distance.
//!
//! Every pair evaluation performed by the solver goes through a
//! [`DistanceMeter`], which keeps one counter per [`Phase`]. Complexity
//! checks are made against these counters, never against wall time.

use std::collections::HashSet;
use std::fmt;
use std::ops::AddAssign;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeometryError {
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("point has non-finite coordinate {value} at axis {axis}")]
    NonFinite { axis: usize, value: f64 },
    #[error("points must have at least one coordinate")]
    ZeroDimension,
    #[error("empty point set")]
    EmptySet,
    #[error("candidate net is not a subset of the point set")]
    NotSubset,
    #[error("line direction has zero length")]
    DegenerateDirection,
}

/// A point of R^N with finite coordinates.
#[derive(Clone, Debug, PartialEq)]
pub struct Point(Vec<f64>);

impl Point {
    pub fn new(coords: Vec<f64>) -> Result<Self, GeometryError> {
        if coords.is_empty() {
            return Err(GeometryError::ZeroDimension);
        }
        if let Some((axis, &value)) = coords.iter().enumerate().find(|(_, c)| !c.is_finite()) {
            return Err(GeometryError::NonFinite { axis, value });
        }
        Ok(Point(coords))
    }

    pub fn coords(&self) -> &[f64] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn norm(&self) -> f64 {
        self.0.iter().map(|c| c * c).sum::<f64>().sqrt()
    }

    fn check_dim(&self, other: &Point) -> Result<(), GeometryError> {
        if self.dim() != other.dim() {
            return Err(GeometryError::DimensionMismatch { left: self.dim(), right: other.dim() });
        }
        Ok(())
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// Plain Euclidean distance; callers guarantee equal dimensions.
#[inline]
pub(crate) fn euclid(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

/// A deduplicated finite point set with its enclosing scale `r0 = 5 max |v|`.
#[derive(Clone, Debug, PartialEq)]
pub struct PointCloud {
    points: Vec<Point>,
    dim: usize,
    r0: f64,
}

impl PointCloud {
    /// Builds a cloud, dropping exact duplicates (first occurrence wins).
    /// Returns the cloud and the number of dropped points.
    pub fn from_points(points: Vec<Point>) -> Result<(Self, usize), GeometryError> {
        let first = points.first().ok_or(GeometryError::EmptySet)?;
        let dim = first.dim();
        let mut seen: HashSet<Vec<u64>> = HashSet::with_capacity(points.len());
        let mut kept = Vec::with_capacity(points.len());
        let mut dropped = 0;
        for p in points {
            if p.dim() != dim {
                return Err(GeometryError::DimensionMismatch { left: dim, right: p.dim() });
            }
            // -0.0 == 0.0, so normalise before hashing bits
            let key: Vec<u64> = p.coords().iter().map(|&c| (c + 0.0).to_bits()).collect();
            if seen.insert(key) {
                kept.push(p);
            } else {
                dropped += 1;
            }
        }
        let r0 = 5.0 * kept.iter().map(Point::norm).fold(0.0, f64::max);
        Ok((PointCloud { points: kept, dim, r0 }, dropped))
    }

    /// Convenience constructor from raw coordinate rows.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self, GeometryError> {
        let points = rows.iter().cloned().map(Point::new).collect::<Result<Vec<_>, _>>()?;
        Ok(Self::from_points(points)?.0)
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn r0(&self) -> f64 {
        self.r0
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn point(&self, i: usize) -> &Point {
        &self.points[i]
    }

    pub(crate) fn coords(&self, i: usize) -> &[f64] {
        self.points[i].coords()
    }
}

/// An infinite line `anchor + t * direction` with a unit direction.
#[derive(Clone, Debug, PartialEq)]
pub struct Line {
    anchor: Vec<f64>,
    direction: Vec<f64>,
}

impl Line {
    /// Normalises `direction`; fails on a zero vector or mismatched dimensions.
    pub fn new(anchor: &[f64], direction: &[f64]) -> Result<Self, GeometryError> {
        if anchor.len() != direction.len() {
            return Err(GeometryError::DimensionMismatch { left: anchor.len(), right: direction.len() });
        }
        let len = direction.iter().map(|c| c * c).sum::<f64>().sqrt();
        if !(len > 0.0) || !len.is_finite() {
            return Err(GeometryError::DegenerateDirection);
        }
        Ok(Line { anchor: anchor.to_vec(), direction: direction.iter().map(|c| c / len).collect() })
    }

    pub fn through(a: &[f64], b: &[f64]) -> Result<Self, GeometryError> {
        let dir: Vec<f64> = b.iter().zip(a).map(|(x, y)| x - y).collect();
        Self::new(a, &dir)
    }

    /// The first coordinate axis through `anchor`.
    pub fn axis(anchor: &[f64]) -> Self {
        let mut direction = vec![0.0; anchor.len()];
        direction[0] = 1.0;
        Line { anchor: anchor.to_vec(), direction }
    }

    pub fn anchor(&self) -> &[f64] {
        &self.anchor
    }

    pub fn direction(&self) -> &[f64] {
        &self.direction
    }

    pub fn dim(&self) -> usize {
        self.anchor.len()
    }

    #[inline]
    pub(crate) fn distance_to(&self, p: &[f64]) -> f64 {
        let along = p.iter().zip(&self.anchor).zip(&self.direction);
        let t = along.clone().fold(0.0, |t, ((x, a), d)| t + (x - a) * d);
        along
            .fold(0.0, |sq, ((x, a), d)| {
                let r = x - a - t * d;
                sq + r * r
            })
            .sqrt()
    }
}

/// Which part of the solver a pair evaluation is charged to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Phase {
    NetRefinement,
    Flatness,
    EdgeAssembly,
    Tour,
}

impl Phase {
    pub const ALL: [Phase; 4] = [Phase::NetRefinement, Phase::Flatness, Phase::EdgeAssembly, Phase::Tour];

    pub fn name(self) -> &'static str {
        match self {
            Phase::NetRefinement => "net_refinement",
            Phase::Flatness => "flatness",
            Phase::EdgeAssembly => "edge_assembly",
            Phase::Tour => "tour",
        }
    }

    fn slot(self) -> usize {
        self as usize
    }
}

/// Counts Euclidean pair evaluations, split by [`Phase`].
///
/// Meters are cheap values: concurrent tasks each own one and the results are
/// merged with `+=`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DistanceMeter {
    counts: [u64; 4],
    active: Phase,
}

impl Default for DistanceMeter {
    fn default() -> Self {
        DistanceMeter { counts: [0; 4], active: Phase::NetRefinement }
    }
}

impl DistanceMeter {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn in_phase(phase: Phase) -> Self {
        DistanceMeter { counts: [0; 4], active: phase }
    }

    pub fn phase(&self) -> Phase {
        self.active
    }

    pub fn set_phase(&mut self, phase: Phase) {
        self.active = phase;
    }

    /// Runs `f` with `phase` active, restoring the previous phase afterwards.
    pub fn with_phase<R>(&mut self, phase: Phase, f: impl FnOnce(&mut Self) -> R) -> R {
        let prev = self.active;
        self.active = phase;
        let out = f(self);
        self.active = prev;
        out
    }

    pub fn count(&self, phase: Phase) -> u64 {
        self.counts[phase.slot()]
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    #[inline]
    #[cfg(test)]
    pub(crate) fn tick(&mut self, n: u64) {
        self.counts[self.active.slot()] += n;
    }

    #[inline]
    pub(crate) fn measure(&mut self, a: &[f64], b: &[f64]) -> f64 {
        self.counts[self.active.slot()] += 1;
        euclid(a, b)
    }
}

impl AddAssign for DistanceMeter {
    fn add_assign(&mut self, rhs: Self) {
        for (a, b) in self.counts.iter_mut().zip(rhs.counts) {
            *a += b;
        }
    }
}

/// Metered Euclidean distance.
pub fn distance(a: &Point, b: &Point, meter: &mut DistanceMeter) -> Result<f64, GeometryError> {
    a.check_dim(b)?;
    Ok(meter.measure(a.coords(), b.coords()))
}

/// Un-metered Euclidean distance.
pub fn distance_unmetered(a: &Point, b: &Point) -> Result<f64, GeometryError> {
    a.check_dim(b)?;
    Ok(euclid(a.coords(), b.coords()))
}

pub fn dist_point_to_line(p: &Point, line: &Line) -> Result<f64, GeometryError> {
    if p.dim() != line.dim() {
        return Err(GeometryError::DimensionMismatch { left: p.dim(), right: line.dim() });
    }
    Ok(line.distance_to(p.coords()))
}

/// Hausdorff distance between two finite sets: the larger of the two
/// directed sup-inf distances.
pub fn hausdorff_distance(a: &[Point], b: &[Point]) -> Result<f64, GeometryError> {
    if a.is_empty() || b.is_empty() {
        return Err(GeometryError::EmptySet);
    }
    let dim = a[0].dim();
    if let Some(p) = a.iter().chain(b).find(|p| p.dim() != dim) {
        return Err(GeometryError::DimensionMismatch { left: dim, right: p.dim() });
    }
    let directed = |from: &[Point], to: &[Point]| {
        from.iter()
            .map(|x| to.iter().map(|y| euclid(x.coords(), y.coords())).fold(f64::INFINITY, f64::min))
            .fold(0.0, f64::max)
    };
    Ok(directed(a, b).max(directed(b, a)))
}

/// Open or closed ball predicate.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Ball {
    Open,
    Closed,
}

impl Ball {
    #[inline]
    pub fn contains(self, dist: f64, radius: f64) -> bool {
        match self {
            Ball::Open => dist < radius,
            Ball::Closed => dist <= radius,
        }
    }
}

/// Indices of the points of `set` inside the ball around `center`.
pub fn ball_query(set: &[Point], center: &Point, radius: f64, ball: Ball) -> Result<Vec<usize>, GeometryError> {
    let mut out = Vec::new();
    for (i, p) in set.iter().enumerate() {
        center.check_dim(p)?;
        if ball.contains(euclid(center.coords(), p.coords()), radius) {
            out.push(i);
        }
    }
    Ok(out)
}

/// Metered ball query over a subset of cloud indices.
pub(crate) fn ball_indices(
    cloud: &PointCloud,
    candidates: &[usize],
    center: usize,
    radius: f64,
    ball: Ball,
    meter: &mut DistanceMeter,
) -> Vec<usize> {
    let c = cloud.coords(center);
    candidates
        .iter()
        .copied()
        .filter(|&j| ball.contains(meter.measure(c, cloud.coords(j)), radius))
        .collect()
}

/// True iff `x` is `eps`-separated and every point of `v` lies within `eps`
/// of some point of `x`.
pub fn is_maximal_net(x: &[Point], v: &[Point], eps: f64) -> Result<bool, GeometryError> {
    if x.iter().any(|p| !v.contains(p)) {
        return Err(GeometryError::NotSubset);
    }
    for (i, a) in x.iter().enumerate() {
        for b in &x[i + 1..] {
            if distance_unmetered(a, b)? < eps {
                return Ok(false);
            }
        }
    }
    for p in v {
        if x.contains(p) {
            continue;
        }
        let mut near = false;
        for q in x {
            if distance_unmetered(p, q)? < eps {
                near = true;
                break;
            }
        }
        if !near {
            return Ok(false);
        }
    }
    Ok(true)
}
