//! Grid flatness: the best line through two points of the lattice
//! `φ(G)`, `G = {-2L..2L}^N`, `φ(z) = c0·scale·z/L + v`.
//!
//! Two exact searches share the objective [`objective`]:
//! [`fit_brute`] enumerates every lattice pair (any dimension, small grids),
//! [`fit_planar`] prunes the plane search with angular cones and only
//! evaluates primitive lattice directions. Both return the minimum with the
//! lexicographically smallest index pair among ties.

use std::f64::consts::{FRAC_PI_2, PI};

use crate::exec::{self, Execution};
use crate::flatness::width::width_fit;
use crate::flatness::FlatnessError;
use crate::geometry::Line;

/// Minimiser in index space plus its value (already normalised by scale).
#[derive(Clone, Debug, PartialEq)]
pub(crate) struct GridFit {
    pub alpha: f64,
    pub first: Vec<i64>,
    pub second: Vec<i64>,
}

impl GridFit {
    pub fn line(&self, v: &[f64], scale: f64, c0: f64, l: u32) -> Line {
        let h = c0 * scale / l as f64;
        let anchor: Vec<f64> = self.first.iter().zip(v).map(|(&g, &c)| g as f64 * h + c).collect();
        let dir: Vec<f64> = self.second.iter().zip(&self.first).map(|(&a, &b)| (a - b) as f64).collect();
        Line::new(&anchor, &dir).expect("distinct lattice points")
    }
}

/// `D(x, y)`: largest distance from the normalised points to the line
/// through lattice points `x` and `y` (index coordinates, spacing `h`).
/// The direction is reduced to its primitive lattice vector so that every
/// pair spanning the same ray from `x` evaluates bit-identically.
/// Returns early once the running maximum exceeds `cap`.
#[inline]
pub(crate) fn objective(x: &[i64], y: &[i64], h: f64, zs: &[Vec<f64>], cap: f64) -> f64 {
    let n = x.len();
    let g = x.iter().zip(y).fold(0i64, |acc, (a, b)| gcd(acc, b - a));
    let origin: Vec<f64> = x.iter().map(|&c| c as f64 * h).collect();
    let mut dir: Vec<f64> = x.iter().zip(y).map(|(a, b)| ((b - a) / g) as f64).collect();
    let len = dir.iter().map(|d| d * d).sum::<f64>().sqrt();
    for d in dir.iter_mut() {
        *d /= len;
    }
    let mut worst = 0.0f64;
    for z in zs {
        let mut t = 0.0;
        for k in 0..n {
            t += (z[k] - origin[k]) * dir[k];
        }
        let mut sq = 0.0;
        for k in 0..n {
            let r = z[k] - origin[k] - t * dir[k];
            sq += r * r;
        }
        worst = worst.max(sq.sqrt());
        if worst > cap {
            break;
        }
    }
    worst
}

fn normalise(v: &[f64], b: &[&[f64]], scale: f64) -> Vec<Vec<f64>> {
    b.iter().map(|z| z.iter().zip(v).map(|(a, c)| (a - c) / scale).collect()).collect()
}

fn lattice_size(dim: usize, l: u32) -> Option<u64> {
    let side = 4 * l as u64 + 1;
    (0..dim).try_fold(1u64, |acc, _| acc.checked_mul(side))
}

fn decode(mut idx: u64, dim: usize, l: u32) -> Vec<i64> {
    let side = 4 * l as u64 + 1;
    let mut out = vec![0i64; dim];
    for k in (0..dim).rev() {
        out[k] = (idx % side) as i64 - 2 * l as i64;
        idx /= side;
    }
    out
}

/// Exhaustive search over all unordered lattice pairs in lexicographic order.
pub(crate) fn fit_brute(
    v: &[f64],
    b: &[&[f64]],
    scale: f64,
    c0: f64,
    l: u32,
    budget: u64,
) -> Result<GridFit, FlatnessError> {
    let dim = v.len();
    let g = lattice_size(dim, l).ok_or(FlatnessError::GridTooLarge { work: u64::MAX, budget })?;
    let pairs = g.checked_mul(g.saturating_sub(1)).map(|p| p / 2).unwrap_or(u64::MAX);
    if pairs > budget {
        return Err(FlatnessError::GridTooLarge { work: pairs, budget });
    }
    let zs = normalise(v, b, scale);
    let h = c0 / l as f64;
    let pts: Vec<Vec<i64>> = (0..g).map(|i| decode(i, dim, l)).collect();
    let mut best = (f64::INFINITY, 0u64, 1u64);
    for i in 0..g {
        for j in i + 1..g {
            let d = objective(&pts[i as usize], &pts[j as usize], h, &zs, best.0);
            if d < best.0 {
                best = (d, i, j);
            }
        }
    }
    Ok(GridFit { alpha: best.0, first: decode(best.1, dim, l), second: decode(best.2, dim, l) })
}

/// Union of closed angle intervals inside `[0, π)`.
#[derive(Clone, Debug)]
struct AngleSet(Vec<(f64, f64)>);

impl AngleSet {
    fn full() -> Self {
        AngleSet(vec![(0.0, PI)])
    }

    fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Intersects with `[centre - half, centre + half]` taken modulo π.
    fn restrict(&mut self, centre: f64, half: f64) {
        if half >= FRAC_PI_2 {
            return;
        }
        let (lo, hi) = (centre - half, centre + half);
        let mut pieces = Vec::with_capacity(2);
        if lo < 0.0 {
            pieces.push((0.0, hi));
            pieces.push((lo + PI, PI));
        } else if hi > PI {
            pieces.push((lo, PI));
            pieces.push((0.0, hi - PI));
        } else {
            pieces.push((lo, hi));
        }
        let mut out = Vec::new();
        for &(a, b) in &self.0 {
            for &(c, d) in &pieces {
                let (x, y) = (a.max(c), b.min(d));
                if x <= y {
                    out.push((x, y));
                }
            }
        }
        out.sort_by(|p, q| p.0.total_cmp(&q.0));
        self.0 = out;
    }
}

/// Lines through `p` (normalised) that stay within `beta` of every point.
fn cone(p: [f64; 2], zs: &[Vec<f64>], beta: f64) -> AngleSet {
    let mut set = AngleSet::full();
    for z in zs {
        let (dx, dy) = (z[0] - p[0], z[1] - p[1]);
        let r = (dx * dx + dy * dy).sqrt();
        if r <= beta {
            continue;
        }
        let mut centre = dy.atan2(dx);
        if centre < 0.0 {
            centre += PI;
        }
        if centre >= PI {
            centre -= PI;
        }
        set.restrict(centre, (beta / r).asin() + 1e-9);
        if set.is_empty() {
            break;
        }
    }
    set
}

fn gcd(mut a: i64, mut b: i64) -> i64 {
    a = a.abs();
    b = b.abs();
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Exact planar search with cone pruning. `budget` caps the lattice size
/// and the number of columns scanned.
pub(crate) fn fit_planar(
    v: &[f64],
    b: &[&[f64]],
    scale: f64,
    c0: f64,
    l: u32,
    budget: u64,
    exec: Execution,
) -> Result<GridFit, FlatnessError> {
    debug_assert_eq!(v.len(), 2);
    let g = lattice_size(2, l).ok_or(FlatnessError::GridTooLarge { work: u64::MAX, budget })?;
    if g > budget {
        return Err(FlatnessError::GridTooLarge { work: g, budget });
    }
    let zs = normalise(v, b, scale);
    let h = c0 / l as f64;
    let li = l as i64;
    let span = 2 * li;
    let at = |i: i64, j: i64| [i as f64 * h, j as f64 * h];

    // Upper bound: the continuous optimum snapped onto the lattice boundary,
    // and two axis-aligned pairs through the centre.
    let refs: Vec<&[f64]> = zs.iter().map(|z| z.as_slice()).collect();
    let mut bound = objective(&[0, 0], &[1, 0], h, &zs, f64::INFINITY)
        .min(objective(&[0, 0], &[0, 1], h, &zs, f64::INFINITY));
    let (_, best_line) = width_fit(&[0.0, 0.0], &refs);
    if let Some((p1, p2)) = boundary_hits(&best_line, 2.0 * c0) {
        let snap = |q: [f64; 2]| {
            [((q[0] / h).round() as i64).clamp(-span, span), ((q[1] / h).round() as i64).clamp(-span, span)]
        };
        let (s1, s2) = (snap(p1), snap(p2));
        if s1 != s2 {
            bound = bound.min(objective(&s1, &s2, h, &zs, f64::INFINITY));
        }
    }
    let beta = bound * (1.0 + 1e-9) + 1e-12;

    let side = (2 * span + 1) as usize;
    let mut alive = vec![false; side * side];
    let mut candidates: Vec<([i64; 2], AngleSet)> = Vec::new();
    for i in -span..=span {
        for j in -span..=span {
            let set = cone(at(i, j), &zs, beta);
            if !set.is_empty() {
                alive[(i + span) as usize * side + (j + span) as usize] = true;
                candidates.push(([i, j], set));
            }
        }
    }
    let work = candidates.len() as u64 * side as u64;
    if work > budget {
        return Err(FlatnessError::GridTooLarge { work, budget });
    }

    let per_point = exec::map(exec, &candidates, |(p, set)| {
        let [pi, pj] = *p;
        let mut best: Option<(f64, [i64; 2])> = None;
        let consider = |di: i64, dj: i64, best: &mut Option<(f64, [i64; 2])>| {
            let (qi, qj) = (pi + di, pj + dj);
            if qj < -span || qj > span || gcd(di, dj) != 1 {
                return;
            }
            if !alive[(qi + span) as usize * side + (qj + span) as usize] {
                return;
            }
            let cap = best.map_or(beta, |(d, _)| d);
            let d = objective(p, &[qi, qj], h, &zs, cap);
            if d <= beta && best.is_none_or(|(bd, _)| d < bd) {
                *best = Some((d, [qi, qj]));
            }
        };
        // vertical direction: only the next lattice point matters
        if pj < span && set.0.iter().any(|&(a, b)| a <= FRAC_PI_2 && FRAC_PI_2 <= b) {
            consider(0, 1, &mut best);
        }
        for qi in pi + 1..=span {
            let dx = (qi - pi) as f64;
            let mut ranges: Vec<(i64, i64)> = Vec::with_capacity(4);
            for &(a, b) in &set.0 {
                // directions with dy >= 0 live in [0, π/2)
                if a < FRAC_PI_2 {
                    let lo = dx * a.tan();
                    let hi = if b < FRAC_PI_2 { dx * b.tan() } else { f64::INFINITY };
                    ranges.push(int_range(lo, hi, -span - pj, span - pj));
                }
                // directions with dy < 0 live in (π/2, π)
                if b > FRAC_PI_2 {
                    let lo = if a > FRAC_PI_2 { dx * (a - PI).tan() } else { f64::NEG_INFINITY };
                    let hi = dx * (b - PI).tan();
                    ranges.push(int_range(lo, hi, -span - pj, span - pj));
                }
            }
            ranges.sort_unstable();
            let mut next = i64::MIN;
            for (lo, hi) in ranges {
                for dj in lo.max(next)..=hi {
                    consider(qi - pi, dj, &mut best);
                }
                next = next.max(hi + 1);
            }
        }
        best.map(|(d, q)| (d, *p, q))
    });

    let mut winner: Option<(f64, [i64; 2], [i64; 2])> = None;
    for (d, p, q) in per_point.into_iter().flatten() {
        if winner.is_none_or(|(wd, _, _)| d < wd) {
            winner = Some((d, p, q));
        }
    }
    let (alpha, p, q) = winner.expect("the bounding pair always survives pruning");
    Ok(GridFit { alpha, first: p.to_vec(), second: q.to_vec() })
}

fn int_range(lo: f64, hi: f64, min: i64, max: i64) -> (i64, i64) {
    let lo = if lo.is_finite() { ((lo - 1e-7).ceil() as i64).max(min) } else { min };
    let hi = if hi.is_finite() { ((hi + 1e-7).floor() as i64).min(max) } else { max };
    (lo, hi)
}

/// Where `line` crosses the boundary of the square `[-half, half]^2`.
fn boundary_hits(line: &Line, half: f64) -> Option<([f64; 2], [f64; 2])> {
    let (a, d) = (line.anchor(), line.direction());
    let mut t_lo = f64::NEG_INFINITY;
    let mut t_hi = f64::INFINITY;
    for k in 0..2 {
        if d[k].abs() < 1e-300 {
            if a[k].abs() > half {
                return None;
            }
            continue;
        }
        let (t1, t2) = ((-half - a[k]) / d[k], (half - a[k]) / d[k]);
        t_lo = t_lo.max(t1.min(t2));
        t_hi = t_hi.min(t1.max(t2));
    }
    if t_lo > t_hi {
        return None;
    }
    let at = |t: f64| [a[0] + t * d[0], a[1] + t * d[1]];
    Some((at(t_lo), at(t_hi)))
}
