use std::cmp::Ordering;

use crate::geometry::{Line, Point};

/// The isometry `Ψ(x) = A (x - t)` with `A` a Householder reflection taking
/// the oriented line direction to `e1`.
#[derive(Clone, Debug, PartialEq)]
pub struct OrientedFrame {
    direction: Vec<f64>,
    origin: Vec<f64>,
    matrix: Vec<f64>,
}

impl OrientedFrame {
    /// Frame with `Ψ(origin) = 0` and `direction` (assumed unit) sent to `e1`.
    pub fn with_direction(direction: &[f64], origin: &[f64]) -> Self {
        let n = direction.len();
        let mut w: Vec<f64> = direction.to_vec();
        w[0] -= 1.0;
        let ww: f64 = w.iter().map(|c| c * c).sum();
        let mut matrix = vec![0.0; n * n];
        for i in 0..n {
            matrix[i * n + i] = 1.0;
        }
        if ww > 1e-30 {
            for i in 0..n {
                for j in 0..n {
                    matrix[i * n + j] -= 2.0 * w[i] * w[j] / ww;
                }
            }
        }
        OrientedFrame { direction: direction.to_vec(), origin: origin.to_vec(), matrix }
    }

    pub fn direction(&self) -> &[f64] {
        &self.direction
    }

    pub fn matrix(&self) -> &[f64] {
        &self.matrix
    }

    /// `<Ψ(x)>_1`.
    #[inline]
    pub fn first(&self, x: &[f64]) -> f64 {
        x.iter().zip(&self.origin).zip(&self.direction).map(|((a, o), d)| (a - o) * d).sum()
    }

    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        let n = self.direction.len();
        let shifted: Vec<f64> = x.iter().zip(&self.origin).map(|(a, o)| a - o).collect();
        (0..n).map(|i| (0..n).map(|j| self.matrix[i * n + j] * shifted[j]).sum()).collect()
    }

    /// Same frame with the orientation reversed.
    pub fn reversed(&self) -> Self {
        let neg: Vec<f64> = self.direction.iter().map(|c| -c).collect();
        Self::with_direction(&neg, &self.origin)
    }

    /// Total order along the line: first coordinate, then the full image
    /// lexicographically.
    pub fn compare(&self, a: &[f64], b: &[f64]) -> Ordering {
        self.first(a).total_cmp(&self.first(b)).then_with(|| {
            let (pa, pb) = (self.apply(a), self.apply(b));
            pa.iter().zip(&pb).map(|(x, y)| x.total_cmp(y)).find(|o| o.is_ne()).unwrap_or(Ordering::Equal)
        })
    }
}

/// Orients `line` so that its direction's first nonzero coordinate is
/// positive, and places the frame origin at `origin`.
pub fn orient(line: &Line, origin: &Point) -> OrientedFrame {
    orient_coords(line, origin.coords())
}

pub(crate) fn orient_coords(line: &Line, origin: &[f64]) -> OrientedFrame {
    let d = line.direction();
    let flip = d.iter().find(|c| **c != 0.0).is_some_and(|c| *c < 0.0);
    if flip {
        let neg: Vec<f64> = d.iter().map(|c| -c).collect();
        OrientedFrame::with_direction(&neg, origin)
    } else {
        OrientedFrame::with_direction(d, origin)
    }
}
