//! Continuous-width flatness: the thinnest cylinder over all lines (exact in
//! the plane) instead of a finite grid of candidate lines.

use nalgebra::{DMatrix, SymmetricEigen};

use crate::geometry::Line;

/// Best-fitting line for `b` and its maximal distance, in world units.
pub(crate) fn width_fit(v: &[f64], b: &[&[f64]]) -> (f64, Line) {
    let dim = v.len();
    if dim == 1 || b.is_empty() {
        return (0.0, Line::axis(v));
    }
    let line = match b.len() {
        1 => return (0.0, Line::axis(b[0])),
        2 => return (0.0, Line::through(b[0], b[1]).unwrap_or_else(|_| Line::axis(b[0]))),
        _ if dim == 2 => planar_strip(v, b),
        _ => candidate_lines(b),
    };
    (max_distance(&line, b), line)
}

fn max_distance(line: &Line, b: &[&[f64]]) -> f64 {
    b.iter().map(|z| line.distance_to(z)).fold(0.0, f64::max)
}

fn cross(o: [f64; 2], a: [f64; 2], b: [f64; 2]) -> f64 {
    (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
}

/// Andrew's monotone chain; counter-clockwise, collinear points dropped.
pub(crate) fn convex_hull(pts: &[[f64; 2]]) -> Vec<[f64; 2]> {
    let mut p = pts.to_vec();
    p.sort_by(|a, b| a[0].total_cmp(&b[0]).then(a[1].total_cmp(&b[1])));
    p.dedup();
    if p.len() < 3 {
        return p;
    }
    let chain = |it: &mut dyn Iterator<Item = [f64; 2]>| {
        let mut half: Vec<[f64; 2]> = Vec::new();
        for q in it {
            while half.len() >= 2 && cross(half[half.len() - 2], half[half.len() - 1], q) <= 0.0 {
                half.pop();
            }
            half.push(q);
        }
        half.pop();
        half
    };
    let mut hull = chain(&mut p.iter().copied());
    hull.extend(chain(&mut p.iter().rev().copied()));
    hull
}

/// Midline of the minimal-width strip via rotating calipers.
fn planar_strip(v: &[f64], b: &[&[f64]]) -> Line {
    let rel: Vec<[f64; 2]> = b.iter().map(|z| [z[0] - v[0], z[1] - v[1]]).collect();
    let hull = convex_hull(&rel);
    let world = |q: [f64; 2]| [q[0] + v[0], q[1] + v[1]];
    match hull.len() {
        0 => return Line::axis(v),
        1 => return Line::axis(&world(hull[0])),
        2 => return Line::through(&world(hull[0]), &world(hull[1])).unwrap_or_else(|_| Line::axis(v)),
        _ => {}
    }
    let h = hull.len();
    let at = |i: usize| hull[i % h];
    let mut j = 1;
    let mut best: Option<(f64, usize, usize)> = None;
    for i in 0..h {
        let (a, b2) = (at(i), at(i + 1));
        while cross(a, b2, at(j + 1)) > cross(a, b2, at(j)) {
            j += 1;
        }
        let len = ((b2[0] - a[0]).powi(2) + (b2[1] - a[1]).powi(2)).sqrt();
        let width = cross(a, b2, at(j)) / len;
        if best.is_none_or(|(w, _, _)| width < w) {
            best = Some((width, i, j % h));
        }
    }
    let (width, i, _) = best.expect("hull has edges");
    let (a, b2) = (at(i), at(i + 1));
    let len = ((b2[0] - a[0]).powi(2) + (b2[1] - a[1]).powi(2)).sqrt();
    let dir = [(b2[0] - a[0]) / len, (b2[1] - a[1]) / len];
    // interior is to the left of a counter-clockwise edge
    let normal = [-dir[1], dir[0]];
    let anchor = world([a[0] + normal[0] * width / 2.0, a[1] + normal[1] * width / 2.0]);
    Line::new(&anchor, &dir).expect("unit direction")
}

/// Principal axis plus every line through two points of `b`; the best one wins.
fn candidate_lines(b: &[&[f64]]) -> Line {
    let dim = b[0].len();
    let n = b.len() as f64;
    let centroid: Vec<f64> = (0..dim).map(|k| b.iter().map(|z| z[k]).sum::<f64>() / n).collect();
    let mut cov = DMatrix::<f64>::zeros(dim, dim);
    for z in b {
        for r in 0..dim {
            for c in 0..dim {
                cov[(r, c)] += (z[r] - centroid[r]) * (z[c] - centroid[c]);
            }
        }
    }
    let eig = SymmetricEigen::new(cov);
    let top = (0..dim).max_by(|&x, &y| eig.eigenvalues[x].total_cmp(&eig.eigenvalues[y])).unwrap_or(0);
    let axis: Vec<f64> = eig.eigenvectors.column(top).iter().copied().collect();
    let mut best_line = Line::new(&centroid, &axis).unwrap_or_else(|_| Line::axis(&centroid));
    let mut best = max_distance(&best_line, b);

    // Points that recently broke a candidate are checked first.
    let mut order: Vec<usize> = (0..b.len()).collect();
    for i in 0..b.len() {
        for j in i + 1..b.len() {
            let Ok(line) = Line::through(b[i], b[j]) else { continue };
            let mut worst = 0.0f64;
            let mut rejected = None;
            for (pos, &k) in order.iter().enumerate() {
                worst = worst.max(line.distance_to(b[k]));
                if worst >= best {
                    rejected = Some(pos);
                    break;
                }
            }
            match rejected {
                Some(pos) => {
                    let k = order.remove(pos);
                    order.insert(0, k);
                }
                None => {
                    best = worst;
                    best_line = line;
                }
            }
        }
    }
    best_line
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Half of the minimal width over all directions spanned by point pairs.
    fn brute_half_width(b: &[[f64; 2]]) -> f64 {
        let mut best = f64::INFINITY;
        for i in 0..b.len() {
            for j in i + 1..b.len() {
                let (dx, dy) = (b[j][0] - b[i][0], b[j][1] - b[i][1]);
                let len = (dx * dx + dy * dy).sqrt();
                let (nx, ny) = (-dy / len, dx / len);
                let proj: Vec<f64> = b.iter().map(|p| p[0] * nx + p[1] * ny).collect();
                let w = proj.iter().cloned().fold(f64::MIN, f64::max) - proj.iter().cloned().fold(f64::MAX, f64::min);
                best = best.min(w);
            }
        }
        best / 2.0
    }

    #[test]
    fn triangle_half_strip() {
        let pts = [[0.0, 0.0], [2.0, 0.0], [1.0, 0.2]];
        let refs: Vec<&[f64]> = pts.iter().map(|p| p.as_slice()).collect();
        let (d, line) = width_fit(&[0.0, 0.0], &refs);
        assert!((d - 0.1).abs() < 1e-12, "{d}");
        assert!((brute_half_width(&pts) - 0.1).abs() < 1e-12);
        assert!(line.direction()[1].abs() < 1e-12);
    }

    #[test]
    fn collinear_and_small_sets() {
        let pts = [[0.0, 0.0], [1.0, 1.0], [3.0, 3.0], [-2.0, -2.0]];
        let refs: Vec<&[f64]> = pts.iter().map(|p| p.as_slice()).collect();
        assert!(width_fit(&[0.0, 0.0], &refs).0 < 1e-12);
        assert_eq!(width_fit(&[0.0, 0.0], &refs[..2]).0, 0.0);
        assert_eq!(width_fit(&[0.0, 0.0], &refs[..1]).0, 0.0);
    }

    #[test]
    fn random_polygons_match_brute_force() {
        let mut s = 0x2545f4914f6cdd1du64;
        let mut next = move || {
            s ^= s << 13;
            s ^= s >> 7;
            s ^= s << 17;
            (s >> 11) as f64 / (1u64 << 53) as f64
        };
        for _ in 0..300 {
            let n = 3 + (next() * 10.0) as usize;
            let pts: Vec<[f64; 2]> = (0..n).map(|_| [next() * 4.0 - 2.0, next() - 0.5]).collect();
            let refs: Vec<&[f64]> = pts.iter().map(|p| p.as_slice()).collect();
            let (d, _) = width_fit(&[0.0, 0.0], &refs);
            assert!((d - brute_half_width(&pts)).abs() < 1e-9, "{d} vs {}", brute_half_width(&pts));
        }
    }

    #[test]
    fn three_d_candidates() {
        let pts = [[0.0, 0.0, 0.0], [1.0, 0.0, 0.05], [2.0, 0.0, 0.0], [3.0, 0.02, 0.0]];
        let refs: Vec<&[f64]> = pts.iter().map(|p| p.as_slice()).collect();
        let (d, line) = width_fit(&[0.0, 0.0, 0.0], &refs);
        assert!(d <= 0.05);
        let worst = refs.iter().map(|z| line.distance_to(z)).fold(0.0, f64::max);
        assert_eq!(worst, d);
    }
}
