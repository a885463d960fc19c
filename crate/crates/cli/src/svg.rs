//! SVG drawing of a planar tour over its points.

use std::fmt::Write;

use atsp_core::{PointCloud, TwoToOneTour};

const SIZE: f64 = 512.0;
const MARGIN: f64 = 16.0;

/// `None` unless the cloud is planar.
pub fn render(cloud: &PointCloud, tour: &TwoToOneTour) -> Option<String> {
    if cloud.dim() != 2 {
        return None;
    }
    let xs = cloud.points().iter().map(|p| p.coords()[0]);
    let ys = cloud.points().iter().map(|p| p.coords()[1]);
    let (x0, x1) = xs.fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), x| (a.min(x), b.max(x)));
    let (y0, y1) = ys.fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), y| (a.min(y), b.max(y)));
    let span = (x1 - x0).max(y1 - y0);
    let k = if span > 0.0 { (SIZE - 2.0 * MARGIN) / span } else { 1.0 };
    // flip y so the picture has the usual orientation
    let at = |i: usize| {
        let c = cloud.point(i).coords();
        (MARGIN + (c[0] - x0) * k, SIZE - MARGIN - (c[1] - y0) * k)
    };

    let mut out = String::new();
    let _ = writeln!(out, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#);
    let pts: Vec<String> = tour.sequence().iter().map(|&i| {
        let (x, y) = at(i);
        format!("{x:.3},{y:.3}")
    }).collect();
    let _ = writeln!(out, r#"<polyline fill="none" stroke="steelblue" stroke-width="1" points="{}"/>"#, pts.join(" "));
    for i in 0..cloud.len() {
        let (x, y) = at(i);
        let _ = writeln!(out, r#"<circle cx="{x:.3}" cy="{y:.3}" r="2" fill="black"/>"#);
    }
    out.push_str("</svg>\n");
    Some(out)
}
