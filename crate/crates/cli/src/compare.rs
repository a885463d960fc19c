//! Side-by-side lengths of the multiscale tour and the baselines.

use std::fmt::Write;

use atsp_core::baselines::{BaselineReport, OPTIMAL_LIMIT};
use atsp_core::pipeline::PipelineError;
use atsp_core::{solve, PointCloud, SolveParams};

pub fn compare(cloud: &PointCloud, params: &SolveParams) -> Result<BaselineReport, PipelineError> {
    let sol = solve(cloud, params)?;
    Ok(BaselineReport::compute(cloud, sol.tour_length))
}

fn cell(x: Option<f64>) -> String {
    x.map_or_else(|| "-".to_string(), |v| format!("{v:.6}"))
}

pub fn render(report: &BaselineReport, n: usize) -> String {
    let opt = report.optimal_cycle_length;
    let rows = [
        ("atsp", Some(report.atsp_tour_length), opt.map(|o| ratio(report.atsp_tour_length, o))),
        ("nearest_insertion", Some(report.nearest_insertion_length), report.insertion_over_optimal()),
        ("mst", Some(report.mst_length), opt.map(|o| ratio(report.mst_length, o))),
        ("optimal", opt, opt.map(|_| 1.0)),
    ];
    let mut out = String::new();
    let _ = writeln!(out, "points = {n}");
    if opt.is_none() {
        let _ = writeln!(out, "optimal = skipped (n > {OPTIMAL_LIMIT})");
    }
    let _ = writeln!(out, "{:<18} {:>14} {:>12}", "method", "length", "vs_optimal");
    for (name, len, r) in rows {
        let _ = writeln!(out, "{name:<18} {:>14} {:>12}", cell(len), cell(r));
    }
    let _ = writeln!(out, "atsp_over_mst = {}", cell(report.atsp_over_mst()));
    out
}

fn ratio(a: f64, b: f64) -> f64 {
    if b > 0.0 {
        a / b
    } else {
        1.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_point_is_all_zero() {
        let c = PointCloud::from_rows(&[vec![2.0, 2.0]]).unwrap();
        let r = compare(&c, &SolveParams::default()).unwrap();
        assert_eq!((r.atsp_tour_length, r.nearest_insertion_length, r.mst_length), (0.0, 0.0, 0.0));
        assert_eq!(r.optimal_cycle_length, Some(0.0));
    }

    #[test]
    fn two_points_match_optimum() {
        let c = PointCloud::from_rows(&[vec![0.0, 0.0], vec![3.0, 4.0]]).unwrap();
        let r = compare(&c, &SolveParams::default()).unwrap();
        assert_eq!(r.atsp_tour_length, 10.0);
        assert_eq!(r.optimal_cycle_length, Some(10.0));
        assert!(render(&r, 2).contains("optimal"));
    }
}
