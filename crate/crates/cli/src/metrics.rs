//! The metrics document: `key = value` lines in a fixed order. Wall-clock
//! times are kept out so the document is byte-stable for a given input.

use std::fmt::Write;

use atsp_core::pipeline::{LevelRecord, RunTrace};
use atsp_core::{Backend, Phase, PointCloud, Solution, SolveParams};

/// Upper constant of the tour/MST ratio envelope, `300^4.5 * ln 300`.
pub fn ratio_envelope() -> f64 {
    300f64.powf(4.5) * 300f64.ln()
}

/// Same envelope with a base-2 logarithm, the larger of the two readings.
pub fn ratio_envelope_log2() -> f64 {
    300f64.powf(4.5) * 300f64.log2()
}

fn list(xs: &[usize]) -> String {
    if xs.is_empty() {
        return "-".to_string();
    }
    xs.iter().map(usize::to_string).collect::<Vec<_>>().join(",")
}

fn opt(x: Option<f64>) -> String {
    x.map_or_else(|| "-".to_string(), |v| v.to_string())
}

fn header(out: &mut String, cloud: &PointCloud, duplicates: usize, params: &SolveParams) {
    let fp = &params.flatness;
    let _ = writeln!(out, "points = {}", cloud.len());
    let _ = writeln!(out, "dim = {}", cloud.dim());
    let _ = writeln!(out, "duplicates_dropped = {duplicates}");
    let _ = writeln!(out, "r0 = {}", cloud.r0());
    let _ = writeln!(out, "c0 = {}", fp.c0);
    let _ = writeln!(out, "backend = {}", fp.backend.name());
    let grid_l = match fp.backend {
        Backend::Grid => fp.effective_grid_l(cloud.dim()).to_string(),
        Backend::Width => "-".to_string(),
    };
    let _ = writeln!(out, "grid_l = {grid_l}");
    let _ = writeln!(out, "threshold = {}", fp.threshold);
    let _ = writeln!(out, "mode = {}", params.mode.name());
    let _ = writeln!(out, "side_radius = {}", params.side_radius.name());
    let _ = writeln!(out, "flat_pairs_net = V_{{k+1}}");
    let _ = writeln!(out, "chain_points = V_{{k+1}}");
    let _ = writeln!(out, "envelope_log = ln");
}

fn level_line(l: &LevelRecord) -> String {
    let e = &l.edges;
    format!(
        "exponent={} net_size={} non_flat={} flat={} edges={} old={} flat_edges={} non_flat_edges={} bridge={} duplicates={} budget={} tight_budget={} connected={} overlaps={} alpha_max={} meter={}",
        l.exponent,
        l.net_size,
        list(&l.non_flat),
        list(&l.flat),
        e.total(),
        e.old,
        e.flat,
        e.non_flat,
        e.bridge,
        e.duplicates,
        2 * l.net_size,
        l.tight_budget,
        l.connected,
        l.overlaps,
        opt(l.alpha_max),
        l.meter.total(),
    )
}

fn trace_section(out: &mut String, trace: &RunTrace) {
    let _ = writeln!(out, "levels = {}", trace.levels.len());
    let _ = writeln!(out, "refinements = {}", trace.ladder.len().saturating_sub(1));
    let _ = writeln!(out, "max_edge_ratio = {}", trace.max_edge_ratio());
    let _ = writeln!(out, "overlaps_total = {}", trace.total_overlaps());
    let _ = writeln!(out, "repairs = {}", trace.deviations.len());
    for (i, d) in trace.deviations.iter().enumerate() {
        let _ = writeln!(out, "repair.{} = {d}", i + 1);
    }
    for (i, lvl) in trace.ladder.iter().enumerate() {
        let _ = writeln!(out, "ladder.{} = exponent={} net={} residual={}", i + 1, lvl.exponent, list(&lvl.net), list(&lvl.residual));
    }
    for l in &trace.levels {
        let _ = writeln!(out, "level.{} = {}", l.k, level_line(l));
    }
}

/// Metrics of a successful run.
pub fn render(cloud: &PointCloud, duplicates: usize, params: &SolveParams, sol: &Solution) -> String {
    let mut out = String::from("status = ok\n");
    header(&mut out, cloud, duplicates, params);
    let _ = writeln!(out, "tour_length = {}", sol.tour_length);
    let _ = writeln!(out, "mst_length = {}", sol.mst_length);
    let _ = writeln!(out, "ratio_tour_mst = {}", opt(sol.mst_ratio()));
    let lower = sol.tour_length >= 2.0 * sol.mst_length * (1.0 - 1e-9);
    let upper = sol.tour_length <= ratio_envelope() * sol.mst_length;
    let _ = writeln!(out, "ratio_lower_ok = {lower}");
    let _ = writeln!(out, "ratio_upper_ok = {upper}");
    let _ = writeln!(out, "tour_steps = {}", sol.tour.len());
    let _ = writeln!(out, "edges = {}", sol.graph.edges().len());
    for phase in Phase::ALL {
        let _ = writeln!(out, "meter.{} = {}", phase.name(), sol.meter.count(phase));
    }
    let _ = writeln!(out, "meter.total = {}", sol.meter.total());
    trace_section(&mut out, &sol.trace);
    for (i, e) in sol.graph.edges().iter().enumerate() {
        let src = e.source.map_or("-", |s| s.name());
        let _ = writeln!(out, "edge.{} = {} {} {src}", i + 1, e.a, e.b);
    }
    out
}

/// Metrics of a strict-mode run stopped by an invariant violation.
pub fn render_failure(
    cloud: &PointCloud,
    duplicates: usize,
    params: &SolveParams,
    level: usize,
    violation: &str,
    trace: &RunTrace,
) -> String {
    let mut out = String::from("status = violation\n");
    header(&mut out, cloud, duplicates, params);
    let _ = writeln!(out, "violation_level = {level}");
    let _ = writeln!(out, "violation = {violation}");
    trace_section(&mut out, trace);
    out
}

/// Wall-clock time per phase, in seconds.
pub fn render_times(trace: &RunTrace) -> String {
    let mut out = String::new();
    for phase in Phase::ALL {
        let _ = writeln!(out, "time.{} = {:.6}", phase.name(), trace.times.get(phase).as_secs_f64());
    }
    out
}

/// Parses a metrics document back into ordered key/value pairs.
pub fn parse(text: &str) -> Vec<(String, String)> {
    text.lines()
        .filter_map(|l| l.split_once(" = "))
        .map(|(k, v)| (k.to_string(), v.to_string()))
        .collect()
}

pub fn lookup<'a>(pairs: &'a [(String, String)], key: &str) -> Option<&'a str> {
    pairs.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
}

#[cfg(test)]
mod tests {
    use super::*;
    use atsp_core::solve;

    #[test]
    fn envelope_constants() {
        let base = 300f64.powi(4) * 300f64.sqrt();
        assert_eq!(ratio_envelope(), base * 300f64.ln());
        assert!((ratio_envelope() / 8.0e11 - 1.0).abs() < 0.01);
        assert!(ratio_envelope_log2() > ratio_envelope());
    }

    #[test]
    fn keys_parse_back() {
        let cloud = PointCloud::from_rows(&[vec![0.0], vec![1.0]]).unwrap();
        let params = SolveParams::default();
        let sol = solve(&cloud, &params).unwrap();
        let text = render(&cloud, 0, &params, &sol);
        let pairs = parse(&text);
        assert_eq!(lookup(&pairs, "tour_length"), Some("2"));
        assert_eq!(lookup(&pairs, "mst_length"), Some("1"));
        assert_eq!(lookup(&pairs, "ladder.2"), Some("exponent=3 net=0,1 residual=-"));
        assert_eq!(pairs.len(), text.lines().count());
    }
}
