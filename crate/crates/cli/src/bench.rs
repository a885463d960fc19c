//! Size sweeps and the fitted growth exponent of the distance meter.

use std::fmt::Write;

use atsp_core::pipeline::{PhaseTimes, PipelineError};
use atsp_core::{solve, DistanceMeter, Phase, SolveParams};
use thiserror::Error;

use crate::generate::{Family, GenerateError};

/// Accepted slope range for the sharpness family.
pub const SHARPNESS_SLOPE: (f64, f64) = (2.8, 3.2);

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("need at least 3 sizes, got {0}")]
    TooFewSizes(usize),
    #[error("sizes must be strictly increasing")]
    Unsorted,
    #[error("n = {n}: {source}")]
    Generate { n: usize, source: GenerateError },
    #[error("n = {n}: {source}")]
    Solve { n: usize, source: PipelineError },
    #[error("fitted slope {slope:.4} outside [{lo}, {hi}]")]
    Slope { slope: f64, lo: f64, hi: f64 },
    #[error("slope fit needs positive samples")]
    Degenerate,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BenchRecord {
    pub n: usize,
    pub meter: DistanceMeter,
    pub times: PhaseTimes,
    pub tour_length: f64,
    pub mst_length: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Sweep {
    pub family: Family,
    pub records: Vec<BenchRecord>,
    /// Slope of log(net refinement meter) against log(n).
    pub slope_net: f64,
    /// Slope of log(total meter) against log(n).
    pub slope_total: f64,
}

/// Least-squares slope of `ln y` against `ln x`.
pub fn loglog_slope(samples: &[(f64, f64)]) -> Result<f64, BenchError> {
    if samples.len() < 2 || samples.iter().any(|&(x, y)| !(x > 0.0 && y > 0.0)) {
        return Err(BenchError::Degenerate);
    }
    let pts: Vec<(f64, f64)> = samples.iter().map(|&(x, y)| (x.ln(), y.ln())).collect();
    let m = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / m;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / m;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    if sxx == 0.0 {
        return Err(BenchError::Degenerate);
    }
    Ok(sxy / sxx)
}

fn run_one(family: Family, n: usize, seed: u64, params: &SolveParams) -> Result<BenchRecord, BenchError> {
    let cloud = family.generate(n, seed.wrapping_add(n as u64)).map_err(|source| BenchError::Generate { n, source })?;
    let sol = solve(&cloud, params).map_err(|source| BenchError::Solve { n, source })?;
    Ok(BenchRecord { n, meter: sol.meter, times: sol.trace.times, tour_length: sol.tour_length, mst_length: sol.mst_length })
}

#[cfg(feature = "parallel")]
fn run_all(family: Family, sizes: &[usize], seed: u64, params: &SolveParams) -> Vec<Result<BenchRecord, BenchError>> {
    use rayon::prelude::*;
    if params.flatness.execution.is_concurrent() {
        return sizes.par_iter().map(|&n| run_one(family, n, seed, params)).collect();
    }
    sizes.iter().map(|&n| run_one(family, n, seed, params)).collect()
}

#[cfg(not(feature = "parallel"))]
fn run_all(family: Family, sizes: &[usize], seed: u64, params: &SolveParams) -> Vec<Result<BenchRecord, BenchError>> {
    sizes.iter().map(|&n| run_one(family, n, seed, params)).collect()
}

/// Solves one instance per size (sizes may run concurrently; records come
/// back in size order) and fits the growth exponent.
pub fn sweep(family: Family, sizes: &[usize], seed: u64, params: &SolveParams) -> Result<Sweep, BenchError> {
    if sizes.len() < 3 {
        return Err(BenchError::TooFewSizes(sizes.len()));
    }
    if sizes.windows(2).any(|w| w[0] >= w[1]) {
        return Err(BenchError::Unsorted);
    }
    let records = run_all(family, sizes, seed, params).into_iter().collect::<Result<Vec<_>, _>>()?;
    let net: Vec<(f64, f64)> =
        records.iter().map(|r| (r.n as f64, r.meter.count(Phase::NetRefinement) as f64)).collect();
    let total: Vec<(f64, f64)> = records.iter().map(|r| (r.n as f64, r.meter.total() as f64)).collect();
    Ok(Sweep { family, slope_net: loglog_slope(&net)?, slope_total: loglog_slope(&total)?, records })
}

impl Sweep {
    /// For the sharpness family, the net refinement slope must sit in
    /// [`SHARPNESS_SLOPE`]; other families are reported without a check.
    pub fn check(&self) -> Result<(), BenchError> {
        let (lo, hi) = SHARPNESS_SLOPE;
        if self.family == Family::Sharpness && !(lo..=hi).contains(&self.slope_net) {
            return Err(BenchError::Slope { slope: self.slope_net, lo, hi });
        }
        Ok(())
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "family = {}", self.family.name());
        let _ = write!(out, "{:>6}", "n");
        for p in Phase::ALL {
            let _ = write!(out, " {:>14}", p.name());
        }
        let _ = writeln!(out, " {:>14} {:>10}", "total", "seconds");
        for r in &self.records {
            let _ = write!(out, "{:>6}", r.n);
            for p in Phase::ALL {
                let _ = write!(out, " {:>14}", r.meter.count(p));
            }
            let secs: f64 = Phase::ALL.iter().map(|&p| r.times.get(p).as_secs_f64()).sum();
            let _ = writeln!(out, " {:>14} {:>10.3}", r.meter.total(), secs);
        }
        let _ = writeln!(out, "slope_net_refinement = {:.4}", self.slope_net);
        let _ = writeln!(out, "slope_total = {:.4}", self.slope_total);
        out
    }
}
