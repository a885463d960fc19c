use std::time::Duration;

use crate::geometry::{DistanceMeter, Phase};
use crate::nets::NetLevel;

/// Edge counts of one graph `G_k`, split by construction rule.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct EdgeCounts {
    pub old: usize,
    pub flat: usize,
    pub non_flat: usize,
    pub bridge: usize,
    /// Candidate edges dropped because an earlier rule already produced them.
    pub duplicates: usize,
}

impl EdgeCounts {
    pub fn total(&self) -> usize {
        self.old + self.flat + self.non_flat + self.bridge
    }
}

/// What happened at one level `k` of the construction.
#[derive(Clone, Debug, PartialEq)]
pub struct LevelRecord {
    pub k: usize,
    pub exponent: u32,
    pub net_size: usize,
    /// Vertices of `V_k` classified as non-flat / flat (ascending). Empty on
    /// the last level, which is never classified.
    pub non_flat: Vec<usize>,
    pub flat: Vec<usize>,
    pub edges: EdgeCounts,
    pub connected: bool,
    /// `|E_k| <= |V_{k-1}| + 2|V_k \ V_{k-1}|`, the sharper of the two budgets.
    pub tight_budget: bool,
    /// Points claimed by more than one subdivision, chain or star.
    pub overlaps: usize,
    pub alpha_max: Option<f64>,
    pub meter: DistanceMeter,
}

/// Wall-clock time spent per phase.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct PhaseTimes([Duration; 4]);

impl PhaseTimes {
    pub fn add(&mut self, phase: Phase, d: Duration) {
        self.0[Phase::ALL.iter().position(|p| *p == phase).expect("known phase")] += d;
    }

    pub fn get(&self, phase: Phase) -> Duration {
        self.0[Phase::ALL.iter().position(|p| *p == phase).expect("known phase")]
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct RunTrace {
    pub ladder: Vec<NetLevel>,
    pub levels: Vec<LevelRecord>,
    /// Lenient-mode repairs and other departures from the strict construction.
    pub deviations: Vec<String>,
    pub times: PhaseTimes,
}

impl RunTrace {
    pub fn max_edge_ratio(&self) -> f64 {
        self.levels
            .iter()
            .map(|l| l.edges.total() as f64 / l.net_size as f64)
            .fold(0.0, f64::max)
    }

    pub fn total_overlaps(&self) -> usize {
        self.levels.iter().map(|l| l.overlaps).sum()
    }
}
