//! Data-parallel helpers with a sequential fallback.
//!
//! With the `parallel` feature disabled, [`Execution::Parallel`] silently runs
//! sequentially. Results are always returned in input order and per-task
//! meters are summed, so output never depends on scheduling.

use crate::geometry::{DistanceMeter, Phase};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum Execution {
    Sequential,
    #[default]
    Parallel,
}

impl Execution {
    /// Whether this build can actually run work concurrently.
    pub fn is_concurrent(self) -> bool {
        cfg!(feature = "parallel") && self == Execution::Parallel
    }
}

/// Maps `f` over `items`, giving each task its own meter in `phase`.
pub fn map_metered<T, R, F>(exec: Execution, items: &[T], phase: Phase, f: F) -> (Vec<R>, DistanceMeter)
where
    T: Sync,
    R: Send,
    F: Fn(&T, &mut DistanceMeter) -> R + Sync + Send,
{
    let run = |item: &T| {
        let mut meter = DistanceMeter::in_phase(phase);
        let out = f(item, &mut meter);
        (out, meter)
    };
    let pairs: Vec<(R, DistanceMeter)> = if exec.is_concurrent() {
        par_collect(items, run)
    } else {
        items.iter().map(run).collect()
    };
    let mut total = DistanceMeter::in_phase(phase);
    let mut out = Vec::with_capacity(pairs.len());
    for (r, m) in pairs {
        total += m;
        out.push(r);
    }
    (out, total)
}

/// Order-preserving map without metering.
pub fn map<T, R, F>(exec: Execution, items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    if exec.is_concurrent() {
        par_collect(items, f)
    } else {
        items.iter().map(f).collect()
    }
}

#[cfg(feature = "parallel")]
fn par_collect<T: Sync, R: Send, F: Fn(&T) -> R + Sync + Send>(items: &[T], f: F) -> Vec<R> {
    use rayon::prelude::*;
    items.par_iter().map(f).collect()
}

#[cfg(not(feature = "parallel"))]
fn par_collect<T: Sync, R: Send, F: Fn(&T) -> R + Sync + Send>(items: &[T], f: F) -> Vec<R> {
    items.iter().map(f).collect()
}
