//! The multiscale construction: nets at dyadic scales, a connected graph per
//! scale with `O(|V_k|)` edges, and the final two-to-one tour.

mod edges;
mod trace;

use std::collections::HashMap;
use std::time::Instant;

use thiserror::Error;

pub use edges::{edges_from_flat, edges_from_nonflat, edges_from_old, Claim, EdgeSet};
pub use trace::{EdgeCounts, LevelRecord, PhaseTimes, RunTrace};

use crate::baselines::mst_length;
use crate::exec::map_metered;
use crate::flatness::{flatness_at, FlatnessError, FlatnessParams, FlatnessResult};
use crate::geometry::{DistanceMeter, Phase, PointCloud};
use crate::graph::{components, tour_length_metered, two_to_one_tour, EdgeSource, GraphError, ScaleGraph, TwoToOneTour};
use crate::nets::{dyadic_scale, refine_net, NetError, NetLevel};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum Mode {
    /// Any invariant violation aborts the run.
    #[default]
    Strict,
    /// Disconnected graphs are bridged and budget overruns logged.
    Lenient,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::Strict => "strict",
            Mode::Lenient => "lenient",
        }
    }
}

/// Radius of the ball in which a flat vertex looks for old neighbours on
/// either side of its line, as a fraction of `c0 s`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum SideRadius {
    /// `c0 s / 2`, the long-edge cutoff: an old edge is either subdivided or
    /// leaves its flat endpoint's side open for chaining.
    #[default]
    Half,
    /// `c0 s`, the flatness neighbourhood itself. Can leave new points next to
    /// edges of length in `[c0 s / 2, c0 s)` unconnected.
    Full,
}

impl SideRadius {
    pub fn factor(self) -> f64 {
        match self {
            SideRadius::Half => 0.5,
            SideRadius::Full => 1.0,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            SideRadius::Half => "half",
            SideRadius::Full => "full",
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct SolveParams {
    pub flatness: FlatnessParams,
    pub mode: Mode,
    pub side_radius: SideRadius,
}

/// The scale `2^-exponent R0` of one net level. Flatness results remember the
/// scale they were computed at so that levels cannot be mixed up.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DyadicScale {
    exponent: u32,
    value: f64,
}

impl DyadicScale {
    pub fn new(r0: f64, exponent: u32) -> Self {
        DyadicScale { exponent, value: dyadic_scale(r0, exponent) }
    }

    pub fn of(level: &NetLevel, r0: f64) -> Self {
        Self::new(r0, level.exponent)
    }

    pub fn exponent(&self) -> u32 {
        self.exponent
    }

    pub fn value(&self) -> f64 {
        self.value
    }
}

/// `alpha_{v, X'}` and its line for every `v` of one net, at one scale.
#[derive(Clone, Debug, PartialEq)]
pub struct FlatnessCache {
    scale: DyadicScale,
    results: HashMap<usize, FlatnessResult>,
}

impl FlatnessCache {
    pub fn scale(&self) -> DyadicScale {
        self.scale
    }

    pub fn get(&self, v: usize) -> Option<&FlatnessResult> {
        self.results.get(&v)
    }

    fn expect(&self, v: usize) -> &FlatnessResult {
        self.results.get(&v).expect("every vertex of the classified net has a flatness entry")
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Violation {
    Budget { edges: usize, limit: usize },
    Disconnected { components: usize },
    NoProgress,
    Tour(String),
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Violation::Budget { edges, limit } => write!(f, "{edges} edges exceed the budget of {limit}"),
            Violation::Disconnected { components } => write!(f, "graph has {components} components"),
            Violation::NoProgress => f.write_str("net did not grow"),
            Violation::Tour(msg) => write!(f, "tour contract broken: {msg}"),
        }
    }
}

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error("empty point cloud")]
    EmptyCloud,
    #[error("invalid parameters: {0}")]
    BadParams(String),
    #[error("no lookahead net; the state is terminal")]
    MissingLookahead,
    #[error(transparent)]
    Net(#[from] NetError),
    #[error(transparent)]
    Flatness(#[from] FlatnessError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("invariant violated at level {level}: {violation}")]
    Invariant { level: usize, violation: Violation, trace: Box<RunTrace> },
}

/// Vertices of `V_k` split by flatness against the next net.
#[derive(Clone, Debug, PartialEq)]
pub struct Classification {
    pub non_flat: Vec<usize>,
    pub flat: Vec<usize>,
    pub cache: FlatnessCache,
}

impl Classification {
    fn empty(scale: DyadicScale) -> Self {
        Classification { non_flat: Vec::new(), flat: Vec::new(), cache: FlatnessCache { scale, results: HashMap::new() } }
    }
}

/// Everything known at level `k`.
#[derive(Clone, Debug, PartialEq)]
pub struct StepState {
    pub k: usize,
    pub current: NetLevel,
    /// `V_{k+1}`; `None` once `V_k = V`.
    pub lookahead: Option<NetLevel>,
    /// `alpha_{v, V_{k+1}}` for `v` in `V_k`, with families.
    pub classification: Classification,
    pub graph: ScaleGraph,
}

impl StepState {
    pub fn is_terminal(&self) -> bool {
        self.lookahead.is_none()
    }

    pub fn non_flat(&self) -> &[usize] {
        &self.classification.non_flat
    }

    pub fn flat(&self) -> &[usize] {
        &self.classification.flat
    }
}

fn validate(cloud: &PointCloud, params: &SolveParams) -> Result<(), PipelineError> {
    if cloud.is_empty() {
        return Err(PipelineError::EmptyCloud);
    }
    let f = &params.flatness;
    if !(f.c0 > 0.0 && f.c0.is_finite()) {
        return Err(PipelineError::BadParams(format!("c0 must be positive, got {}", f.c0)));
    }
    if !(f.threshold > 0.0 && f.threshold < 1.0) {
        return Err(PipelineError::BadParams(format!("threshold must lie in (0, 1), got {}", f.threshold)));
    }
    Ok(())
}

/// Classifies every `v` of `level` by `alpha_{v, lookahead}` at the lookahead scale.
pub fn classify_vertices(
    cloud: &PointCloud,
    level: &NetLevel,
    lookahead: &NetLevel,
    params: &SolveParams,
    meter: &mut DistanceMeter,
) -> Result<Classification, PipelineError> {
    let scale = DyadicScale::of(lookahead, cloud.r0());
    let fp = &params.flatness;
    let mut ids = level.net.clone();
    ids.sort_unstable();
    let (results, m) = map_metered(fp.execution, &ids, Phase::Flatness, |&v, m| {
        flatness_at(cloud, v, &lookahead.net, scale.value(), fp, m)
    });
    *meter += m;
    let mut out = Classification::empty(scale);
    for (v, r) in ids.into_iter().zip(results) {
        let r = r?;
        if fp.is_flat(r.alpha) {
            out.flat.push(v);
        } else {
            out.non_flat.push(v);
        }
        out.cache.results.insert(v, r);
    }
    Ok(out)
}

fn refine_and_classify(
    cloud: &PointCloud,
    level: &NetLevel,
    params: &SolveParams,
    meter: &mut DistanceMeter,
    trace: &mut RunTrace,
) -> Result<(Option<NetLevel>, Classification), PipelineError> {
    let here = DyadicScale::of(level, cloud.r0());
    if level.is_complete() {
        return Ok((None, Classification::empty(here)));
    }
    let t = Instant::now();
    let (_, next) = refine_net(cloud, level, here.value(), meter)?;
    trace.times.add(Phase::NetRefinement, t.elapsed());
    let t = Instant::now();
    let classes = classify_vertices(cloud, level, &next, params, meter)?;
    trace.times.add(Phase::Flatness, t.elapsed());
    Ok((Some(next), classes))
}

/// Level 1: `V_1 = {v_1}`, no edges, and (unless `V_1 = V`) the second net
/// with the classification of `v_1`.
pub fn step_one(cloud: &PointCloud, params: &SolveParams, meter: &mut DistanceMeter) -> Result<StepState, PipelineError> {
    step_one_traced(cloud, params, meter, &mut RunTrace::default())
}

fn step_one_traced(
    cloud: &PointCloud,
    params: &SolveParams,
    meter: &mut DistanceMeter,
    trace: &mut RunTrace,
) -> Result<StepState, PipelineError> {
    validate(cloud, params)?;
    let current = NetLevel::initial(cloud)?;
    let (lookahead, classification) = if cloud.r0() == 0.0 {
        (None, Classification::empty(DyadicScale::of(&current, 0.0)))
    } else {
        refine_and_classify(cloud, &current, params, meter, trace)?
    };
    let graph = ScaleGraph::new(current.net.iter().copied());
    Ok(StepState { k: 1, current, lookahead, classification, graph })
}

/// Unions the three edge sources into `G_{k+1}` and checks the budget and
/// connectivity. In lenient mode violations are repaired and logged instead.
#[allow(clippy::too_many_arguments)]
pub fn assemble_step(
    cloud: &PointCloud,
    state: &StepState,
    next: &NetLevel,
    sources: [&EdgeSet; 3],
    params: &SolveParams,
    meter: &mut DistanceMeter,
    trace: &mut RunTrace,
) -> Result<(ScaleGraph, LevelRecord), PipelineError> {
    let level = state.k + 1;
    let fail = |violation: Violation, trace: &RunTrace| PipelineError::Invariant {
        level,
        violation,
        trace: Box::new(trace.clone()),
    };
    let (prev, now) = (state.current.net.len(), next.net.len());
    if now <= prev {
        return Err(fail(Violation::NoProgress, trace));
    }
    let mut g = ScaleGraph::new(next.net.iter().copied());
    let mut counts = EdgeCounts::default();
    for (set, tag) in sources.iter().zip([EdgeSource::Old, EdgeSource::Flat, EdgeSource::NonFlat]) {
        for &(a, b) in &set.edges {
            if g.add_edge(a, b, Some(tag))? {
                match tag {
                    EdgeSource::Old => counts.old += 1,
                    EdgeSource::Flat => counts.flat += 1,
                    _ => counts.non_flat += 1,
                }
            } else {
                counts.duplicates += 1;
            }
        }
    }

    let mut claims: HashMap<usize, usize> = HashMap::new();
    for set in sources {
        for (_, pts) in &set.claimed {
            for &p in pts {
                *claims.entry(p).or_default() += 1;
            }
        }
    }
    let overlaps = claims.values().filter(|&&c| c > 1).count();

    let limit = 2 * now;
    if g.edge_count() > limit {
        let v = Violation::Budget { edges: g.edge_count(), limit };
        match params.mode {
            Mode::Strict => return Err(fail(v, trace)),
            Mode::Lenient => trace.deviations.push(format!("level {level}: {v}")),
        }
    }

    let mut parts = components(&g);
    if parts.len() > 1 {
        match params.mode {
            Mode::Strict => return Err(fail(Violation::Disconnected { components: parts.len() }, trace)),
            Mode::Lenient => {
                meter.with_phase(Phase::EdgeAssembly, |m| {
                    while parts.len() > 1 {
                        let (a, b, d) = shortest_bridge(cloud, &parts, m);
                        g.add_edge(a, b, Some(EdgeSource::Bridge)).expect("bridge joins two vertices of the net");
                        trace.deviations.push(format!(
                            "level {level}: {} components, bridged {a}-{b} (length {d})",
                            parts.len()
                        ));
                        counts.bridge += 1;
                        parts = components(&g);
                    }
                });
            }
        }
    }

    let record = LevelRecord {
        k: level,
        exponent: next.exponent,
        net_size: now,
        non_flat: Vec::new(),
        flat: Vec::new(),
        edges: counts,
        connected: true,
        tight_budget: g.edge_count() <= prev + 2 * (now - prev),
        overlaps,
        alpha_max: None,
        meter: *meter,
    };
    Ok((g, record))
}

fn shortest_bridge(cloud: &PointCloud, parts: &[Vec<usize>], meter: &mut DistanceMeter) -> (usize, usize, f64) {
    let mut best = (usize::MAX, usize::MAX, f64::INFINITY);
    for (i, pi) in parts.iter().enumerate() {
        for pj in &parts[i + 1..] {
            for &a in pi {
                for &b in pj {
                    let d = meter.measure(cloud.coords(a), cloud.coords(b));
                    if d < best.2 {
                        best = (a.min(b), a.max(b), d);
                    }
                }
            }
        }
    }
    best
}

/// Advances from level `k` to level `k + 1`.
pub fn step(
    cloud: &PointCloud,
    state: &StepState,
    params: &SolveParams,
    meter: &mut DistanceMeter,
    trace: &mut RunTrace,
) -> Result<StepState, PipelineError> {
    let next = state.lookahead.as_ref().ok_or(PipelineError::MissingLookahead)?;
    let (after, classification) = refine_and_classify(cloud, next, params, meter, trace)?;

    let t = Instant::now();
    let e1 = edges_from_old(cloud, state, params, meter)?;
    let e2 = edges_from_flat(cloud, state, params, meter)?;
    let e3 = edges_from_nonflat(cloud, state, &e1, &e2, params, meter)?;
    let (graph, record) = assemble_step(cloud, state, next, [&e1, &e2, &e3], params, meter, trace)?;
    trace.times.add(Phase::EdgeAssembly, t.elapsed());
    trace.levels.push(record);

    Ok(StepState { k: state.k + 1, current: next.clone(), lookahead: after, classification, graph })
}

/// Result of a full run.
#[derive(Clone, Debug, PartialEq)]
pub struct Solution {
    pub graph: ScaleGraph,
    pub tour: TwoToOneTour,
    pub tour_length: f64,
    pub mst_length: f64,
    pub meter: DistanceMeter,
    pub trace: RunTrace,
}

impl Solution {
    /// `tour_length / mst_length`, undefined for a single point.
    pub fn mst_ratio(&self) -> Option<f64> {
        (self.mst_length > 0.0).then(|| self.tour_length / self.mst_length)
    }
}

fn annotate(record: &mut LevelRecord, state: &StepState) {
    let results = state.classification.cache.results.values();
    record.alpha_max = results.map(|r| r.alpha).reduce(f64::max);
    record.non_flat = state.classification.non_flat.clone();
    record.flat = state.classification.flat.clone();
}

/// Runs every level until `V_m = V`, then walks `G_m` from the first point.
pub fn solve(cloud: &PointCloud, params: &SolveParams) -> Result<Solution, PipelineError> {
    let mut meter = DistanceMeter::new();
    let mut trace = RunTrace::default();
    let mut state = step_one_traced(cloud, params, &mut meter, &mut trace)?;
    let mut first = LevelRecord {
        k: 1,
        exponent: state.current.exponent,
        net_size: 1,
        non_flat: Vec::new(),
        flat: Vec::new(),
        edges: EdgeCounts::default(),
        connected: true,
        tight_budget: true,
        overlaps: 0,
        alpha_max: None,
        meter,
    };
    annotate(&mut first, &state);
    trace.levels.push(first);
    trace.ladder.push(state.current.clone());
    while !state.is_terminal() {
        state = step(cloud, &state, params, &mut meter, &mut trace)?;
        annotate(trace.levels.last_mut().expect("step pushed a record"), &state);
        trace.ladder.push(state.current.clone());
    }

    let t = Instant::now();
    let tour = two_to_one_tour(&state.graph, 0)?;
    let tour_length = meter.with_phase(Phase::Tour, |m| tour_length_metered(&tour, cloud, m));
    trace.times.add(Phase::Tour, t.elapsed());
    if let Err(e) = tour.verify(&state.graph) {
        let level = state.k;
        return Err(PipelineError::Invariant { level, violation: Violation::Tour(e.to_string()), trace: Box::new(trace) });
    }
    if let Some(last) = trace.levels.last_mut() {
        last.meter = meter;
    }
    Ok(Solution { graph: state.graph, tour, tour_length, mst_length: mst_length(cloud), meter, trace })
}
