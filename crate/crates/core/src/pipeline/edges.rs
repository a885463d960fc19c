//! The three sources of edges for `G_{k+1}`.

use std::collections::HashSet;

use super::{DyadicScale, FlatnessCache, PipelineError, SideRadius, SolveParams, StepState};
use crate::exec::map_metered;
use crate::flatness::{flat_pairs, orient_coords, OrientedFrame};
use crate::geometry::{ball_indices, Ball, DistanceMeter, Phase, PointCloud};
use crate::graph::{components, ScaleGraph};
use crate::nets::NetLevel;

/// Whose new points a set of edges was built around.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Claim {
    /// A subdivided old edge.
    Edge(usize, usize),
    /// A flat vertex's chains.
    Flat(usize),
    /// A non-flat vertex's flat pairs and star.
    NonFlat(usize),
}

/// Edges from one source, in construction order, with the points each rule
/// claimed (`V_{k+1}(e)`, `V_{k+1}(u)`).
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct EdgeSet {
    pub edges: Vec<(usize, usize)>,
    pub claimed: Vec<(Claim, Vec<usize>)>,
}

impl EdgeSet {
    fn endpoints(&self) -> impl Iterator<Item = usize> + '_ {
        self.edges.iter().flat_map(|&(a, b)| [a, b])
    }
}

fn context<'s>(cloud: &PointCloud, state: &'s StepState) -> Result<(&'s NetLevel, DyadicScale, &'s FlatnessCache), PipelineError> {
    let next = state.lookahead.as_ref().ok_or(PipelineError::MissingLookahead)?;
    let scale = DyadicScale::of(next, cloud.r0());
    let cache = &state.classification.cache;
    assert_eq!(cache.scale(), scale, "flatness cache belongs to a different level");
    Ok((next, scale, cache))
}

fn chain(points: &[usize], end: usize, out: &mut Vec<(usize, usize)>) {
    for w in points.windows(2) {
        out.push((w[0], w[1]));
    }
    if let Some(&last) = points.last() {
        out.push((last, end));
    }
}

fn sort_along(frame: &OrientedFrame, cloud: &PointCloud, pts: &mut [usize]) {
    pts.sort_by(|&a, &b| frame.compare(cloud.coords(a), cloud.coords(b)));
}

fn merge_sorted(a: &[usize], b: &[usize]) -> Vec<usize> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let next = match (a.get(i), b.get(j)) {
            (Some(&x), Some(&y)) if x == y => {
                i += 1;
                j += 1;
                x
            }
            (Some(&x), Some(&y)) if x < y => {
                i += 1;
                x
            }
            (Some(&x), None) => {
                i += 1;
                x
            }
            (_, Some(&y)) => {
                j += 1;
                y
            }
            (None, None) => unreachable!(),
        };
        out.push(next);
    }
    out
}

/// Keeps long or doubly non-flat edges of `G_k`; subdivides the rest along the
/// line of a flat endpoint through the new points lying between them.
pub fn edges_from_old(
    cloud: &PointCloud,
    state: &StepState,
    params: &SolveParams,
    meter: &mut DistanceMeter,
) -> Result<EdgeSet, PipelineError> {
    let (_, scale, cache) = context(cloud, state)?;
    let fp = &params.flatness;
    let long = fp.c0 * scale.value() * 0.5;
    let old: Vec<(usize, usize)> = state.graph.edges().iter().map(|e| (e.a, e.b)).collect();
    let (parts, m) = map_metered(fp.execution, &old, Phase::EdgeAssembly, |&(u, v), m| {
        let len = m.measure(cloud.coords(u), cloud.coords(v));
        let (ru, rv) = (cache.expect(u), cache.expect(v));
        let (flat_u, flat_v) = (fp.is_flat(ru.alpha), fp.is_flat(rv.alpha));
        if len >= long || !(flat_u || flat_v) {
            return (vec![(u, v)], None);
        }
        let (p, q, rp, rq) = if flat_u { (u, v, ru, rv) } else { (v, u, rv, ru) };
        let mut frame = orient_coords(&rp.line, cloud.coords(p));
        if frame.first(cloud.coords(q)) < 0.0 {
            frame = frame.reversed();
        }
        let end = frame.first(cloud.coords(q));
        let mut between: Vec<usize> = merge_sorted(&rp.neighborhood, &rq.neighborhood)
            .into_iter()
            .filter(|&w| w != p && w != q)
            .filter(|&w| {
                let c = frame.first(cloud.coords(w));
                0.0 < c && c < end
            })
            .collect();
        sort_along(&frame, cloud, &mut between);
        let mut edges = Vec::with_capacity(between.len() + 1);
        let mut start = vec![p];
        start.extend_from_slice(&between);
        chain(&start, q, &mut edges);
        (edges, Some(((u, v), between)))
    });
    *meter += m;
    let mut out = EdgeSet::default();
    for (edges, claim) in parts {
        out.edges.extend(edges);
        if let Some(((u, v), pts)) = claim {
            out.claimed.push((Claim::Edge(u, v), pts));
        }
    }
    Ok(out)
}

/// Around each flat vertex: on every side of its line with no old vertex
/// within the side radius, chain the new points within `2 s` toward the vertex.
pub fn edges_from_flat(
    cloud: &PointCloud,
    state: &StepState,
    params: &SolveParams,
    meter: &mut DistanceMeter,
) -> Result<EdgeSet, PipelineError> {
    let (next, scale, cache) = context(cloud, state)?;
    let fp = &params.flatness;
    let old = state.current.mask(cloud.len());
    let reach = 2.0 * scale.value();
    let side = params.side_radius.factor() * fp.c0 * scale.value();
    let half = params.side_radius != SideRadius::Full;
    let (parts, m) = map_metered(fp.execution, state.flat(), Phase::EdgeAssembly, |&u, m| {
        let r = cache.expect(u);
        let frame = orient_coords(&r.line, cloud.coords(u));
        let (mut left, mut right) = (false, false);
        for &w in r.neighborhood.iter().filter(|&&w| w != u && old[w]) {
            if half && m.measure(cloud.coords(u), cloud.coords(w)) >= side {
                continue;
            }
            let c = frame.first(cloud.coords(w));
            left |= c < 0.0;
            right |= c > 0.0;
        }
        let mut edges = Vec::new();
        let mut claimed = Vec::new();
        if left && right {
            return (edges, claimed);
        }
        let near = ball_indices(cloud, &next.net, u, reach, Ball::Closed, m);
        if !left {
            let mut side: Vec<usize> = near.iter().copied().filter(|&w| frame.first(cloud.coords(w)) < 0.0).collect();
            sort_along(&frame, cloud, &mut side);
            chain(&side, u, &mut edges);
            claimed.extend(side.iter().copied().filter(|&w| !old[w]));
        }
        if !right {
            let mut side: Vec<usize> = near.iter().copied().filter(|&w| frame.first(cloud.coords(w)) > 0.0).collect();
            sort_along(&frame, cloud, &mut side);
            side.reverse();
            chain(&side, u, &mut edges);
            claimed.extend(side.iter().copied().filter(|&w| !old[w]));
        }
        (edges, claimed)
    });
    *meter += m;
    let mut out = EdgeSet::default();
    for (&u, (edges, claimed)) in state.flat().iter().zip(parts) {
        out.edges.extend(edges);
        if !claimed.is_empty() {
            out.claimed.push((Claim::Flat(u), claimed));
        }
    }
    Ok(out)
}

/// Around each non-flat vertex `u` (ascending): the points of
/// `B(u, c0 s) ∩ V_{k+1}` not yet on any edge get their flat pairs, and the
/// resulting pieces are joined to `u` by a star.
pub fn edges_from_nonflat(
    cloud: &PointCloud,
    state: &StepState,
    old: &EdgeSet,
    flat: &EdgeSet,
    params: &SolveParams,
    meter: &mut DistanceMeter,
) -> Result<EdgeSet, PipelineError> {
    let (next, scale, cache) = context(cloud, state)?;
    let fp = &params.flatness;
    let mut covered: HashSet<usize> = old.endpoints().chain(flat.endpoints()).collect();
    let mut out = EdgeSet::default();
    for &hub in state.non_flat() {
        let own: Vec<usize> = cache.expect(hub).neighborhood.iter().copied().filter(|w| !covered.contains(w)).collect();
        if own.is_empty() {
            continue;
        }
        let mut pairs = Vec::new();
        let mut seen = HashSet::new();
        for &w in &own {
            for p in flat_pairs(cloud, w, &next.net, &next.net, scale.value(), 0, fp, meter)? {
                if seen.insert(p) {
                    pairs.push((p.0, p.1));
                }
            }
        }
        let mut aux = ScaleGraph::new(std::iter::once(hub).chain(own.iter().copied()));
        for &(a, b) in &pairs {
            aux.add_vertex(a);
            aux.add_vertex(b);
            aux.add_edge(a, b, None)?;
        }
        let mut edges = pairs;
        for comp in components(&aux) {
            if !comp.contains(&hub) {
                edges.push((hub, comp[0]));
            }
        }
        for &(a, b) in &edges {
            covered.insert(a);
            covered.insert(b);
        }
        out.edges.extend(edges);
        out.claimed.push((Claim::NonFlat(hub), own));
    }
    Ok(out)
}
