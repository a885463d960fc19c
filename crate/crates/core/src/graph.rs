//! Combinatorial graphs over cloud indices, connected components and the
//! two-to-one tour.

use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};
use std::fmt;

use thiserror::Error;

use crate::geometry::{euclid, DistanceMeter, PointCloud};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("vertex {0} is not in the graph")]
    UnknownVertex(usize),
    #[error("graph is disconnected ({0} components)")]
    Disconnected(usize),
    #[error("invalid tour: {0}")]
    InvalidTour(String),
}

/// Which construction rule produced an edge.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum EdgeSource {
    /// Kept or subdivided from the previous scale.
    Old,
    /// Chained around a flat vertex.
    Flat,
    /// Flat pairs and stars around a non-flat vertex.
    NonFlat,
    /// Added by lenient-mode repair.
    Bridge,
}

impl EdgeSource {
    pub fn name(self) -> &'static str {
        match self {
            EdgeSource::Old => "e1",
            EdgeSource::Flat => "e2",
            EdgeSource::NonFlat => "e3",
            EdgeSource::Bridge => "bridge",
        }
    }
}

/// Undirected edge stored with `a < b`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Edge {
    pub a: usize,
    pub b: usize,
    pub source: Option<EdgeSource>,
}

impl Edge {
    pub fn key(&self) -> (usize, usize) {
        (self.a, self.b)
    }

    pub fn other(&self, v: usize) -> usize {
        if v == self.a {
            self.b
        } else {
            self.a
        }
    }
}

fn ordered(a: usize, b: usize) -> (usize, usize) {
    if a < b {
        (a, b)
    } else {
        (b, a)
    }
}

/// A simple undirected graph; edges keep their insertion order.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ScaleGraph {
    vertices: BTreeSet<usize>,
    edges: Vec<Edge>,
    index: HashSet<(usize, usize)>,
}

impl ScaleGraph {
    pub fn new(vertices: impl IntoIterator<Item = usize>) -> Self {
        ScaleGraph { vertices: vertices.into_iter().collect(), ..Default::default() }
    }

    pub fn add_vertex(&mut self, v: usize) -> bool {
        self.vertices.insert(v)
    }

    /// Adds `{a, b}`; returns `false` if the edge is already present.
    pub fn add_edge(&mut self, a: usize, b: usize, source: Option<EdgeSource>) -> Result<bool, GraphError> {
        if a == b {
            return Err(GraphError::SelfLoop(a));
        }
        for v in [a, b] {
            if !self.vertices.contains(&v) {
                return Err(GraphError::UnknownVertex(v));
            }
        }
        let (a, b) = ordered(a, b);
        if !self.index.insert((a, b)) {
            return Ok(false);
        }
        self.edges.push(Edge { a, b, source });
        Ok(true)
    }

    pub fn vertices(&self) -> impl Iterator<Item = usize> + '_ {
        self.vertices.iter().copied()
    }

    pub fn has_vertex(&self, v: usize) -> bool {
        self.vertices.contains(&v)
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn contains_edge(&self, a: usize, b: usize) -> bool {
        self.index.contains(&ordered(a, b))
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn count_by_source(&self, source: EdgeSource) -> usize {
        self.edges.iter().filter(|e| e.source == Some(source)).count()
    }

    fn adjacency(&self) -> HashMap<usize, Vec<usize>> {
        let mut adj: HashMap<usize, Vec<usize>> = self.vertices.iter().map(|&v| (v, Vec::new())).collect();
        for e in &self.edges {
            adj.get_mut(&e.a).expect("endpoint").push(e.b);
            adj.get_mut(&e.b).expect("endpoint").push(e.a);
        }
        adj
    }

    pub fn is_connected(&self) -> bool {
        components(self).len() <= 1
    }

    /// Sum of Euclidean edge lengths.
    pub fn total_length(&self, cloud: &PointCloud) -> f64 {
        self.edges.iter().map(|e| euclid(cloud.coords(e.a), cloud.coords(e.b))).fold(0.0, |a, d| a + d)
    }
}

/// Connected components by breadth-first search. Each component is sorted
/// ascending and components are ordered by their smallest vertex.
pub fn components(g: &ScaleGraph) -> Vec<Vec<usize>> {
    let adj = g.adjacency();
    let mut seen: HashSet<usize> = HashSet::with_capacity(g.vertex_count());
    let mut out = Vec::new();
    for start in g.vertices() {
        if !seen.insert(start) {
            continue;
        }
        let mut comp = vec![start];
        let mut queue = VecDeque::from([start]);
        while let Some(v) = queue.pop_front() {
            for &w in &adj[&v] {
                if seen.insert(w) {
                    comp.push(w);
                    queue.push_back(w);
                }
            }
        }
        comp.sort_unstable();
        out.push(comp);
    }
    out
}

/// A closed walk `a_1, ..., a_{2M+1}` using every edge once in each direction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwoToOneTour {
    sequence: Vec<usize>,
}

impl TwoToOneTour {
    pub fn sequence(&self) -> &[usize] {
        &self.sequence
    }

    pub fn len(&self) -> usize {
        self.sequence.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sequence.is_empty()
    }

    /// Checks the walk against `g`: closed, made of edges, every edge used once
    /// per direction, every vertex visited.
    pub fn verify(&self, g: &ScaleGraph) -> Result<(), GraphError> {
        let bad = |msg: String| Err(GraphError::InvalidTour(msg));
        let s = &self.sequence;
        if s.len() != 2 * g.edge_count() + 1 {
            return bad(format!("length {} for {} edges", s.len(), g.edge_count()));
        }
        if s.first() != s.last() {
            return bad("walk is not closed".into());
        }
        let mut used: HashSet<(usize, usize)> = HashSet::with_capacity(s.len());
        for w in s.windows(2) {
            if !g.contains_edge(w[0], w[1]) {
                return bad(format!("step {} -> {} is not an edge", w[0], w[1]));
            }
            if !used.insert((w[0], w[1])) {
                return bad(format!("step {} -> {} repeated", w[0], w[1]));
            }
        }
        let visited: HashSet<usize> = s.iter().copied().collect();
        if let Some(v) = g.vertices().find(|v| !visited.contains(v)) {
            return bad(format!("vertex {v} not visited"));
        }
        Ok(())
    }
}

impl fmt::Display for TwoToOneTour {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.sequence.iter().map(ToString::to_string).collect();
        write!(f, "[{}]", parts.join(", "))
    }
}

/// Builds the tour by splicing: start from `[v0]`, take the first unused edge
/// (in insertion order) touching the walk at `a_j` (the endpoint seen first)
/// and insert `w, a_j` right after the first occurrence of `a_j`.
pub fn two_to_one_tour(g: &ScaleGraph, v0: usize) -> Result<TwoToOneTour, GraphError> {
    if !g.has_vertex(v0) {
        return Err(GraphError::UnknownVertex(v0));
    }
    let parts = components(g).len();
    if parts > 1 {
        return Err(GraphError::Disconnected(parts));
    }
    let mut walk = vec![v0];
    let mut in_walk: HashSet<usize> = HashSet::from([v0]);
    let mut used = vec![false; g.edge_count()];
    let mut first_unused = 0;
    for _ in 0..g.edge_count() {
        while used[first_unused] {
            first_unused += 1;
        }
        let (idx, e) = g.edges()[first_unused..]
            .iter()
            .enumerate()
            .map(|(i, e)| (i + first_unused, e))
            .find(|(i, e)| !used[*i] && (in_walk.contains(&e.a) || in_walk.contains(&e.b)))
            .expect("connected graph always has an edge touching the walk");
        used[idx] = true;
        let pos_a = in_walk.contains(&e.a).then(|| walk.iter().position(|&x| x == e.a)).flatten();
        let pos_b = in_walk.contains(&e.b).then(|| walk.iter().position(|&x| x == e.b)).flatten();
        let (j, anchor) = match (pos_a, pos_b) {
            (Some(pa), Some(pb)) if pb < pa => (pb, e.b),
            (Some(pa), _) => (pa, e.a),
            (None, Some(pb)) => (pb, e.b),
            (None, None) => unreachable!("edge touches the walk"),
        };
        let w = e.other(anchor);
        walk.splice(j + 1..j + 1, [w, anchor]);
        in_walk.insert(w);
    }
    Ok(TwoToOneTour { sequence: walk })
}

/// Sum of the Euclidean lengths of consecutive steps.
pub fn tour_length(tour: &TwoToOneTour, cloud: &PointCloud) -> f64 {
    tour.sequence.windows(2).map(|w| euclid(cloud.coords(w[0]), cloud.coords(w[1]))).fold(0.0, |a, d| a + d)
}

pub(crate) fn tour_length_metered(tour: &TwoToOneTour, cloud: &PointCloud, meter: &mut DistanceMeter) -> f64 {
    // fold from +0.0: an empty float sum is -0.0
    tour.sequence.windows(2).map(|w| meter.measure(cloud.coords(w[0]), cloud.coords(w[1]))).fold(0.0, |a, d| a + d)
}
