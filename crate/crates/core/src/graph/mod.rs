//! Graph data model shared by the separator, division and shortest-path code.
//!
//! A [`Graph`] is either directed (integer-weighted arcs, parallel arcs allowed)
//! or undirected (a canonical, deduplicated edge list with `u < v`, sorted).
//! Separators and divisions work on the undirected support of a graph; the
//! shortest-path solvers work on the directed graph itself.

pub mod gen;
pub mod io;

use serde::{Deserialize, Serialize};
use std::fmt;
use thiserror::Error;

/// Default sparsity knob: undirected support edges per vertex.
pub const DEFAULT_SPARSITY: usize = 4;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("vertex {vertex} out of range for a graph with {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("parallel undirected edge {{{0}, {1}}}")]
    ParallelEdge(usize, usize),
    #[error("graph too dense: {m} support edges exceed {limit} ({c_sparse} per vertex)")]
    TooDense { m: usize, limit: usize, c_sparse: usize },
    #[error("empty weight range {lo}..={hi}")]
    EmptyWeightRange { lo: i64, hi: i64 },
    #[error("grid dimensions must be positive (got {0}x{1})")]
    EmptyGrid(usize, usize),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("header declares {declared} {what}, found {found}")]
    HeaderMismatch { what: &'static str, declared: usize, found: usize },
}

/// Index into the edge sequence of an undirected (support) graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct EdgeId(pub usize);

impl EdgeId {
    pub fn index(self) -> usize {
        self.0
    }
}

impl fmt::Display for EdgeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "e{}", self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub w: i64,
}

impl Edge {
    pub fn new(u: usize, v: usize, w: i64) -> Self {
        Edge { u, v, w }
    }
}

/// Immutable sparse graph on vertices `0..n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    edges: Vec<Edge>,
    directed: bool,
}

impl Graph {
    /// Directed graph; arcs keep their given order and weights.
    pub fn directed(n: usize, edges: Vec<Edge>) -> Result<Self, GraphError> {
        for e in &edges {
            check_endpoints(n, e.u, e.v)?;
        }
        Ok(Graph {
            n,
            edges,
            directed: true,
        })
    }

    /// Undirected graph from vertex pairs. Pairs are normalised to `u < v` and
    /// sorted, so the edge index of a pair is canonical. Weights are zero.
    pub fn undirected<I>(n: usize, pairs: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut norm = Vec::new();
        for (u, v) in pairs {
            check_endpoints(n, u, v)?;
            norm.push((u.min(v), u.max(v)));
        }
        norm.sort_unstable();
        if let Some(w) = norm.windows(2).find(|w| w[0] == w[1]) {
            return Err(GraphError::ParallelEdge(w[0].0, w[0].1));
        }
        Ok(Graph {
            n,
            edges: norm.into_iter().map(|(u, v)| Edge::new(u, v, 0)).collect(),
            directed: false,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn is_directed(&self) -> bool {
        self.directed
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, id: EdgeId) -> Edge {
        self.edges[id.0]
    }

    /// Absolute value of the most negative weight (0 when no weight is negative).
    pub fn min_weight_magnitude(&self) -> u64 {
        self.edges
            .iter()
            .map(|e| e.w)
            .min()
            .filter(|&w| w < 0)
            .map_or(0, |w| w.unsigned_abs())
    }

    /// Checks `m(support) <= c_sparse * n`.
    pub fn check_sparsity(&self, c_sparse: usize) -> Result<(), GraphError> {
        let m = if self.directed {
            undirected_support(self).graph.m()
        } else {
            self.m()
        };
        let limit = c_sparse.saturating_mul(self.n);
        if m > limit {
            return Err(GraphError::TooDense { m, limit, c_sparse });
        }
        Ok(())
    }
}

fn check_endpoints(n: usize, u: usize, v: usize) -> Result<(), GraphError> {
    for x in [u, v] {
        if x >= n {
            return Err(GraphError::VertexOutOfRange { vertex: x, n });
        }
    }
    if u == v {
        return Err(GraphError::SelfLoop(u));
    }
    Ok(())
}

/// Undirected support of a graph together with, for every support edge, the
/// indices of the original edges it was built from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Support {
    pub graph: Graph,
    pub origin: Vec<Vec<usize>>,
}

pub fn undirected_support(g: &Graph) -> Support {
    let mut keyed: Vec<((usize, usize), usize)> = g
        .edges
        .iter()
        .enumerate()
        .map(|(i, e)| ((e.u.min(e.v), e.u.max(e.v)), i))
        .collect();
    keyed.sort_unstable();
    let mut edges: Vec<Edge> = Vec::new();
    let mut origin: Vec<Vec<usize>> = Vec::new();
    for ((u, v), i) in keyed {
        match edges.last() {
            Some(last) if last.u == u && last.v == v => origin.last_mut().unwrap().push(i),
            _ => {
                edges.push(Edge::new(u, v, 0));
                origin.push(vec![i]);
            }
        }
    }
    Support {
        graph: Graph {
            n: g.n,
            edges,
            directed: false,
        },
        origin,
    }
}

/// Compressed adjacency lists of the undirected view of a graph. Neighbour
/// lists are sorted by vertex id.
#[derive(Debug, Clone)]
pub struct Adjacency {
    offsets: Vec<usize>,
    targets: Vec<usize>,
}

impl Adjacency {
    pub fn new(g: &Graph) -> Self {
        let mut deg = vec![0usize; g.n + 1];
        for e in &g.edges {
            deg[e.u] += 1;
            deg[e.v] += 1;
        }
        let mut offsets = vec![0usize; g.n + 1];
        for i in 0..g.n {
            offsets[i + 1] = offsets[i] + deg[i];
        }
        let mut fill = offsets.clone();
        let mut targets = vec![0usize; offsets[g.n]];
        for e in &g.edges {
            targets[fill[e.u]] = e.v;
            fill[e.u] += 1;
            targets[fill[e.v]] = e.u;
            fill[e.v] += 1;
        }
        for i in 0..g.n {
            targets[offsets[i]..offsets[i + 1]].sort_unstable();
        }
        Adjacency { offsets, targets }
    }

    pub fn n(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.targets[self.offsets[v]..self.offsets[v + 1]]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.offsets[v + 1] - self.offsets[v]
    }
}

/// Connected components of the undirected view, as sorted vertex lists ordered
/// by their smallest vertex.
pub fn components(adj: &Adjacency) -> Vec<Vec<usize>> {
    let n = adj.n();
    let mut seen = vec![false; n];
    let mut out = Vec::new();
    let mut stack = Vec::new();
    for s in 0..n {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        stack.push(s);
        let mut comp = Vec::new();
        while let Some(x) = stack.pop() {
            comp.push(x);
            for &y in adj.neighbors(x) {
                if !seen[y] {
                    seen[y] = true;
                    stack.push(y);
                }
            }
        }
        comp.sort_unstable();
        out.push(comp);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn undirected_normalises_and_rejects_parallel() {
        let g = Graph::undirected(3, [(2, 1), (0, 1)]).unwrap();
        assert_eq!(g.edges()[0], Edge::new(0, 1, 0));
        assert_eq!(g.edges()[1], Edge::new(1, 2, 0));
        assert_eq!(
            Graph::undirected(3, [(0, 1), (1, 0)]),
            Err(GraphError::ParallelEdge(0, 1))
        );
    }

    #[test]
    fn rejects_self_loops_and_bad_ids() {
        assert_eq!(
            Graph::directed(2, vec![Edge::new(1, 1, 0)]),
            Err(GraphError::SelfLoop(1))
        );
        assert_eq!(
            Graph::directed(2, vec![Edge::new(0, 2, 0)]),
            Err(GraphError::VertexOutOfRange { vertex: 2, n: 2 })
        );
    }

    #[test]
    fn directed_two_cycle_support_is_one_edge() {
        let g = Graph::directed(2, vec![Edge::new(0, 1, 3), Edge::new(1, 0, -1)]).unwrap();
        let s = undirected_support(&g);
        assert_eq!(s.graph.m(), 1);
        assert_eq!(s.origin, vec![vec![0, 1]]);
        assert!(!s.graph.is_directed());
    }

    #[test]
    fn directed_path_support() {
        let g = Graph::directed(3, vec![Edge::new(0, 1, 1), Edge::new(1, 2, 1)]).unwrap();
        let s = undirected_support(&g).graph;
        assert_eq!(s, Graph::undirected(3, [(0, 1), (1, 2)]).unwrap());
    }

    #[test]
    fn support_is_idempotent() {
        let g = Graph::directed(
            4,
            vec![
                Edge::new(3, 0, 1),
                Edge::new(0, 3, 2),
                Edge::new(1, 2, 5),
                Edge::new(2, 1, 5),
                Edge::new(1, 2, 7),
            ],
        )
        .unwrap();
        let once = undirected_support(&g);
        let twice = undirected_support(&once.graph);
        assert_eq!(once.graph, twice.graph);
        assert_eq!(once.origin, vec![vec![0, 1], vec![2, 3, 4]]);
    }

    #[test]
    fn sparsity_check() {
        let k4 = Graph::undirected(4, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap();
        assert!(k4.check_sparsity(2).is_ok());
        assert!(matches!(
            k4.check_sparsity(1),
            Err(GraphError::TooDense { m: 6, limit: 4, .. })
        ));
    }

    #[test]
    fn min_weight_magnitude() {
        let g = Graph::directed(3, vec![Edge::new(0, 1, -7), Edge::new(1, 2, 3)]).unwrap();
        assert_eq!(g.min_weight_magnitude(), 7);
        let h = Graph::directed(2, vec![Edge::new(0, 1, 4)]).unwrap();
        assert_eq!(h.min_weight_magnitude(), 0);
    }

    #[test]
    fn components_sorted() {
        let g = Graph::undirected(5, [(3, 4), (0, 2)]).unwrap();
        let comps = components(&Adjacency::new(&g));
        assert_eq!(comps, vec![vec![0, 2], vec![1], vec![3, 4]]);
    }
}
