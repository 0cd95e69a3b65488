//! Single-source shortest paths with negative arc weights.
//!
//! [`bellman_ford`] is the reference solver. [`dijkstra`] handles
//! non-negative weights. [`reduce_weights`] applies potentials
//! `w'(u, v) = w(u, v) + φ(u) - φ(v)`, and [`multi_source_sssp`] uses them to
//! answer every source after the first with Dijkstra. [`region_bellman_ford`]
//! relaxes arcs region by region over a division of the undirected support.
//!
//! Distances are `i64`; any overflow is an error, never a wraparound.

mod reduce;
mod regions;

pub use reduce::{multi_source_sssp, multi_source_sssp_with, reduce_weights, FirstSolver, MultiSource, Potentials};
pub use regions::{region_bellman_ford, region_bellman_ford_counted};

use crate::graph::{EdgeId, Graph};
use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};
use std::cmp::Reverse;
use std::collections::BinaryHeap;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NegativeCycleWitness {
    /// `cycle[i] -> cycle[i + 1]` via `edges[i]`, closing back at `cycle[0]`.
    pub cycle: Vec<usize>,
    pub edges: Vec<EdgeId>,
    pub total_weight: i64,
}

impl NegativeCycleWitness {
    /// Recomputes the cycle's weight from `g` and checks that it is a closed,
    /// simple, negative cycle.
    pub fn verify(&self, g: &Graph) -> bool {
        let k = self.cycle.len();
        if k == 0 || self.edges.len() != k {
            return false;
        }
        let mut seen = self.cycle.clone();
        seen.sort_unstable();
        seen.dedup();
        if seen.len() != k {
            return false;
        }
        let mut total: i128 = 0;
        for (i, &id) in self.edges.iter().enumerate() {
            let Some(e) = g.edges().get(id.index()) else {
                return false;
            };
            if e.u != self.cycle[i] || e.v != self.cycle[(i + 1) % k] {
                return false;
            }
            total += e.w as i128;
        }
        total == self.total_weight as i128 && total < 0
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum SsspError {
    #[error("negative cycle of weight {} through {} vertices", .0.total_weight, .0.cycle.len())]
    NegativeCycle(NegativeCycleWitness),
    #[error("distance overflow relaxing edge {0:?}")]
    Overflow(EdgeId),
    #[error("edge {edge:?} has negative weight {weight}")]
    NegativeEdge { edge: EdgeId, weight: i64 },
    #[error("potential gives edge {edge:?} reduced weight {reduced} < 0")]
    InvalidPotential { edge: EdgeId, reduced: i64 },
    #[error("potential has {found} entries for {n} vertices")]
    PotentialLength { found: usize, n: usize },
    #[error("shortest paths need a directed graph")]
    NotDirected,
    #[error("source {vertex} out of range for {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("no sources given")]
    NoSources,
    #[error("division does not match the graph: {0}")]
    DivisionMismatch(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShortestPathTree {
    pub source: usize,
    /// `None` for unreachable vertices.
    pub dist: Vec<Option<i64>>,
    pub parent: Vec<Option<usize>>,
    pub parent_edge: Vec<Option<EdgeId>>,
}

struct Inf<'a>(&'a [Option<i64>]);

impl Serialize for Inf<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(self.0.len()))?;
        for (v, d) in self.0.iter().enumerate() {
            match d {
                Some(d) => map.serialize_entry(&v, d)?,
                None => map.serialize_entry(&v, "inf")?,
            }
        }
        map.end()
    }
}

struct Parents<'a>(&'a [Option<usize>]);

impl Serialize for Parents<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(self.0.len()))?;
        for (v, p) in self.0.iter().enumerate() {
            map.serialize_entry(&v, p)?;
        }
        map.end()
    }
}

impl Serialize for ShortestPathTree {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(3))?;
        map.serialize_entry("source", &self.source)?;
        map.serialize_entry("dist", &Inf(&self.dist))?;
        map.serialize_entry("parent", &Parents(&self.parent))?;
        map.end()
    }
}

impl ShortestPathTree {
    fn from_parts(g: &Graph, source: usize, dist: Vec<Option<i64>>, parent_edge: Vec<Option<EdgeId>>) -> Self {
        let parent = parent_edge.iter().map(|p| p.map(|e| g.edge(e).u)).collect();
        ShortestPathTree {
            source,
            dist,
            parent,
            parent_edge,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Counted {
    pub tree: ShortestPathTree,
    /// Full passes over the arcs, including the final pass that changed nothing.
    pub passes: usize,
}

pub(crate) fn check_source(g: &Graph, s: usize) -> Result<(), SsspError> {
    if !g.is_directed() {
        return Err(SsspError::NotDirected);
    }
    if s >= g.n() {
        return Err(SsspError::VertexOutOfRange { vertex: s, n: g.n() });
    }
    Ok(())
}

/// Relaxes arc `i`; returns whether the head's distance dropped.
#[inline]
pub(crate) fn relax(
    g: &Graph,
    i: usize,
    dist: &mut [Option<i64>],
    parent: &mut [Option<EdgeId>],
) -> Result<bool, SsspError> {
    let e = g.edges()[i];
    let Some(du) = dist[e.u] else {
        return Ok(false);
    };
    let nd = du.checked_add(e.w).ok_or(SsspError::Overflow(EdgeId(i)))?;
    if dist[e.v].is_none_or(|dv| nd < dv) {
        dist[e.v] = Some(nd);
        parent[e.v] = Some(EdgeId(i));
        return Ok(true);
    }
    Ok(false)
}

/// A cycle in the parent-pointer graph, if any. Under exact relaxation every
/// such cycle has negative weight; only negative ones are returned.
pub(crate) fn find_parent_cycle(g: &Graph, parent: &[Option<EdgeId>]) -> Option<NegativeCycleWitness> {
    let n = g.n();
    // 0 unvisited, 1 on the current walk, 2 finished
    let mut state = vec![0u8; n];
    let mut walk = Vec::new();
    for start in 0..n {
        if state[start] != 0 {
            continue;
        }
        let mut v = start;
        let hit = loop {
            if state[v] != 0 {
                break (state[v] == 1).then_some(v);
            }
            state[v] = 1;
            walk.push(v);
            match parent[v] {
                Some(e) => v = g.edge(e).u,
                None => break None,
            }
        };
        if let Some(x) = hit {
            let mut edges = Vec::new();
            let mut y = x;
            loop {
                let e = parent[y].expect("on a parent cycle");
                edges.push(e);
                y = g.edge(e).u;
                if y == x {
                    break;
                }
            }
            edges.reverse();
            let cycle: Vec<usize> = edges.iter().map(|&e| g.edge(e).u).collect();
            let total: i128 = edges.iter().map(|&e| g.edge(e).w as i128).sum();
            if total < 0 && total >= i64::MIN as i128 {
                return Some(NegativeCycleWitness {
                    cycle,
                    edges,
                    total_weight: total as i64,
                });
            }
        }
        for v in walk.drain(..) {
            state[v] = 2;
        }
    }
    None
}

/// Runs up to `extra` further passes of `step` until the parent graph shows a
/// negative cycle.
pub(crate) fn extract_cycle(
    g: &Graph,
    dist: &mut [Option<i64>],
    parent: &mut [Option<EdgeId>],
    extra: usize,
    mut step: impl FnMut(&mut [Option<i64>], &mut [Option<EdgeId>]) -> Result<bool, SsspError>,
) -> Result<Option<NegativeCycleWitness>, SsspError> {
    for _ in 0..=extra {
        if let Some(w) = find_parent_cycle(g, parent) {
            return Ok(Some(w));
        }
        step(dist, parent)?;
    }
    Ok(find_parent_cycle(g, parent))
}

pub fn bellman_ford(g: &Graph, s: usize) -> Result<ShortestPathTree, SsspError> {
    bellman_ford_counted(g, s).map(|c| c.tree)
}

/// Bellman-Ford with early exit. A change in pass `n` means a negative cycle
/// reachable from `s`; the witness is read off the parent pointers.
pub fn bellman_ford_counted(g: &Graph, s: usize) -> Result<Counted, SsspError> {
    check_source(g, s)?;
    let n = g.n();
    let mut dist = vec![None; n];
    let mut parent = vec![None; n];
    dist[s] = Some(0);
    let pass = |dist: &mut [Option<i64>], parent: &mut [Option<EdgeId>]| -> Result<bool, SsspError> {
        let mut changed = false;
        for i in 0..g.m() {
            changed |= relax(g, i, dist, parent)?;
        }
        Ok(changed)
    };
    for passes in 1..=n.max(1) {
        if !pass(&mut dist, &mut parent)? {
            return Ok(Counted {
                tree: ShortestPathTree::from_parts(g, s, dist, parent),
                passes,
            });
        }
    }
    match extract_cycle(g, &mut dist, &mut parent, n, pass)? {
        Some(w) => Err(SsspError::NegativeCycle(w)),
        None => unreachable!("relaxation still active after n passes without a parent cycle"),
    }
}

/// Dijkstra with a binary heap. All weights must be non-negative.
pub fn dijkstra(g: &Graph, s: usize) -> Result<ShortestPathTree, SsspError> {
    check_source(g, s)?;
    if let Some((i, e)) = g.edges().iter().enumerate().find(|(_, e)| e.w < 0) {
        return Err(SsspError::NegativeEdge {
            edge: EdgeId(i),
            weight: e.w,
        });
    }
    let n = g.n();
    let out = OutArcs::new(g);
    let mut dist: Vec<Option<i64>> = vec![None; n];
    let mut parent = vec![None; n];
    let mut done = vec![false; n];
    let mut heap = BinaryHeap::new();
    dist[s] = Some(0);
    heap.push(Reverse((0i64, s)));
    while let Some(Reverse((d, u))) = heap.pop() {
        if done[u] {
            continue;
        }
        done[u] = true;
        for &i in out.of(u) {
            let e = g.edges()[i];
            let nd = d.checked_add(e.w).ok_or(SsspError::Overflow(EdgeId(i)))?;
            if dist[e.v].is_none_or(|dv| nd < dv) {
                dist[e.v] = Some(nd);
                parent[e.v] = Some(EdgeId(i));
                heap.push(Reverse((nd, e.v)));
            }
        }
    }
    Ok(ShortestPathTree::from_parts(g, s, dist, parent))
}

/// Outgoing arc indices per vertex.
pub(crate) struct OutArcs {
    offsets: Vec<usize>,
    arcs: Vec<usize>,
}

impl OutArcs {
    pub(crate) fn new(g: &Graph) -> Self {
        let mut offsets = vec![0usize; g.n() + 1];
        for e in g.edges() {
            offsets[e.u + 1] += 1;
        }
        for v in 0..g.n() {
            offsets[v + 1] += offsets[v];
        }
        let mut fill = offsets.clone();
        let mut arcs = vec![0; g.m()];
        for (i, e) in g.edges().iter().enumerate() {
            arcs[fill[e.u]] = i;
            fill[e.u] += 1;
        }
        OutArcs { offsets, arcs }
    }

    pub(crate) fn of(&self, v: usize) -> &[usize] {
        &self.arcs[self.offsets[v]..self.offsets[v + 1]]
    }
}

/// Checks a tree in `O(m)`: source at 0, every reachable vertex other than
/// the source has a tight parent arc, no arc can be relaxed, and nothing
/// reachable is marked unreachable.
pub fn check_tree(g: &Graph, t: &ShortestPathTree) -> Result<(), String> {
    let n = g.n();
    if t.dist.len() != n || t.parent.len() != n || t.parent_edge.len() != n {
        return Err(format!("tree sized for {} vertices, graph has {n}", t.dist.len()));
    }
    if t.dist.get(t.source) != Some(&Some(0)) {
        return Err(format!("source {} does not have distance 0", t.source));
    }
    for v in 0..n {
        match (t.dist[v], t.parent_edge[v]) {
            (None, Some(_)) => return Err(format!("unreachable vertex {v} has a parent")),
            (Some(_), None) if v != t.source => return Err(format!("vertex {v} has no parent")),
            (Some(dv), Some(id)) => {
                let e = g.edge(id);
                if e.v != v || t.parent[v] != Some(e.u) {
                    return Err(format!("parent arc {id:?} does not enter {v}"));
                }
                let du = t.dist[e.u].ok_or_else(|| format!("parent of {v} is unreachable"))?;
                if du.checked_add(e.w) != Some(dv) {
                    return Err(format!("parent arc of {v} is not tight"));
                }
            }
            _ => {}
        }
    }
    for (i, e) in g.edges().iter().enumerate() {
        if let Some(du) = t.dist[e.u] {
            match (du.checked_add(e.w), t.dist[e.v]) {
                (_, None) => return Err(format!("arc {i} reaches {} marked unreachable", e.v)),
                (Some(nd), Some(dv)) if nd < dv => return Err(format!("arc {i} can still be relaxed")),
                _ => {}
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::gen::{plant_cycle, random_dag, random_digraph};
    use crate::graph::Edge;

    fn digraph(n: usize, arcs: &[(usize, usize, i64)]) -> Graph {
        Graph::directed(n, arcs.iter().map(|&(u, v, w)| Edge::new(u, v, w)).collect()).unwrap()
    }

    #[test]
    fn path_distances() {
        let g = digraph(3, &[(0, 1, -5), (1, 2, 3)]);
        let t = bellman_ford(&g, 0).unwrap();
        assert_eq!(t.dist, vec![Some(0), Some(-5), Some(-2)]);
        assert_eq!(t.parent, vec![None, Some(0), Some(1)]);
        check_tree(&g, &t).unwrap();
    }

    #[test]
    fn two_cycle_witness() {
        let g = digraph(2, &[(0, 1, 1), (1, 0, -2)]);
        match bellman_ford(&g, 0) {
            Err(SsspError::NegativeCycle(w)) => {
                assert_eq!(w.total_weight, -1);
                assert!(w.verify(&g));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn unreachable_cycle_is_ignored() {
        let g = digraph(4, &[(0, 1, 2), (2, 3, -5), (3, 2, 1)]);
        let t = bellman_ford(&g, 0).unwrap();
        assert_eq!(t.dist, vec![Some(0), Some(2), None, None]);
    }

    /// Exhaustive DP over the hidden topological order.
    fn dag_oracle(g: &Graph, s: usize) -> Vec<Option<i64>> {
        let n = g.n();
        let mut indeg = vec![0; n];
        for e in g.edges() {
            indeg[e.v] += 1;
        }
        let mut order: Vec<usize> = (0..n).filter(|&v| indeg[v] == 0).collect();
        let mut i = 0;
        while i < order.len() {
            let u = order[i];
            for e in g.edges().iter().filter(|e| e.u == u) {
                indeg[e.v] -= 1;
                if indeg[e.v] == 0 {
                    order.push(e.v);
                }
            }
            i += 1;
        }
        assert_eq!(order.len(), n);
        let mut dist = vec![None; n];
        dist[s] = Some(0i64);
        for &u in &order {
            if let Some(du) = dist[u] {
                for e in g.edges().iter().filter(|e| e.u == u) {
                    let nd = du + e.w;
                    if dist[e.v].is_none_or(|dv: i64| nd < dv) {
                        dist[e.v] = Some(nd);
                    }
                }
            }
        }
        dist
    }

    #[test]
    fn random_dags_match_dp() {
        for seed in 0..20 {
            let g = random_dag(50, 150, -10..=10, seed).unwrap();
            for s in [0, 7, 31] {
                assert_eq!(bellman_ford(&g, s).unwrap().dist, dag_oracle(&g, s), "seed {seed}");
            }
        }
    }

    #[test]
    fn dijkstra_triangle_and_zero_weights() {
        let g = digraph(3, &[(0, 1, 2), (0, 2, 5), (1, 2, 1)]);
        let t = dijkstra(&g, 0).unwrap();
        assert_eq!(t.dist[2], Some(3));
        check_tree(&g, &t).unwrap();
        let z = digraph(4, &[(0, 1, 0), (1, 2, 0), (2, 0, 0)]);
        assert_eq!(dijkstra(&z, 0).unwrap().dist, vec![Some(0), Some(0), Some(0), None]);
    }

    #[test]
    fn dijkstra_rejects_negative() {
        let g = digraph(2, &[(0, 1, -1)]);
        assert_eq!(
            dijkstra(&g, 0),
            Err(SsspError::NegativeEdge {
                edge: EdgeId(0),
                weight: -1
            })
        );
    }

    #[test]
    fn dijkstra_matches_bellman_ford() {
        for seed in 0..200 {
            let g = random_digraph(40, 160, 0..=20, seed).unwrap();
            let s = (seed as usize) % 40;
            let a = dijkstra(&g, s).unwrap();
            let b = bellman_ford(&g, s).unwrap();
            assert_eq!(a.dist, b.dist);
            check_tree(&g, &a).unwrap();
        }
    }

    #[test]
    fn planted_cycles_verify() {
        for seed in 0..30 {
            let base = random_digraph(30, 60, 0..=50, seed).unwrap();
            let g = plant_cycle(&base, 2 + (seed as usize) % 6, -3, seed).unwrap();
            match bellman_ford(&g, 0) {
                Err(SsspError::NegativeCycle(w)) => assert!(w.verify(&g), "{w:?}"),
                other => panic!("seed {seed}: {other:?}"),
            }
        }
    }

    #[test]
    fn overflow_is_an_error() {
        let g = digraph(3, &[(0, 1, i64::MAX), (1, 2, 1)]);
        assert_eq!(bellman_ford(&g, 0), Err(SsspError::Overflow(EdgeId(1))));
    }

    #[test]
    fn rejects_bad_source_and_undirected() {
        let g = digraph(2, &[(0, 1, 1)]);
        assert_eq!(bellman_ford(&g, 2), Err(SsspError::VertexOutOfRange { vertex: 2, n: 2 }));
        let u = Graph::undirected(2, [(0, 1)]).unwrap();
        assert_eq!(bellman_ford(&u, 0), Err(SsspError::NotDirected));
    }

    #[test]
    fn tree_json_marks_unreachable() {
        let g = digraph(3, &[(0, 1, 4)]);
        let t = bellman_ford(&g, 0).unwrap();
        let json = serde_json::to_string(&t).unwrap();
        assert_eq!(
            json,
            r#"{"source":0,"dist":{"0":0,"1":4,"2":"inf"},"parent":{"0":null,"1":0,"2":null}}"#
        );
    }

    #[test]
    fn witness_verify_rejects_tampering() {
        let g = digraph(3, &[(0, 1, 1), (1, 2, 1), (2, 0, -5)]);
        let Err(SsspError::NegativeCycle(mut w)) = bellman_ford(&g, 0) else {
            panic!()
        };
        assert!(w.verify(&g));
        w.total_weight += 1;
        assert!(!w.verify(&g));
    }

    #[test]
    fn check_tree_catches_bad_distance() {
        let g = digraph(3, &[(0, 1, 1), (1, 2, 1), (0, 2, 5)]);
        let mut t = bellman_ford(&g, 0).unwrap();
        check_tree(&g, &t).unwrap();
        t.dist[2] = Some(5);
        t.parent[2] = Some(0);
        t.parent_edge[2] = Some(EdgeId(2));
        assert!(check_tree(&g, &t).is_err());
    }
}
