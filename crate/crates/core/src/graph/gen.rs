//! Deterministic generators for desk-scale test families.
//!
//! All randomness comes from `ChaCha8Rng::seed_from_u64(seed)`, so outputs are
//! identical across platforms for identical arguments.

use super::{Edge, Graph, GraphError};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeSet;
use std::ops::RangeInclusive;

fn check_range(range: &RangeInclusive<i64>) -> Result<(), GraphError> {
    if range.is_empty() {
        return Err(GraphError::EmptyWeightRange {
            lo: *range.start(),
            hi: *range.end(),
        });
    }
    Ok(())
}

/// `width x height` grid with both orientations of every grid edge. Vertex
/// `(x, y)` has id `y * width + x`. Each arc gets an independent weight.
pub fn generate_grid(
    width: usize,
    height: usize,
    weights: RangeInclusive<i64>,
    seed: u64,
) -> Result<Graph, GraphError> {
    if width == 0 || height == 0 {
        return Err(GraphError::EmptyGrid(width, height));
    }
    check_range(&weights)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut arcs = Vec::with_capacity(4 * width * height);
    for y in 0..height {
        for x in 0..width {
            let u = y * width + x;
            let mut nbrs = Vec::with_capacity(2);
            if x + 1 < width {
                nbrs.push(u + 1);
            }
            if y + 1 < height {
                nbrs.push(u + width);
            }
            for v in nbrs {
                arcs.push(Edge::new(u, v, rng.gen_range(weights.clone())));
                arcs.push(Edge::new(v, u, rng.gen_range(weights.clone())));
            }
        }
    }
    Graph::directed(width * height, arcs)
}

/// Undirected `width x height` grid.
pub fn grid_undirected(width: usize, height: usize) -> Result<Graph, GraphError> {
    if width == 0 || height == 0 {
        return Err(GraphError::EmptyGrid(width, height));
    }
    let mut pairs = Vec::new();
    for y in 0..height {
        for x in 0..width {
            let u = y * width + x;
            if x + 1 < width {
                pairs.push((u, u + 1));
            }
            if y + 1 < height {
                pairs.push((u, u + width));
            }
        }
    }
    Graph::undirected(width * height, pairs)
}

/// Re-weights `g` by a random vertex potential: `w'(u,v) = w(u,v) + phi(u) - phi(v)`.
/// Cycle weights are unchanged, so a graph with non-negative weights becomes a
/// mixed-sign graph without negative cycles.
pub fn shift_by_potential(g: &Graph, potential: RangeInclusive<i64>, seed: u64) -> Result<Graph, GraphError> {
    check_range(&potential)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let phi: Vec<i64> = (0..g.n()).map(|_| rng.gen_range(potential.clone())).collect();
    let arcs = g
        .edges()
        .iter()
        .map(|e| Edge::new(e.u, e.v, e.w + phi[e.u] - phi[e.v]))
        .collect();
    Graph::directed(g.n(), arcs)
}

/// Random digraph with `m` arcs (parallel arcs allowed, no self-loops).
pub fn random_digraph(n: usize, m: usize, weights: RangeInclusive<i64>, seed: u64) -> Result<Graph, GraphError> {
    check_range(&weights)?;
    if n < 2 {
        return Graph::directed(n, Vec::new());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut arcs = Vec::with_capacity(m);
    while arcs.len() < m {
        let u = rng.gen_range(0..n);
        let v = rng.gen_range(0..n);
        if u != v {
            arcs.push(Edge::new(u, v, rng.gen_range(weights.clone())));
        }
    }
    Graph::directed(n, arcs)
}

/// Random DAG: arcs follow a hidden random topological order.
pub fn random_dag(n: usize, m: usize, weights: RangeInclusive<i64>, seed: u64) -> Result<Graph, GraphError> {
    check_range(&weights)?;
    if n < 2 {
        return Graph::directed(n, Vec::new());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut rng);
    let mut arcs = Vec::with_capacity(m);
    while arcs.len() < m {
        let i = rng.gen_range(0..n);
        let j = rng.gen_range(0..n);
        if i < j {
            arcs.push(Edge::new(order[i], order[j], rng.gen_range(weights.clone())));
        }
    }
    Graph::directed(n, arcs)
}

/// Adds a directed cycle of `len` arcs through random vertices, with total
/// weight `total` (must be negative for a planted negative cycle). The cycle
/// is made reachable from vertex 0 by an extra arc `0 -> first`.
pub fn plant_cycle(g: &Graph, len: usize, total: i64, seed: u64) -> Result<Graph, GraphError> {
    let n = g.n();
    let len = len.clamp(2, n.max(2));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pool: Vec<usize> = (0..n).collect();
    pool.shuffle(&mut rng);
    let cyc = &pool[..len.min(n)];
    let mut arcs = g.edges().to_vec();
    let base = total / len as i64;
    for i in 0..cyc.len() {
        let w = if i == 0 { total - base * (cyc.len() as i64 - 1) } else { base };
        arcs.push(Edge::new(cyc[i], cyc[(i + 1) % cyc.len()], w));
    }
    if cyc[0] != 0 {
        arcs.push(Edge::new(0, cyc[0], 0));
    }
    Graph::directed(n, arcs)
}

/// Random connected undirected graph: a random spanning tree plus up to
/// `extra` additional distinct edges.
pub fn random_connected(n: usize, extra: usize, seed: u64) -> Result<Graph, GraphError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut labels: Vec<usize> = (0..n).collect();
    labels.shuffle(&mut rng);
    let mut set = BTreeSet::new();
    for i in 1..n {
        let j = rng.gen_range(0..i);
        let (a, b) = (labels[i], labels[j]);
        set.insert((a.min(b), a.max(b)));
    }
    let max_edges = n * n.saturating_sub(1) / 2;
    let target = (set.len() + extra).min(max_edges);
    while set.len() < target {
        let a = rng.gen_range(0..n);
        let b = rng.gen_range(0..n);
        if a != b {
            set.insert((a.min(b), a.max(b)));
        }
    }
    Graph::undirected(n, set)
}
