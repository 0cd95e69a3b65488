use super::{
    bellman_ford, check_source, dijkstra, extract_cycle, region_bellman_ford, relax, ShortestPathTree, SsspError,
};
use crate::division::Division;
use crate::graph::{Edge, EdgeId, Graph};
use serde::Serialize;

/// Vertex potentials `φ`; valid for `g` when every reduced weight is `>= 0`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct Potentials(pub Vec<i64>);

/// `w'(u, v) = w(u, v) + φ(u) - φ(v)`. Arc order is preserved, so arc ids
/// carry over.
pub fn reduce_weights(g: &Graph, phi: &Potentials) -> Result<Graph, SsspError> {
    if !g.is_directed() {
        return Err(SsspError::NotDirected);
    }
    if phi.0.len() != g.n() {
        return Err(SsspError::PotentialLength {
            found: phi.0.len(),
            n: g.n(),
        });
    }
    let mut arcs = Vec::with_capacity(g.m());
    for (i, e) in g.edges().iter().enumerate() {
        let reduced = e
            .w
            .checked_add(phi.0[e.u])
            .and_then(|x| x.checked_sub(phi.0[e.v]))
            .ok_or(SsspError::Overflow(EdgeId(i)))?;
        if reduced < 0 {
            return Err(SsspError::InvalidPotential {
                edge: EdgeId(i),
                reduced,
            });
        }
        arcs.push(Edge::new(e.u, e.v, reduced));
    }
    Ok(Graph::directed(g.n(), arcs).expect("same endpoints as a valid graph"))
}

#[derive(Debug, Clone, Copy)]
pub enum FirstSolver<'a> {
    BellmanFord,
    Regions(&'a Division),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PotentialOrigin {
    /// Distances of the first tree; every vertex is reachable from it.
    FirstTree,
    /// Zero-weight virtual source into every vertex reachable from a source.
    Virtual,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MultiSource {
    pub trees: Vec<ShortestPathTree>,
    pub potentials: Potentials,
    pub potential_origin: PotentialOrigin,
    /// Arcs that were reweighted: all arcs, or those leaving vertices
    /// reachable from some source.
    pub reduced_arcs: usize,
    /// Smallest reduced weight (`None` when no arc was reweighted).
    pub min_reduced_weight: Option<i64>,
}

pub fn multi_source_sssp(g: &Graph, sources: &[usize]) -> Result<MultiSource, SsspError> {
    multi_source_sssp_with(g, sources, FirstSolver::BellmanFord)
}

/// Trees for several sources: the first with a negative-weight solver, the
/// rest with Dijkstra on reduced weights, un-telescoped via
/// `dist(v) = dist'(v) - φ(s) + φ(v)`.
pub fn multi_source_sssp_with(g: &Graph, sources: &[usize], first: FirstSolver) -> Result<MultiSource, SsspError> {
    let (&s0, rest) = sources.split_first().ok_or(SsspError::NoSources)?;
    for &s in sources {
        check_source(g, s)?;
    }
    let first_tree = match first {
        FirstSolver::BellmanFord => bellman_ford(g, s0)?,
        FirstSolver::Regions(d) => region_bellman_ford(g, d, s0)?,
    };

    let (phi, origin, kept) = if first_tree.dist.iter().all(Option::is_some) {
        let phi = Potentials(first_tree.dist.iter().map(|d| d.unwrap()).collect());
        (phi, PotentialOrigin::FirstTree, (0..g.m()).collect::<Vec<_>>())
    } else {
        let reach = reachable(g, sources);
        let kept: Vec<usize> = (0..g.m()).filter(|&i| reach[g.edges()[i].u]).collect();
        (virtual_potentials(g, &reach, &kept)?, PotentialOrigin::Virtual, kept)
    };

    let sub = Graph::directed(g.n(), kept.iter().map(|&i| g.edges()[i]).collect()).expect("subset of a valid graph");
    let reduced = reduce_weights(&sub, &phi)?;
    let mut trees = vec![first_tree];
    for &s in rest {
        let t = dijkstra(&reduced, s)?;
        let mut dist = vec![None; g.n()];
        for (v, d) in t.dist.iter().enumerate() {
            if let Some(d) = d {
                let back = d
                    .checked_sub(phi.0[s])
                    .and_then(|x| x.checked_add(phi.0[v]))
                    .ok_or_else(|| SsspError::Overflow(t.parent_edge[v].map_or(EdgeId(0), |e| EdgeId(kept[e.index()]))))?;
                dist[v] = Some(back);
            }
        }
        let parent_edge: Vec<Option<EdgeId>> = t.parent_edge.iter().map(|p| p.map(|e| EdgeId(kept[e.index()]))).collect();
        trees.push(ShortestPathTree {
            source: s,
            dist,
            parent: t.parent,
            parent_edge,
        });
    }
    Ok(MultiSource {
        trees,
        potentials: phi,
        potential_origin: origin,
        reduced_arcs: reduced.m(),
        min_reduced_weight: reduced.edges().iter().map(|e| e.w).min(),
    })
}

fn reachable(g: &Graph, sources: &[usize]) -> Vec<bool> {
    let out = super::OutArcs::new(g);
    let mut seen = vec![false; g.n()];
    let mut stack: Vec<usize> = Vec::new();
    for &s in sources {
        if !seen[s] {
            seen[s] = true;
            stack.push(s);
        }
    }
    while let Some(u) = stack.pop() {
        for &i in out.of(u) {
            let v = g.edges()[i].v;
            if !seen[v] {
                seen[v] = true;
                stack.push(v);
            }
        }
    }
    seen
}

/// Bellman-Ford from a virtual source with zero-weight arcs into every vertex
/// of `reach`, over the arcs `kept` (those leaving `reach`). Vertices outside
/// `reach` get potential 0.
fn virtual_potentials(g: &Graph, reach: &[bool], kept: &[usize]) -> Result<Potentials, SsspError> {
    let n = g.n();
    let mut dist: Vec<Option<i64>> = reach.iter().map(|&r| r.then_some(0)).collect();
    let mut parent = vec![None; n];
    let pass = |dist: &mut [Option<i64>], parent: &mut [Option<EdgeId>]| -> Result<bool, SsspError> {
        let mut changed = false;
        for &i in kept {
            changed |= relax(g, i, dist, parent)?;
        }
        Ok(changed)
    };
    // the virtual source adds one vertex, so n + 1 passes settle it
    for _ in 0..=n {
        if !pass(&mut dist, &mut parent)? {
            return Ok(Potentials(dist.into_iter().map(|d| d.unwrap_or(0)).collect()));
        }
    }
    match extract_cycle(g, &mut dist, &mut parent, n, pass)? {
        Some(w) => Err(SsspError::NegativeCycle(w)),
        None => unreachable!("relaxation still active after n + 1 passes without a parent cycle"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::gen::{generate_grid, random_digraph, shift_by_potential};

    fn digraph(n: usize, arcs: &[(usize, usize, i64)]) -> Graph {
        Graph::directed(n, arcs.iter().map(|&(u, v, w)| Edge::new(u, v, w)).collect()).unwrap()
    }

    #[test]
    fn zero_potential_is_identity() {
        let g = digraph(3, &[(0, 1, 4), (1, 2, 0)]);
        assert_eq!(reduce_weights(&g, &Potentials(vec![0; 3])).unwrap(), g);
    }

    #[test]
    fn tight_tree_arcs_reduce_to_zero() {
        let g = digraph(3, &[(0, 1, -5), (1, 2, 3)]);
        let r = reduce_weights(&g, &Potentials(vec![0, -5, -2])).unwrap();
        assert_eq!(r.edges().iter().map(|e| e.w).collect::<Vec<_>>(), vec![0, 0]);
    }

    #[test]
    fn invalid_potential_names_the_arc() {
        let g = digraph(3, &[(0, 1, 1), (1, 2, -4)]);
        assert_eq!(
            reduce_weights(&g, &Potentials(vec![0, 0, 0])),
            Err(SsspError::InvalidPotential {
                edge: EdgeId(1),
                reduced: -4
            })
        );
    }

    #[test]
    fn single_source_matches_bellman_ford() {
        let g = shift_by_potential(&generate_grid(5, 5, 0..=9, 1).unwrap(), -12..=12, 2).unwrap();
        let ms = multi_source_sssp(&g, &[7]).unwrap();
        assert_eq!(ms.trees, vec![bellman_ford(&g, 7).unwrap()]);
    }

    #[test]
    fn repeated_source_gives_equal_distances() {
        let g = shift_by_potential(&generate_grid(6, 6, 0..=10, 3).unwrap(), -20..=20, 4).unwrap();
        let ms = multi_source_sssp(&g, &[5, 5]).unwrap();
        assert_eq!(ms.trees[0].dist, ms.trees[1].dist);
    }

    #[test]
    fn grid_sources_match_bellman_ford() {
        let g = shift_by_potential(&generate_grid(8, 8, 0..=10, 9).unwrap(), -30..=30, 10).unwrap();
        let sources = [0, 13, 27, 40, 63];
        let ms = multi_source_sssp(&g, &sources).unwrap();
        assert_eq!(ms.potential_origin, PotentialOrigin::FirstTree);
        assert!(ms.min_reduced_weight.unwrap() >= 0);
        for (t, &s) in ms.trees.iter().zip(&sources) {
            assert_eq!(t.dist, bellman_ford(&g, s).unwrap().dist);
            super::super::check_tree(&g, t).unwrap();
        }
    }

    #[test]
    fn unreachable_vertices_use_virtual_source() {
        for seed in 0..40 {
            let g = random_digraph(30, 45, -4..=20, seed).unwrap();
            let sources = [0, 1, 2];
            let ms = match multi_source_sssp(&g, &sources) {
                Ok(ms) => ms,
                Err(SsspError::NegativeCycle(w)) => {
                    assert!(w.verify(&g));
                    continue;
                }
                Err(e) => panic!("{e}"),
            };
            for (t, &s) in ms.trees.iter().zip(&sources) {
                assert_eq!(t.dist, bellman_ford(&g, s).unwrap().dist, "seed {seed}");
            }
        }
    }

    #[test]
    fn cycle_reachable_only_from_later_source() {
        let g = digraph(4, &[(0, 1, 1), (2, 3, 1), (3, 2, -3)]);
        match multi_source_sssp(&g, &[0, 2]) {
            Err(SsspError::NegativeCycle(w)) => assert!(w.verify(&g)),
            other => panic!("{other:?}"),
        }
    }
}
