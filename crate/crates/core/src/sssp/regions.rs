use super::{bellman_ford, check_source, extract_cycle, relax, Counted, ShortestPathTree, SsspError};
use crate::division::Division;
use crate::graph::{undirected_support, EdgeId, Graph};

pub fn region_bellman_ford(g: &Graph, d: &Division, s: usize) -> Result<ShortestPathTree, SsspError> {
    region_bellman_ford_counted(g, d, s).map(|c| c.tree)
}

/// Region-by-region relaxation over a division of the undirected support of
/// `g`. Each outer pass relaxes every region's arcs until that region is
/// quiet (at most `|region|` sweeps), then sweeps the arcs incident to
/// boundary vertices. Stops when an outer pass changes nothing; an outer
/// pass number `n` that still changes something means a negative cycle.
///
/// Every arc belongs to some region, so each outer pass does at least the
/// work of one Bellman-Ford pass and the result equals [`bellman_ford`].
pub fn region_bellman_ford_counted(g: &Graph, d: &Division, s: usize) -> Result<Counted, SsspError> {
    check_source(g, s)?;
    let n = g.n();
    let support = undirected_support(g);
    let mut covered = vec![0u32; support.graph.m()];
    let mut region_arcs: Vec<Vec<usize>> = Vec::with_capacity(d.regions.len());
    let mut count = vec![0u32; n];
    for region in &d.regions {
        let mut arcs = Vec::new();
        for &e in &region.edge_ids {
            let slot = covered
                .get_mut(e.index())
                .ok_or_else(|| SsspError::DivisionMismatch(format!("edge {} not in the support", e.index())))?;
            *slot += 1;
            arcs.extend_from_slice(&support.origin[e.index()]);
        }
        arcs.sort_unstable();
        for &v in &region.vertices {
            if v >= n {
                return Err(SsspError::DivisionMismatch(format!("vertex {v} out of range")));
            }
            count[v] += 1;
        }
        region_arcs.push(arcs);
    }
    if let Some(e) = covered.iter().position(|&c| c != 1) {
        return Err(SsspError::DivisionMismatch(format!(
            "support edge {e} lies in {} regions",
            covered[e]
        )));
    }
    let boundary_arcs: Vec<usize> = (0..g.m())
        .filter(|&i| {
            let e = g.edges()[i];
            count[e.u] >= 2 || count[e.v] >= 2
        })
        .collect();
    let sizes: Vec<usize> = d.regions.iter().map(|r| r.vertices.len().max(1)).collect();

    let mut dist = vec![None; n];
    let mut parent: Vec<Option<EdgeId>> = vec![None; n];
    dist[s] = Some(0);
    let outer = |dist: &mut [Option<i64>], parent: &mut [Option<EdgeId>]| -> Result<bool, SsspError> {
        let mut changed = false;
        for (arcs, &k) in region_arcs.iter().zip(&sizes) {
            for _ in 0..k {
                let mut local = false;
                for &i in arcs {
                    local |= relax(g, i, dist, parent)?;
                }
                changed |= local;
                if !local {
                    break;
                }
            }
        }
        for &i in &boundary_arcs {
            changed |= relax(g, i, dist, parent)?;
        }
        Ok(changed)
    };
    for passes in 1..=n.max(1) {
        if !outer(&mut dist, &mut parent)? {
            return Ok(Counted {
                tree: ShortestPathTree::from_parts(g, s, dist, parent),
                passes,
            });
        }
    }
    match extract_cycle(g, &mut dist, &mut parent, n, outer)? {
        Some(w) => Err(SsspError::NegativeCycle(w)),
        // parent cycles appear eventually; fall back to the plain solver's witness
        None => match bellman_ford(g, s) {
            Err(e @ SsspError::NegativeCycle(_)) => Err(e),
            _ => unreachable!("region relaxation diverged without a negative cycle"),
        },
    }
}
