use super::{
    boundary_budget, boundary_stats, BoundaryStats, Division, DivisionError, DivisionKind, DivisionStats, Phase,
    Region, ScheduleConfig, SeparationRecord, WorkLog,
};
use crate::graph::{components, undirected_support, Adjacency, EdgeId, Graph};
use crate::separator::{
    separate, two_thirds, Backend, Separation, SeparatorContract, SizeBudget, VertexWeighting, DEFAULT_C_SEP,
};
use std::borrow::Cow;

#[derive(Debug, Clone)]
pub struct WeakDivision {
    pub division: Division,
    pub stats: BoundaryStats,
}

pub(super) fn support_of(g: &Graph) -> Cow<'_, Graph> {
    if g.is_directed() {
        Cow::Owned(undirected_support(g).graph)
    } else {
        Cow::Borrowed(g)
    }
}

/// Region of the support graph relabelled onto `0..k`.
pub(super) struct LocalView {
    pub vertices: Vec<usize>,
    pub graph: Graph,
}

/// `index` is scratch space of length `g.n()`; entries for the region's
/// vertices are overwritten.
pub(super) fn local_view(g: &Graph, edges: &[EdgeId], index: &mut [usize]) -> LocalView {
    let vertices = span(g, edges);
    for (i, &v) in vertices.iter().enumerate() {
        index[v] = i;
    }
    let pairs = edges.iter().map(|&e| {
        let e = g.edge(e);
        (index[e.u], index[e.v])
    });
    let graph = Graph::undirected(vertices.len(), pairs).expect("support edges are simple");
    LocalView { vertices, graph }
}

/// Sorted endpoints of `edges`.
pub(super) fn span(g: &Graph, edges: &[EdgeId]) -> Vec<usize> {
    let mut vs: Vec<usize> = edges
        .iter()
        .flat_map(|&e| {
            let e = g.edge(e);
            [e.u, e.v]
        })
        .collect();
    vs.sort_unstable();
    vs.dedup();
    vs
}

/// Splits region edges along a separation of its local view. An edge goes
/// to the B child if it touches `B \ A`, otherwise to the A child; so edges
/// inside the separator land on the A side.
pub(super) fn split_edges(
    g: &Graph,
    edges: &[EdgeId],
    index: &[usize],
    sep: &Separation,
    k: usize,
) -> (Vec<EdgeId>, Vec<EdgeId>) {
    let mut strict_b = vec![false; k];
    for v in sep.strict_b() {
        strict_b[v] = true;
    }
    edges.iter().partition(|&&e| {
        let e = g.edge(e);
        !(strict_b[index[e.u]] || strict_b[index[e.v]])
    })
}

/// Progress-guaranteeing split used when a separator leaves one side empty
/// (complete graphs, for instance): peel the star of a minimum-degree vertex,
/// halving the star when it alone would span the whole region.
pub(super) fn peel_split(g: &Graph, view: &LocalView, edges: &[EdgeId], index: &[usize]) -> Vec<Vec<EdgeId>> {
    let adj = Adjacency::new(&view.graph);
    let k = view.vertices.len();
    let v = (0..k).min_by_key(|&x| (adj.degree(x), x)).expect("non-empty region");
    let (star, rest): (Vec<EdgeId>, Vec<EdgeId>) = edges.iter().partition(|&&e| {
        let e = g.edge(e);
        index[e.u] == v || index[e.v] == v
    });
    let mut out = Vec::new();
    if !rest.is_empty() {
        out.push(rest);
    }
    if star.len() + 1 == k && star.len() >= 2 {
        let half = star.len().div_ceil(2);
        out.push(star[..half].to_vec());
        out.push(star[half..].to_vec());
    } else {
        out.push(star);
    }
    out
}

/// First-fit packing of small components into groups of at most `r` vertices.
fn pack_components(comps: Vec<(Vec<EdgeId>, usize)>, r: usize) -> Vec<Vec<EdgeId>> {
    let mut bins: Vec<(Vec<EdgeId>, usize)> = Vec::new();
    for (edges, size) in comps {
        match bins.iter_mut().find(|(_, used)| used + size <= r) {
            Some(bin) => {
                bin.0.extend(edges);
                bin.1 += size;
            }
            None => bins.push((edges, size)),
        }
    }
    bins.into_iter()
        .map(|(mut e, _)| {
            e.sort_unstable();
            e
        })
        .collect()
}

/// Edge sets of the connected components of a region, each with its vertex count.
fn region_components(g: &Graph, view: &LocalView, edges: &[EdgeId], index: &[usize]) -> Vec<(Vec<EdgeId>, usize)> {
    let comps = components(&Adjacency::new(&view.graph));
    if comps.len() == 1 {
        return vec![(edges.to_vec(), view.vertices.len())];
    }
    let mut comp_of = vec![0usize; view.vertices.len()];
    for (c, vs) in comps.iter().enumerate() {
        vs.iter().for_each(|&v| comp_of[v] = c);
    }
    let mut out: Vec<(Vec<EdgeId>, usize)> = comps.iter().map(|vs| (Vec::new(), vs.len())).collect();
    for &e in edges {
        out[comp_of[index[g.edge(e).u]]].0.push(e);
    }
    out
}

pub(super) fn contract_for(gamma_prime: f64) -> Result<SeparatorContract, DivisionError> {
    Ok(SeparatorContract::with(
        gamma_prime,
        two_thirds(),
        SizeBudget::Power { c_sep: DEFAULT_C_SEP },
    )?)
}

/// Builds regions (vertex and boundary sets) from edge sets.
pub(super) fn build_regions(g: &Graph, parts: Vec<Vec<EdgeId>>) -> Vec<Region> {
    let mut count = vec![0u32; g.n()];
    let spans: Vec<Vec<usize>> = parts.iter().map(|edges| span(g, edges)).collect();
    for vs in &spans {
        vs.iter().for_each(|&v| count[v] += 1);
    }
    parts
        .into_iter()
        .zip(spans)
        .map(|(mut edge_ids, vertices)| {
            edge_ids.sort_unstable();
            let boundary = vertices.iter().copied().filter(|&v| count[v] >= 2).collect();
            Region {
                edge_ids,
                vertices,
                boundary,
            }
        })
        .collect()
}

/// Recursive weak (r, p)-division of the undirected support of `g`.
///
/// Regions of at most `r` vertices are final. A larger region that is
/// disconnected is split into its components (small components are packed
/// together). A larger connected region is separated with unit weights,
/// α = 2/3 and the schedule's exponent, and its edges are split between the
/// two sides.
pub fn weak_division(
    g: &Graph,
    r: usize,
    schedule: &ScheduleConfig,
    backend: Backend,
) -> Result<WeakDivision, DivisionError> {
    schedule.validate()?;
    let support = support_of(g);
    let g = support.as_ref();
    let n = g.n();
    if r < 2 && g.m() > 0 {
        return Err(DivisionError::InvalidRadius { r });
    }
    let p = boundary_budget(r, schedule.gamma_target);
    let mut log = WorkLog::default();
    let mut clamps = 0;
    let mut index = vec![usize::MAX; n];
    let mut done: Vec<Vec<EdgeId>> = Vec::new();

    let all: Vec<EdgeId> = (0..g.m()).map(EdgeId).collect();
    let mut stack: Vec<(Vec<EdgeId>, usize)> = if all.is_empty() { vec![] } else { vec![(all, 0)] };

    while let Some((edges, depth)) = stack.pop() {
        let view = local_view(g, &edges, &mut index);
        let size = view.vertices.len();
        if size <= r {
            done.push(edges);
            continue;
        }
        let comps = region_components(g, &view, &edges, &index);
        if comps.len() > 1 {
            let (small, large): (Vec<_>, Vec<_>) = comps.into_iter().partition(|(_, s)| *s <= r);
            let mut children: Vec<(Vec<EdgeId>, usize)> = pack_components(small, r)
                .into_iter()
                .map(|e| (e, depth))
                .collect();
            children.extend(large.into_iter().map(|(e, _)| (e, depth)));
            stack.extend(children.into_iter().rev());
            continue;
        }

        let gamma = schedule.gamma(size, r, p, n)?;
        if gamma.clamped {
            if schedule.strict_clamp {
                return Err(DivisionError::StrictClamp { size });
            }
            clamps += 1;
        }
        let contract = contract_for(gamma.value)?;
        let sep = separate(&view.graph, &VertexWeighting::unit(size), &contract, backend)?;
        let (a_edges, b_edges) = split_edges(g, &edges, &index, &sep, size);
        let progress = !a_edges.is_empty()
            && !b_edges.is_empty()
            && span(g, &a_edges).len() < size
            && span(g, &b_edges).len() < size;
        let children = if progress {
            vec![a_edges, b_edges]
        } else {
            peel_split(g, &view, &edges, &index)
        };
        log.push(SeparationRecord {
            phase: Phase::Weak,
            depth,
            region_size: size,
            gamma_prime: gamma.value,
            cost_units: (size as f64).powf(1.0 + gamma.value),
            separator_size: sep.s.len(),
            region_boundary: 0,
            origin: 0,
            over_budget: sep.over_budget,
            fallback: !progress,
        });
        stack.extend(children.into_iter().rev().map(|e| (e, depth + 1)));
    }

    let regions = build_regions(g, done);
    let mut division = Division {
        r,
        p,
        gamma_target: schedule.gamma_target,
        kind: DivisionKind::Weak,
        regions,
        stats: DivisionStats {
            boundary_sum: 0,
            clamps,
            worklog: log,
        },
    };
    let stats = boundary_stats(&division);
    division.stats.boundary_sum = stats.boundary_sum;
    Ok(WeakDivision { division, stats })
}
