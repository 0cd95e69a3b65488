use super::weak::{build_regions, contract_for, local_view, peel_split, span, split_edges, support_of};
use super::{
    boundary_stats, weak_division, Division, DivisionError, DivisionKind, Phase, ScheduleConfig, SeparationRecord,
};
use crate::graph::{EdgeId, Graph};
use crate::separator::{separate, within, Backend, VertexWeighting};

/// Turns a weak division into a full one: while a region has more than
/// `c_bnd·p` boundary vertices, separate it with weight 1 on its boundary
/// vertices (0 elsewhere) and split its edges between the two sides.
///
/// Splitting a region only changes multiplicities of that region's own
/// vertices, so every other region's boundary is unaffected and regions can
/// be refined one at a time.
pub fn refine_division(g: &Graph, d: Division, c_bnd: f64, backend: Backend) -> Result<Division, DivisionError> {
    let support = support_of(g);
    let g = support.as_ref();
    let limit = c_bnd * d.p;
    let mut count = vec![0u32; g.n()];
    for region in &d.regions {
        for &v in &region.vertices {
            if v >= g.n() {
                return Err(DivisionError::Mismatch(format!("vertex {v} out of range")));
            }
            count[v] += 1;
        }
    }
    let mut index = vec![usize::MAX; g.n()];
    let mut log = d.stats.worklog.clone();
    let mut parts: Vec<Vec<EdgeId>> = Vec::with_capacity(d.regions.len());

    for (origin, region) in d.regions.iter().enumerate() {
        let mut stack = vec![(region.edge_ids.clone(), 0usize)];
        while let Some((edges, depth)) = stack.pop() {
            let view = local_view(g, &edges, &mut index);
            let size = view.vertices.len();
            let boundary: Vec<usize> = (0..size).filter(|&i| count[view.vertices[i]] >= 2).collect();
            if (boundary.len() as f64) <= limit {
                parts.push(edges);
                continue;
            }
            let weights = VertexWeighting::indicator(size, &boundary)?;
            let contract = contract_for(d.gamma_target)?;
            let sep = separate(&view.graph, &weights, &contract, backend)?;
            let total = weights.total();
            let strict_a = weights.sum(sep.strict_a());
            let strict_b = weights.sum(sep.strict_b());
            if !within(strict_a, contract.alpha, total) || !within(strict_b, contract.alpha, total) {
                return Err(DivisionError::NonProgress {
                    size,
                    boundary: boundary.len(),
                    detail: format!(
                        "separator left {strict_a} and {strict_b} of {total} boundary vertices on its sides"
                    ),
                });
            }
            let (a_edges, b_edges) = split_edges(g, &edges, &index, &sep, size);
            let fallback = a_edges.is_empty() || b_edges.is_empty();
            let children = if fallback {
                peel_split(g, &view, &edges, &index)
            } else {
                vec![a_edges, b_edges]
            };
            if children.len() < 2 {
                return Err(DivisionError::NonProgress {
                    size,
                    boundary: boundary.len(),
                    detail: "region cannot be split further".into(),
                });
            }
            let mut seen = vec![0u32; size];
            for child in &children {
                for v in span(g, child) {
                    seen[index[v]] += 1;
                }
            }
            for (i, &v) in view.vertices.iter().enumerate() {
                count[v] += seen[i] - 1;
            }
            log.push(SeparationRecord {
                phase: Phase::Refine,
                depth,
                region_size: size,
                gamma_prime: d.gamma_target,
                cost_units: (size as f64).powf(1.0 + d.gamma_target),
                separator_size: sep.s.len(),
                region_boundary: boundary.len(),
                origin,
                over_budget: sep.over_budget,
                fallback,
            });
            stack.extend(children.into_iter().rev().map(|e| (e, depth + 1)));
        }
    }

    let regions = build_regions(g, parts);
    let mut out = Division {
        kind: DivisionKind::Full,
        regions,
        ..d
    };
    out.stats.worklog = log;
    out.stats.boundary_sum = boundary_stats(&out).boundary_sum;
    Ok(out)
}

/// Weak division followed by refinement.
pub fn compute_division(
    g: &Graph,
    r: usize,
    schedule: &ScheduleConfig,
    backend: Backend,
    c_bnd: f64,
) -> Result<Division, DivisionError> {
    let weak = weak_division(g, r, schedule, backend)?;
    refine_division(g, weak.division, c_bnd, backend)
}
