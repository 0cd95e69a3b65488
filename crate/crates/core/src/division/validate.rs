use super::weak::{span, support_of};
use super::{Division, DivisionKind};
use crate::graph::Graph;
use serde::Serialize;
use std::collections::BTreeMap;

/// Calibrated validator constants. These are measured on the grid suite with
/// the BFS-layer backend and then frozen; they are not derived bounds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DivisionConstants {
    /// Full divisions: `|boundary(R)| <= c_bnd·p` for every region.
    pub c_bnd: f64,
    /// Region count `<= c_cnt·ceil(n/r)`.
    pub c_cnt: f64,
    /// Boundary sum `B <= c_B·p·n/r`.
    pub c_b: f64,
}

impl Default for DivisionConstants {
    fn default() -> Self {
        DivisionConstants {
            c_bnd: 4.0,
            c_cnt: 4.0,
            c_b: 8.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundaryStats {
    /// `b(v)` = regions containing `v`, minus one; only boundary vertices.
    pub b: BTreeMap<usize, usize>,
    #[serde(rename = "B")]
    pub boundary_sum: usize,
    pub per_region_boundary: Vec<usize>,
    /// `Σ_R |vertices(R)|`
    pub region_size_sum: usize,
    /// Vertices lying in at least one region.
    pub covered: usize,
}

/// Exact boundary multiplicities. `region_size_sum = covered + B` always.
pub fn boundary_stats(d: &Division) -> BoundaryStats {
    let mut regions_of: BTreeMap<usize, usize> = BTreeMap::new();
    for region in &d.regions {
        for &v in &region.vertices {
            *regions_of.entry(v).or_default() += 1;
        }
    }
    let b: BTreeMap<usize, usize> = regions_of
        .iter()
        .filter(|&(_, &k)| k >= 2)
        .map(|(&v, &k)| (v, k - 1))
        .collect();
    BoundaryStats {
        boundary_sum: b.values().sum(),
        b,
        per_region_boundary: d.regions.iter().map(|r| r.boundary.len()).collect(),
        region_size_sum: d.regions.iter().map(|r| r.vertices.len()).sum(),
        covered: regions_of.len(),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Clause {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DivisionReport {
    pub passed: bool,
    pub clauses: Vec<Clause>,
    pub regions: usize,
    pub max_region_size: usize,
    pub max_region_boundary: usize,
    #[serde(rename = "B")]
    pub boundary_sum: usize,
    /// `B / (p·n/r)`
    pub boundary_ratio: f64,
}

impl DivisionReport {
    pub fn clause(&self, name: &str) -> Option<&Clause> {
        self.clauses.iter().find(|c| c.name == name)
    }
}

/// Checks a division against the support of `g`: exact edge partition,
/// region sizes, vertex and boundary sets, the full-division boundary bound,
/// the region count, and the boundary sum.
pub fn validate_division(g: &Graph, d: &Division, constants: &DivisionConstants) -> DivisionReport {
    let support = support_of(g);
    let g = support.as_ref();
    let n = g.n();
    let m = g.m();
    let mut clauses = Vec::new();
    let mut push = |name: &'static str, passed: bool, detail: String| clauses.push(Clause { name, passed, detail });

    // edge partition
    let mut owner = vec![0u32; m];
    let mut out_of_range = 0;
    for region in &d.regions {
        for &e in &region.edge_ids {
            match owner.get_mut(e.index()) {
                Some(c) => *c += 1,
                None => out_of_range += 1,
            }
        }
    }
    let missing = owner.iter().filter(|&&c| c == 0).count();
    let repeated = owner.iter().filter(|&&c| c > 1).count();
    push(
        "edge_partition",
        missing == 0 && repeated == 0 && out_of_range == 0,
        format!("{missing} edges uncovered, {repeated} in several regions, {out_of_range} out of range"),
    );
    if out_of_range > 0 {
        let report = DivisionReport {
            passed: false,
            clauses,
            regions: d.regions.len(),
            max_region_size: 0,
            max_region_boundary: 0,
            boundary_sum: 0,
            boundary_ratio: f64::NAN,
        };
        return report;
    }

    // region sizes
    let max_size = d.regions.iter().map(|r| r.vertices.len()).max().unwrap_or(0);
    let oversized = d.regions.iter().filter(|r| r.vertices.len() > d.r).count();
    push(
        "region_size",
        oversized == 0,
        format!("{oversized} regions exceed r = {} (largest {max_size})", d.r),
    );

    // vertex sets are the endpoints of the edges
    let spans: Vec<Vec<usize>> = d.regions.iter().map(|r| span(g, &r.edge_ids)).collect();
    let bad_vertices = d.regions.iter().zip(&spans).filter(|(r, s)| &r.vertices != *s).count();
    push(
        "region_vertices",
        bad_vertices == 0,
        format!("{bad_vertices} regions whose vertex set differs from their edge endpoints"),
    );

    // boundary = vertices in two or more regions
    let mut count = vec![0u32; n];
    for s in &spans {
        s.iter().for_each(|&v| count[v] += 1);
    }
    let bad_boundary = d
        .regions
        .iter()
        .zip(&spans)
        .filter(|(r, s)| {
            let expect: Vec<usize> = s.iter().copied().filter(|&v| count[v] >= 2).collect();
            r.boundary != expect
        })
        .count();
    push(
        "boundary_sets",
        bad_boundary == 0,
        format!("{bad_boundary} regions with inconsistent boundary sets"),
    );

    let max_boundary = d.regions.iter().map(|r| r.boundary.len()).max().unwrap_or(0);
    if d.kind == DivisionKind::Full {
        let limit = constants.c_bnd * d.p;
        push(
            "full_boundary",
            max_boundary as f64 <= limit,
            format!("largest boundary {max_boundary}, limit c_bnd·p = {limit:.3}"),
        );
    }

    let units = if d.r == 0 { 1 } else { n.div_ceil(d.r).max(1) };
    let count_limit = constants.c_cnt * units as f64;
    push(
        "region_count",
        d.regions.len() as f64 <= count_limit,
        format!("{} regions, limit c_cnt·ceil(n/r) = {count_limit:.1}", d.regions.len()),
    );

    let boundary_sum: usize = count.iter().filter(|&&c| c >= 2).map(|&c| c as usize - 1).sum();
    let scale = d.p * n as f64 / d.r.max(1) as f64;
    let ratio = if scale > 0.0 { boundary_sum as f64 / scale } else { 0.0 };
    push(
        "boundary_sum",
        ratio <= constants.c_b,
        format!("B = {boundary_sum}, B/(p·n/r) = {ratio:.4}, limit c_B = {}", constants.c_b),
    );
    push(
        "recorded_stats",
        d.stats.boundary_sum == boundary_sum,
        format!("recorded B = {}, recomputed {boundary_sum}", d.stats.boundary_sum),
    );

    DivisionReport {
        passed: clauses.iter().all(|c| c.passed),
        clauses,
        regions: d.regions.len(),
        max_region_size: max_size,
        max_region_boundary: max_boundary,
        boundary_sum,
        boundary_ratio: ratio,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::division::{DivisionStats, Region, WorkLog};
    use crate::graph::EdgeId;

    fn p5() -> Graph {
        Graph::undirected(5, (1..5).map(|i| (i - 1, i))).unwrap()
    }

    fn division(regions: Vec<Region>, r: usize) -> Division {
        let mut d = Division {
            r,
            p: 1.0,
            gamma_target: 0.5,
            kind: DivisionKind::Weak,
            regions,
            stats: DivisionStats {
                boundary_sum: 0,
                clamps: 0,
                worklog: WorkLog::default(),
            },
        };
        d.stats.boundary_sum = boundary_stats(&d).boundary_sum;
        d
    }

    fn region(edges: &[usize], vertices: &[usize], boundary: &[usize]) -> Region {
        Region {
            edge_ids: edges.iter().map(|&e| EdgeId(e)).collect(),
            vertices: vertices.to_vec(),
            boundary: boundary.to_vec(),
        }
    }

    #[test]
    fn two_region_p5_passes() {
        let d = division(vec![region(&[0, 1], &[0, 1, 2], &[2]), region(&[2, 3], &[2, 3, 4], &[2])], 3);
        let report = validate_division(&p5(), &d, &DivisionConstants::default());
        assert!(report.passed, "{report:?}");
        let stats = boundary_stats(&d);
        assert_eq!(stats.boundary_sum, 1);
        assert_eq!(stats.region_size_sum, stats.covered + stats.boundary_sum);
    }

    #[test]
    fn duplicated_edge_fails_partition() {
        let d = division(vec![region(&[0, 1, 2], &[0, 1, 2, 3], &[2, 3]), region(&[2, 3], &[2, 3, 4], &[2, 3])], 4);
        let report = validate_division(&p5(), &d, &DivisionConstants::default());
        assert!(!report.clause("edge_partition").unwrap().passed);
        assert!(report.clause("region_size").unwrap().passed);
    }

    #[test]
    fn oversized_region_fails_size() {
        let d = division(vec![region(&[0, 1, 2, 3], &[0, 1, 2, 3, 4], &[])], 4);
        let report = validate_division(&p5(), &d, &DivisionConstants::default());
        assert!(!report.clause("region_size").unwrap().passed);
        assert!(report.clause("edge_partition").unwrap().passed);
    }

    #[test]
    fn wrong_boundary_and_vertices_detected() {
        let d = division(vec![region(&[0, 1], &[0, 1, 2], &[]), region(&[2, 3], &[2, 3], &[2])], 3);
        let report = validate_division(&p5(), &d, &DivisionConstants::default());
        assert!(!report.clause("boundary_sets").unwrap().passed);
        assert!(!report.clause("region_vertices").unwrap().passed);
    }

    #[test]
    fn full_boundary_clause() {
        let mut d = division(vec![region(&[0, 1], &[0, 1, 2], &[2]), region(&[2, 3], &[2, 3, 4], &[2])], 3);
        d.kind = DivisionKind::Full;
        let tight = DivisionConstants {
            c_bnd: 0.5,
            ..Default::default()
        };
        assert!(!validate_division(&p5(), &d, &tight).clause("full_boundary").unwrap().passed);
        assert!(validate_division(&p5(), &d, &DivisionConstants::default()).passed);
    }

    #[test]
    fn single_region_has_zero_b() {
        let d = division(vec![region(&[0, 1, 2, 3], &[0, 1, 2, 3, 4], &[])], 5);
        assert_eq!(boundary_stats(&d).boundary_sum, 0);
    }
}
