use proptest::prelude::*;
use rdiv_core::division::{
    boundary_stats, compute_division, refine_division, validate_division, weak_division, DivisionConstants,
    DivisionKind, ScheduleConfig,
};
use rdiv_core::graph::gen::{generate_grid, grid_undirected, random_connected, random_digraph, shift_by_potential};
use rdiv_core::graph::io::{load_graph, save_graph, Format};
use rdiv_core::graph::{Edge, Graph};
use rdiv_core::separator::{
    bfs_layer_separator, brute_force_separator, two_thirds, validate_separation, Backend, SeparatorContract,
    SizeBudget, VertexWeighting,
};
use rdiv_core::sssp::{
    bellman_ford, check_tree, dijkstra, multi_source_sssp, reduce_weights, region_bellman_ford, Potentials, SsspError,
};

const STRUCTURAL: [&str; 4] = ["edge_partition", "region_size", "region_vertices", "boundary_sets"];

fn structural_ok(g: &Graph, d: &rdiv_core::division::Division) -> Result<(), String> {
    let report = validate_division(g, d, &DivisionConstants::default());
    for name in STRUCTURAL {
        let c = report.clause(name).unwrap();
        if !c.passed {
            return Err(format!("{name}: {}", c.detail));
        }
    }
    if !report.clause("recorded_stats").unwrap().passed {
        return Err("recorded B is stale".into());
    }
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn directed_files_round_trip(n in 2usize..40, m in 0usize..120, seed in any::<u64>()) {
        let g = random_digraph(n, m, -50..=50, seed).unwrap();
        let bytes = save_graph(&g);
        prop_assert_eq!(load_graph(&bytes, Format::Auto).unwrap(), g.clone());
        prop_assert_eq!(save_graph(&load_graph(&bytes, Format::Sp).unwrap()), bytes);
    }

    #[test]
    fn undirected_files_round_trip(n in 2usize..40, extra in 0usize..40, seed in any::<u64>()) {
        let g = random_connected(n, extra, seed).unwrap();
        let bytes = save_graph(&g);
        prop_assert_eq!(load_graph(&bytes, Format::Ud).unwrap(), g);
    }

    #[test]
    fn separators_valid_and_exact_dominates(n in 1usize..11, extra in 0usize..14, seed in any::<u64>(),
                                            weights in proptest::collection::vec(1u64..5, 11)) {
        let g = random_connected(n, extra, seed).unwrap();
        let unbounded = SeparatorContract::with(0.5, two_thirds(), SizeBudget::Fixed(usize::MAX)).unwrap();
        for vw in [VertexWeighting::unit(n), VertexWeighting::new(weights[..n].to_vec()).unwrap()] {
            let exact = brute_force_separator(&g, &vw, two_thirds()).unwrap();
            let heuristic = bfs_layer_separator(&g, &vw).unwrap();
            let exact_report = validate_separation(&g, &vw, &exact, &unbounded);
            let heuristic_report = validate_separation(&g, &vw, &heuristic, &unbounded);
            prop_assert!(exact_report.passed, "{:?}", exact_report);
            prop_assert!(heuristic_report.passed, "{:?}", heuristic_report);
            prop_assert!(heuristic.s.len() >= exact.s.len());
        }
    }

    #[test]
    fn division_invariants(n in 2usize..120, extra in 0usize..60, seed in any::<u64>(), r in 2usize..40,
                           gamma in prop::sample::select(vec![0.0, 0.125, 0.25, 0.5]),
                           fixed in any::<bool>()) {
        let g = random_connected(n, extra, seed).unwrap();
        let schedule = if fixed { ScheduleConfig::fixed(gamma) } else { ScheduleConfig::adaptive(gamma) };
        let weak = weak_division(&g, r, &schedule, Backend::Auto).unwrap();
        structural_ok(&g, &weak.division).map_err(TestCaseError::fail)?;
        let stats = &weak.stats;
        // every vertex of a connected graph with an edge lies in a region
        prop_assert_eq!(stats.region_size_sum, n + stats.boundary_sum);
        for rec in &weak.division.stats.worklog.records {
            prop_assert!(rec.gamma_prime >= 0.0 && rec.gamma_prime <= gamma + 1e-12);
        }
        prop_assert_eq!(weak.division.stats.clamps, 0);

        let before = weak.division.clone();
        let full = refine_division(&g, weak.division, 4.0, Backend::Auto).unwrap();
        structural_ok(&g, &full).map_err(TestCaseError::fail)?;
        prop_assert_eq!(full.kind, DivisionKind::Full);
        let report = validate_division(&g, &full, &DivisionConstants::default());
        prop_assert!(report.clause("full_boundary").unwrap().passed, "{:?}", report);
        let max_before = before.regions.iter().map(|r| r.vertices.len()).max().unwrap_or(0);
        prop_assert!(full.regions.iter().all(|r| r.vertices.len() <= max_before));
        let full_stats = boundary_stats(&full);
        prop_assert_eq!(full_stats.region_size_sum, full_stats.covered + full_stats.boundary_sum);
    }

    #[test]
    fn small_grids_with_exact_separator(w in 1usize..5, h in 2usize..5, r in 2usize..12,
                                        gamma in prop::sample::select(vec![0.0, 0.25, 0.5])) {
        let g = grid_undirected(w, h).unwrap();
        let d = compute_division(&g, r, &ScheduleConfig::adaptive(gamma), Backend::Brute, 4.0).unwrap();
        let report = validate_division(&g, &d, &DivisionConstants::default());
        prop_assert!(report.passed, "{:?}", report);
    }

    #[test]
    fn reduction_telescopes(n in 2usize..60, m in 1usize..180, seed in any::<u64>(), s in 0usize..60) {
        let g = shift_by_potential(&random_digraph(n, m, 0..=30, seed).unwrap(), -40..=40, seed ^ 1).unwrap();
        let s = s % n;
        // potentials valid for every arc: distances from a zero-weight virtual source
        let mut arcs = g.edges().to_vec();
        arcs.extend((0..n).map(|v| Edge::new(n, v, 0)));
        let aug = Graph::directed(n + 1, arcs).unwrap();
        let phi = Potentials(bellman_ford(&aug, n).unwrap().dist[..n].iter().map(|d| d.unwrap()).collect());
        let reduced = reduce_weights(&g, &phi).unwrap();
        prop_assert!(reduced.edges().iter().all(|e| e.w >= 0));
        let original = bellman_ford(&g, s).unwrap();
        let via_dijkstra = dijkstra(&reduced, s).unwrap();
        for v in 0..n {
            prop_assert_eq!(via_dijkstra.dist[v], original.dist[v].map(|d| d + phi.0[s] - phi.0[v]));
        }
    }

    #[test]
    fn solvers_agree(w in 2usize..9, h in 2usize..9, seed in any::<u64>(), k in 1usize..5) {
        let g = shift_by_potential(&generate_grid(w, h, 0..=15, seed).unwrap(), -20..=20, seed ^ 7).unwrap();
        let n = g.n();
        let d = compute_division(&g, (n / 3).max(2), &ScheduleConfig::adaptive(0.5), Backend::Auto, 4.0).unwrap();
        let sources: Vec<usize> = (0..k).map(|i| (seed as usize).wrapping_add(i * 7) % n).collect();
        let ms = multi_source_sssp(&g, &sources).unwrap();
        for (t, &s) in ms.trees.iter().zip(&sources) {
            let bf = bellman_ford(&g, s).unwrap();
            prop_assert_eq!(&t.dist, &bf.dist);
            prop_assert_eq!(&region_bellman_ford(&g, &d, s).unwrap().dist, &bf.dist);
            prop_assert!(check_tree(&g, t).is_ok());
        }
    }

    #[test]
    fn witnesses_verify(n in 2usize..50, m in 2usize..150, seed in any::<u64>()) {
        let g = random_digraph(n, m, -20..=20, seed).unwrap();
        match bellman_ford(&g, 0) {
            Ok(t) => prop_assert!(check_tree(&g, &t).is_ok()),
            Err(SsspError::NegativeCycle(w)) => prop_assert!(w.verify(&g)),
            Err(e) => prop_assert!(false, "{}", e),
        }
    }
}
