use super::{
    assemble, label_components, two_thirds, within, Rational, Separation, SeparatorError, Side,
    VertexWeighting,
};
use crate::graph::{components, Adjacency, Graph};

/// Packing probes per root, and per call, for layers that only balance once
/// the components beyond them are redistributed.
const PACK_PROBES_PER_ROOT: usize = 2;
const PACK_PROBES_TOTAL: usize = 16;

/// BFS-layer separator with α = 2/3 from a single pseudo-peripheral root.
pub fn bfs_layer_separator(g: &Graph, vw: &VertexWeighting) -> Result<Separation, SeparatorError> {
    bfs_layer_separator_with(g, vw, two_thirds(), 1)
}

struct Layers {
    order: Vec<usize>,
    dist: Vec<u32>,
    /// `order[starts[i]..starts[i + 1]]` is layer `i`.
    starts: Vec<usize>,
}

impl Layers {
    fn layer(&self, i: usize) -> &[usize] {
        &self.order[self.starts[i]..self.starts[i + 1]]
    }

    fn depth(&self) -> usize {
        self.starts.len() - 1
    }
}

fn bfs(adj: &Adjacency, root: usize) -> Layers {
    let mut dist = vec![u32::MAX; adj.n()];
    let mut order = vec![root];
    dist[root] = 0;
    let mut head = 0;
    while head < order.len() {
        let x = order[head];
        head += 1;
        for &y in adj.neighbors(x) {
            if dist[y] == u32::MAX {
                dist[y] = dist[x] + 1;
                order.push(y);
            }
        }
    }
    let mut starts = vec![0];
    starts.extend((1..order.len()).filter(|&i| dist[order[i]] != dist[order[i - 1]]));
    starts.push(order.len());
    Layers { order, dist, starts }
}

#[derive(Clone)]
enum Candidate {
    /// Layer `layer` of the BFS from `root`; inner layers go to A, outer to B.
    Layer { root: usize, layer: usize },
    /// An arbitrary separator whose components are packed onto the sides.
    Packed,
}

struct Best {
    size: usize,
    heavy: u128,
    s: Vec<usize>,
    kind: Candidate,
}

impl Best {
    fn beats(&self, size: usize, heavy: u128, s: &[usize]) -> bool {
        (size, heavy, s) < (self.size, self.heavy, self.s.as_slice())
    }
}

/// BFS-layer separator trying up to `max_roots` roots.
///
/// For each root the separator is a single BFS layer of the heaviest
/// component. Every layer whose inner and outer parts (plus the rest of the
/// graph placed on the lighter side) are α-balanced is a candidate; a few
/// small layers that fail this test are retried with their components packed
/// freely. The smallest candidate wins, then the best balance, then the
/// lexicographically smallest separator. The median-weight layer always
/// qualifies, so the result is always a valid α-balanced separation.
pub fn bfs_layer_separator_with(
    g: &Graph,
    vw: &VertexWeighting,
    alpha: Rational,
    max_roots: usize,
) -> Result<Separation, SeparatorError> {
    let n = g.n();
    vw.check(n)?;
    if vw.total() == 0 {
        return Err(SeparatorError::ZeroTotalWeight);
    }
    let total = vw.total();
    let adj = Adjacency::new(g);

    let none = vec![false; n];
    let (labels, wa, wb) = label_components(&adj, &none, vw, |_| None);
    if within(wa, alpha, total) && within(wb, alpha, total) {
        return Ok(assemble(&labels, vw));
    }

    let comps = components(&adj);
    let heavy_comp = comps
        .iter()
        .max_by(|x, y| vw.sum(x.iter().copied()).cmp(&vw.sum(y.iter().copied())).then(y[0].cmp(&x[0])))
        .expect("graph has at least one vertex");
    let comp_weight = vw.sum(heavy_comp.iter().copied());
    let outside = total - comp_weight;

    // pseudo-peripheral first root
    let sweep = bfs(&adj, heavy_comp[0]);
    let mut root = farthest(&sweep);
    let mut min_dist = vec![u32::MAX; n];
    let mut best: Option<Best> = None;
    let mut probes_left = PACK_PROBES_TOTAL;
    let mut in_sep = vec![false; n];

    for _ in 0..max_roots.max(1) {
        let layers = bfs(&adj, root);
        for &v in &layers.order {
            min_dist[v] = min_dist[v].min(layers.dist[v]);
        }
        let mut prefix = Vec::with_capacity(layers.depth() + 1);
        prefix.push(0u128);
        for i in 0..layers.depth() {
            let w = prefix[i] + vw.sum(layers.layer(i).iter().copied());
            prefix.push(w);
        }

        let mut probes: Vec<(usize, usize)> = Vec::new();
        for i in 0..layers.depth() {
            let size = layers.layer(i).len();
            let inner = prefix[i];
            let outer = comp_weight - prefix[i + 1];
            let heavy = inner.max(outer).max(inner.min(outer) + outside);
            if within(heavy, alpha, total) {
                let s = sorted(layers.layer(i));
                if best.as_ref().is_none_or(|b| b.beats(size, heavy, &s)) {
                    best = Some(Best {
                        size,
                        heavy,
                        s,
                        kind: Candidate::Layer { root, layer: i },
                    });
                }
            } else if within(inner, alpha, total) {
                probes.push((size, i));
            }
        }

        probes.sort_unstable();
        for &(size, i) in probes.iter().take(PACK_PROBES_PER_ROOT) {
            if probes_left == 0 || best.as_ref().is_some_and(|b| b.size <= size) {
                break;
            }
            probes_left -= 1;
            let layer = layers.layer(i);
            layer.iter().for_each(|&v| in_sep[v] = true);
            let (_, wa, wb) = label_components(&adj, &in_sep, vw, |_| None);
            layer.iter().for_each(|&v| in_sep[v] = false);
            let heavy = wa.max(wb);
            if within(heavy, alpha, total) {
                let s = sorted(layer);
                if best.as_ref().is_none_or(|b| b.beats(size, heavy, &s)) {
                    best = Some(Best {
                        size,
                        heavy,
                        s,
                        kind: Candidate::Packed,
                    });
                }
            }
        }

        // next root: farthest from all roots so far
        let next = heavy_comp
            .iter()
            .copied()
            .filter(|&v| min_dist[v] > 0)
            .max_by(|&x, &y| min_dist[x].cmp(&min_dist[y]).then(y.cmp(&x)));
        match next {
            Some(v) => root = v,
            None => break,
        }
    }

    let best = best.expect("the median layer is always balanced");
    best.s.iter().for_each(|&v| in_sep[v] = true);
    let labels = match best.kind {
        Candidate::Layer { root, layer } => {
            let layers = bfs(&adj, root);
            let cut = layer as u32;
            label_components(&adj, &in_sep, vw, |v| match layers.dist[v] {
                u32::MAX => None,
                d if d < cut => Some(Side::A),
                _ => Some(Side::B),
            })
            .0
        }
        Candidate::Packed => label_components(&adj, &in_sep, vw, |_| None).0,
    };
    Ok(assemble(&labels, vw))
}

fn farthest(layers: &Layers) -> usize {
    let last = layers.layer(layers.depth() - 1);
    *last.iter().min().unwrap()
}

fn sorted(xs: &[usize]) -> Vec<usize> {
    let mut v = xs.to_vec();
    v.sort_unstable();
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::gen::grid_undirected;
    use crate::separator::tests::{complete, cycle, path};
    use crate::separator::{validate_separation, SeparatorContract, SizeBudget};

    fn check(g: &Graph, vw: &VertexWeighting, s: &Separation) {
        let c = SeparatorContract::with(0.0, two_thirds(), SizeBudget::Fixed(usize::MAX)).unwrap();
        let r = validate_separation(g, vw, s, &c);
        assert!(r.passed, "{r:?}");
    }

    #[test]
    fn star_cuts_center() {
        let g = Graph::undirected(7, (1..7).map(|i| (0, i))).unwrap();
        let vw = VertexWeighting::unit(7);
        let s = bfs_layer_separator(&g, &vw).unwrap();
        check(&g, &vw, &s);
        assert_eq!(s.s, vec![0]);
    }

    #[test]
    fn p9_median_layer() {
        let g = path(9);
        let vw = VertexWeighting::unit(9);
        let s = bfs_layer_separator(&g, &vw).unwrap();
        check(&g, &vw, &s);
        assert_eq!(s.s, vec![4]);
        assert_eq!(s.alpha_achieved, Rational::new(4, 9));
    }

    #[test]
    fn grid_16_layer_bound() {
        let g = grid_undirected(16, 16).unwrap();
        let vw = VertexWeighting::unit(256);
        let s = bfs_layer_separator(&g, &vw).unwrap();
        check(&g, &vw, &s);
        assert!(s.s.len() <= 16, "{}", s.s.len());
    }

    #[test]
    fn more_roots_never_worse() {
        let g = grid_undirected(12, 9).unwrap();
        let vw = VertexWeighting::unit(108);
        let one = bfs_layer_separator_with(&g, &vw, two_thirds(), 1).unwrap();
        let many = bfs_layer_separator_with(&g, &vw, two_thirds(), 10).unwrap();
        check(&g, &vw, &many);
        assert!(many.s.len() <= one.s.len());
    }

    #[test]
    fn single_vertex_and_disconnected() {
        let g = Graph::undirected(1, []).unwrap();
        let s = bfs_layer_separator(&g, &VertexWeighting::unit(1)).unwrap();
        assert_eq!(s.s, vec![0]);

        // two triangles: nothing to cut
        let g = Graph::undirected(6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)]).unwrap();
        let s = bfs_layer_separator(&g, &VertexWeighting::unit(6)).unwrap();
        assert!(s.s.is_empty());
        assert_eq!(s.a, vec![0, 1, 2]);
    }

    #[test]
    fn heavy_component_with_light_rest() {
        // path of 9 plus 2 isolated vertices
        let mut pairs: Vec<(usize, usize)> = (1..9).map(|i| (i - 1, i)).collect();
        pairs.push((9, 10));
        let g = Graph::undirected(11, pairs).unwrap();
        let vw = VertexWeighting::unit(11);
        let s = bfs_layer_separator(&g, &vw).unwrap();
        check(&g, &vw, &s);
        assert_eq!(s.s.len(), 1);
    }

    #[test]
    fn boundary_weighted_cycle() {
        let g = cycle(10);
        let vw = VertexWeighting::indicator(10, &[0, 1, 2, 3, 4, 5]).unwrap();
        let s = bfs_layer_separator_with(&g, &vw, two_thirds(), 3).unwrap();
        check(&g, &vw, &s);
    }

    #[test]
    fn complete_graph_valid() {
        let g = complete(7);
        let vw = VertexWeighting::unit(7);
        let s = bfs_layer_separator(&g, &vw).unwrap();
        check(&g, &vw, &s);
    }
}
