use super::{assemble, within, Rational, Separation, SeparatorError, Side, VertexWeighting, N_BRUTE};
use crate::graph::Graph;
use std::collections::BTreeMap;

/// Exact minimum separator by exhaustive search over candidate sets `S`.
///
/// Among all α-balanced separations, returns one minimising `|S|`, then the
/// heavier strict side, then `S` lexicographically. For a fixed `S` the
/// components of `G - S` are split between the sides by an exact subset-sum.
pub fn brute_force_separator(
    g: &Graph,
    vw: &VertexWeighting,
    alpha: Rational,
) -> Result<Separation, SeparatorError> {
    let n = g.n();
    if n > N_BRUTE {
        return Err(SeparatorError::TooLarge { n, limit: N_BRUTE });
    }
    vw.check(n)?;
    let mut nbr = vec![0u32; n];
    for e in g.edges() {
        nbr[e.u] |= 1 << e.v;
        nbr[e.v] |= 1 << e.u;
    }

    for k in 0..=n {
        let mut best: Option<(u128, Vec<Side>)> = None;
        let mut idx: Vec<usize> = (0..k).collect();
        loop {
            let mask = idx.iter().fold(0u32, |m, &i| m | (1 << i));
            if let Some((heavy, labels)) = best_split(&nbr, vw, mask, alpha) {
                if best.as_ref().is_none_or(|(h, _)| heavy < *h) {
                    best = Some((heavy, labels));
                }
            }
            if !next_combination(&mut idx, n) {
                break;
            }
        }
        if let Some((_, labels)) = best {
            return Ok(assemble(&labels, vw));
        }
    }
    unreachable!("S = V is always a balanced separation")
}

/// Advances `idx` to the next k-combination of `0..n` in lexicographic order.
fn next_combination(idx: &mut [usize], n: usize) -> bool {
    let k = idx.len();
    let mut i = k;
    while i > 0 {
        i -= 1;
        if idx[i] < n - k + i {
            idx[i] += 1;
            for j in i + 1..k {
                idx[j] = idx[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

fn best_split(nbr: &[u32], vw: &VertexWeighting, sep: u32, alpha: Rational) -> Option<(u128, Vec<Side>)> {
    let n = nbr.len();
    let full: u32 = if n == 32 { u32::MAX } else { (1u32 << n) - 1 };
    let mut rest = full & !sep;
    let mut comps: Vec<(u32, u128)> = Vec::new();
    while rest != 0 {
        let start = rest.trailing_zeros();
        let mut comp = 1u32 << start;
        let mut frontier = comp;
        while frontier != 0 {
            let v = frontier.trailing_zeros() as usize;
            frontier &= frontier - 1;
            let fresh = nbr[v] & !sep & !comp;
            comp |= fresh;
            frontier |= fresh;
        }
        rest &= !comp;
        let w = (0..n).filter(|&v| comp >> v & 1 == 1).map(|v| vw.get(v)).sum();
        comps.push((comp, w));
    }

    // achievable A-side sums -> first component subset reaching it
    let mut reach: BTreeMap<u128, u32> = BTreeMap::new();
    reach.insert(0, 0);
    for (i, &(_, w)) in comps.iter().enumerate() {
        let snapshot: Vec<(u128, u32)> = reach.iter().map(|(&s, &m)| (s, m)).collect();
        for (s, m) in snapshot {
            reach.entry(s + w).or_insert(m | 1 << i);
        }
    }
    let rest_w: u128 = comps.iter().map(|c| c.1).sum();
    let total = vw.total();
    let (heavy, chosen) = reach
        .iter()
        .map(|(&x, &m)| (x.max(rest_w - x), std::cmp::Reverse(x), m))
        .min()
        .map(|(h, _, m)| (h, m))?;
    if !within(heavy, alpha, total) {
        return None;
    }
    let mut labels = vec![Side::Sep; n];
    for (i, &(comp, _)) in comps.iter().enumerate() {
        let side = if chosen >> i & 1 == 1 { Side::A } else { Side::B };
        for (v, label) in labels.iter_mut().enumerate() {
            if comp >> v & 1 == 1 {
                *label = side;
            }
        }
    }
    Some((heavy, labels))
}
