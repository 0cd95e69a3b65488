//! Balanced vertex separators.
//!
//! A separation `(A, B)` covers `V`, has no edge between `A \ B` and `B \ A`,
//! and its separator is `S = A ∩ B`. It is α-balanced for a vertex weighting
//! `w` when `w(A \ B) <= α·w(V)` and `w(B \ A) <= α·w(V)`. Balance is always
//! decided with exact integer arithmetic.
//!
//! Two backends implement the same [`SeparatorContract`]: an exhaustive exact
//! search for small graphs ([`brute_force_separator`]) and a BFS-layer
//! heuristic ([`bfs_layer_separator`]). [`separate`] dispatches between them.

mod bfs;
mod brute;

pub use bfs::{bfs_layer_separator, bfs_layer_separator_with};
pub use brute::brute_force_separator;

use crate::graph::{Adjacency, Graph};
use num_rational::Ratio;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::fmt;
use std::str::FromStr;
use thiserror::Error;

/// Largest graph the exhaustive backend accepts.
pub const N_BRUTE: usize = 18;
/// Default multiplier of the separator size budget `c_sep · n^((2-γ')/3)`.
pub const DEFAULT_C_SEP: f64 = 4.0;

pub type Rational = Ratio<u64>;

pub fn two_thirds() -> Rational {
    Rational::new(2, 3)
}

#[derive(Debug, Error, PartialEq)]
pub enum SeparatorError {
    #[error("weighting has {found} entries for a graph with {expected} vertices")]
    WeightLength { expected: usize, found: usize },
    #[error("total vertex weight is zero")]
    ZeroTotalWeight,
    #[error("exhaustive search refused: {n} vertices exceeds the limit of {limit}")]
    TooLarge { n: usize, limit: usize },
    #[error("invalid separator contract: {0}")]
    InvalidContract(String),
}

/// Non-negative integer vertex weights. Rational weightings are represented
/// by scaling to a common denominator; balance only depends on ratios.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VertexWeighting {
    weights: Vec<u64>,
    total: u128,
}

impl VertexWeighting {
    pub fn new(weights: Vec<u64>) -> Result<Self, SeparatorError> {
        let total: u128 = weights.iter().map(|&w| w as u128).sum();
        if total == 0 {
            return Err(SeparatorError::ZeroTotalWeight);
        }
        Ok(VertexWeighting { weights, total })
    }

    pub fn unit(n: usize) -> Self {
        VertexWeighting {
            weights: vec![1; n],
            total: n as u128,
        }
    }

    /// Weight 1 on each vertex of `set`, 0 elsewhere.
    pub fn indicator(n: usize, set: &[usize]) -> Result<Self, SeparatorError> {
        let mut weights = vec![0; n];
        for &v in set {
            weights[v] = 1;
        }
        Self::new(weights)
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn get(&self, v: usize) -> u128 {
        self.weights[v] as u128
    }

    pub fn total(&self) -> u128 {
        self.total
    }

    pub fn sum(&self, vs: impl IntoIterator<Item = usize>) -> u128 {
        vs.into_iter().map(|v| self.get(v)).sum()
    }

    fn check(&self, n: usize) -> Result<(), SeparatorError> {
        if self.weights.len() != n {
            return Err(SeparatorError::WeightLength {
                expected: n,
                found: self.weights.len(),
            });
        }
        Ok(())
    }
}

/// `weight <= alpha * total`, exactly.
pub(crate) fn within(weight: u128, alpha: Rational, total: u128) -> bool {
    weight * (*alpha.denom() as u128) <= (*alpha.numer() as u128) * total
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SizeBudget {
    /// `floor(c_sep · n^((2 - γ')/3))`
    Power { c_sep: f64 },
    Fixed(usize),
}

/// The `(f(n), α, T(n))` contract a backend is asked to honour.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeparatorContract {
    pub alpha: Rational,
    pub gamma_prime: f64,
    pub budget: SizeBudget,
}

impl SeparatorContract {
    pub fn new(gamma_prime: f64) -> Result<Self, SeparatorError> {
        Self::with(gamma_prime, two_thirds(), SizeBudget::Power { c_sep: DEFAULT_C_SEP })
    }

    pub fn with(gamma_prime: f64, alpha: Rational, budget: SizeBudget) -> Result<Self, SeparatorError> {
        if !(0.0..=0.5).contains(&gamma_prime) {
            return Err(SeparatorError::InvalidContract(format!(
                "gamma' = {gamma_prime} outside [0, 1/2]"
            )));
        }
        if alpha < Rational::new(1, 2) || alpha > two_thirds() {
            return Err(SeparatorError::InvalidContract(format!(
                "alpha = {alpha} outside [1/2, 2/3]"
            )));
        }
        Ok(SeparatorContract {
            alpha,
            gamma_prime,
            budget,
        })
    }

    pub fn size_bound(&self, n: usize) -> usize {
        match self.budget {
            SizeBudget::Fixed(b) => b,
            SizeBudget::Power { c_sep } => {
                (c_sep * (n as f64).powf((2.0 - self.gamma_prime) / 3.0)).floor() as usize
            }
        }
    }

    /// Number of BFS roots the heuristic backend may try: `ceil(n^γ')`, so the
    /// heuristic's work tracks the `n^(1+γ')` time side of the contract.
    pub fn effort(&self, n: usize) -> usize {
        ((n.max(1) as f64).powf(self.gamma_prime).ceil() as usize).max(1)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Backend {
    Brute,
    BfsLayer,
    /// Exhaustive up to [`N_BRUTE`] vertices, BFS-layer above.
    #[default]
    Auto,
}

impl FromStr for Backend {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "brute" => Ok(Backend::Brute),
            "bfs-layer" => Ok(Backend::BfsLayer),
            "auto" => Ok(Backend::Auto),
            _ => Err(format!("unknown separator backend `{s}`")),
        }
    }
}

impl fmt::Display for Backend {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Backend::Brute => "brute",
            Backend::BfsLayer => "bfs-layer",
            Backend::Auto => "auto",
        })
    }
}

/// A separation `(A, B)` with `S = A ∩ B`. Vertex lists are sorted.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Separation {
    #[serde(rename = "A")]
    pub a: Vec<usize>,
    #[serde(rename = "B")]
    pub b: Vec<usize>,
    #[serde(rename = "S")]
    pub s: Vec<usize>,
    #[serde(serialize_with = "ser_ratio", deserialize_with = "de_ratio")]
    pub alpha_achieved: Rational,
    /// Set by [`separate`] when `|S|` exceeds the contract's size budget.
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub over_budget: bool,
}

fn ser_ratio<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&format!("{}/{}", r.numer(), r.denom()))
}

fn de_ratio<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
    let s = String::deserialize(d)?;
    parse_rational(&s).map_err(serde::de::Error::custom)
}

/// Parses `p/q` or a plain integer.
pub fn parse_rational(s: &str) -> Result<Rational, String> {
    let s = s.trim();
    let (p, q) = match s.split_once('/') {
        Some((p, q)) => (p.trim(), q.trim()),
        None => (s, "1"),
    };
    let p: u64 = p.parse().map_err(|_| format!("bad rational `{s}`"))?;
    let q: u64 = q.parse().map_err(|_| format!("bad rational `{s}`"))?;
    if q == 0 {
        return Err(format!("zero denominator in `{s}`"));
    }
    Ok(Rational::new(p, q))
}

impl Separation {
    pub fn strict_a(&self) -> Vec<usize> {
        difference(&self.a, &self.s)
    }

    pub fn strict_b(&self) -> Vec<usize> {
        difference(&self.b, &self.s)
    }
}

fn difference(xs: &[usize], ys: &[usize]) -> Vec<usize> {
    xs.iter().copied().filter(|x| ys.binary_search(x).is_err()).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Side {
    A,
    B,
    Sep,
}

pub(crate) fn assemble(labels: &[Side], vw: &VertexWeighting) -> Separation {
    let mut a = Vec::new();
    let mut b = Vec::new();
    let mut s = Vec::new();
    let (mut wa, mut wb) = (0u128, 0u128);
    for (v, side) in labels.iter().enumerate() {
        match side {
            Side::A => {
                a.push(v);
                wa += vw.get(v);
            }
            Side::B => {
                b.push(v);
                wb += vw.get(v);
            }
            Side::Sep => {
                a.push(v);
                b.push(v);
                s.push(v);
            }
        }
    }
    let heavy = wa.max(wb);
    let total = vw.total();
    let (num, den) = reduce(heavy, total);
    Separation {
        a,
        b,
        s,
        alpha_achieved: Rational::new_raw(num, den),
        over_budget: false,
    }
}

fn reduce(num: u128, den: u128) -> (u64, u64) {
    fn gcd(a: u128, b: u128) -> u128 {
        if b == 0 { a } else { gcd(b, a % b) }
    }
    let g = gcd(num, den).max(1);
    ((num / g) as u64, (den / g) as u64)
}

/// Components of `G - S` labelled onto sides. Components containing a vertex
/// for which `seed` returns a side go to that side; the rest are placed
/// heaviest-first onto the currently lighter side. Returns the labels and the
/// strict side weights.
pub(crate) fn label_components(
    adj: &Adjacency,
    in_sep: &[bool],
    vw: &VertexWeighting,
    seed: impl Fn(usize) -> Option<Side>,
) -> (Vec<Side>, u128, u128) {
    let n = adj.n();
    let mut labels = vec![Side::Sep; n];
    let mut comp_of = vec![usize::MAX; n];
    let mut comps: Vec<(Vec<usize>, u128, Option<Side>)> = Vec::new();
    let mut stack = Vec::new();
    for s in 0..n {
        if in_sep[s] || comp_of[s] != usize::MAX {
            continue;
        }
        let id = comps.len();
        comp_of[s] = id;
        stack.push(s);
        let mut verts = Vec::new();
        let mut weight = 0;
        let mut side = None;
        while let Some(x) = stack.pop() {
            verts.push(x);
            weight += vw.get(x);
            if side.is_none() {
                side = seed(x);
            }
            for &y in adj.neighbors(x) {
                if !in_sep[y] && comp_of[y] == usize::MAX {
                    comp_of[y] = id;
                    stack.push(y);
                }
            }
        }
        comps.push((verts, weight, side));
    }
    let (mut wa, mut wb) = (0u128, 0u128);
    let mut free: Vec<usize> = Vec::new();
    for (i, (verts, w, side)) in comps.iter().enumerate() {
        match side {
            Some(Side::A) => {
                wa += w;
                verts.iter().for_each(|&v| labels[v] = Side::A);
            }
            Some(Side::B) => {
                wb += w;
                verts.iter().for_each(|&v| labels[v] = Side::B);
            }
            _ => free.push(i),
        }
    }
    // components were discovered in order of their smallest vertex
    free.sort_by(|&i, &j| comps[j].1.cmp(&comps[i].1).then(i.cmp(&j)));
    for i in free {
        let (verts, w, _) = &comps[i];
        let side = if wa <= wb { Side::A } else { Side::B };
        match side {
            Side::A => wa += w,
            _ => wb += w,
        }
        verts.iter().for_each(|&v| labels[v] = side);
    }
    (labels, wa, wb)
}

/// Runs the configured backend and flags size-budget overruns.
pub fn separate(
    g: &Graph,
    vw: &VertexWeighting,
    contract: &SeparatorContract,
    backend: Backend,
) -> Result<Separation, SeparatorError> {
    let n = g.n();
    let mut sep = match backend {
        Backend::Brute => brute_force_separator(g, vw, contract.alpha)?,
        Backend::BfsLayer => bfs_layer_separator_with(g, vw, contract.alpha, contract.effort(n))?,
        Backend::Auto if n <= N_BRUTE => brute_force_separator(g, vw, contract.alpha)?,
        Backend::Auto => bfs_layer_separator_with(g, vw, contract.alpha, contract.effort(n))?,
    };
    sep.over_budget = sep.s.len() > contract.size_bound(n);
    Ok(sep)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "clause", rename_all = "snake_case")]
pub enum SeparationViolation {
    VertexOutOfRange { vertex: usize },
    UnsortedOrDuplicate,
    NotCovered { vertex: usize },
    SeparatorMismatch,
    CrossingEdge { u: usize, v: usize },
    Imbalance { side: String, weight: u128, total: u128 },
    SizeBudget { size: usize, budget: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SeparationReport {
    pub passed: bool,
    pub separator_size: usize,
    pub size_budget: usize,
    pub violations: Vec<SeparationViolation>,
}

/// Checks every separation clause plus the contract's α and size budget.
pub fn validate_separation(
    g: &Graph,
    vw: &VertexWeighting,
    sep: &Separation,
    contract: &SeparatorContract,
) -> SeparationReport {
    let n = g.n();
    let mut violations = Vec::new();
    let sorted = |xs: &[usize]| xs.windows(2).all(|w| w[0] < w[1]);
    if !(sorted(&sep.a) && sorted(&sep.b) && sorted(&sep.s)) {
        violations.push(SeparationViolation::UnsortedOrDuplicate);
    }
    let mut in_a = vec![false; n];
    let mut in_b = vec![false; n];
    let mut in_s = vec![false; n];
    for (list, mark) in [(&sep.a, &mut in_a), (&sep.b, &mut in_b), (&sep.s, &mut in_s)] {
        for &v in list.iter() {
            if v >= n {
                violations.push(SeparationViolation::VertexOutOfRange { vertex: v });
            } else {
                mark[v] = true;
            }
        }
    }
    for v in 0..n {
        if !in_a[v] && !in_b[v] {
            violations.push(SeparationViolation::NotCovered { vertex: v });
        }
    }
    if (0..n).any(|v| in_s[v] != (in_a[v] && in_b[v])) {
        violations.push(SeparationViolation::SeparatorMismatch);
    }
    for e in g.edges() {
        let strict_a = |x: usize| in_a[x] && !in_b[x];
        let strict_b = |x: usize| in_b[x] && !in_a[x];
        if (strict_a(e.u) && strict_b(e.v)) || (strict_b(e.u) && strict_a(e.v)) {
            violations.push(SeparationViolation::CrossingEdge { u: e.u, v: e.v });
        }
    }
    if vw.len() == n {
        let total = vw.total();
        let wa = vw.sum((0..n).filter(|&v| in_a[v] && !in_b[v]));
        let wb = vw.sum((0..n).filter(|&v| in_b[v] && !in_a[v]));
        for (side, w) in [("A\\B", wa), ("B\\A", wb)] {
            if !within(w, contract.alpha, total) {
                violations.push(SeparationViolation::Imbalance {
                    side: side.to_string(),
                    weight: w,
                    total,
                });
            }
        }
    }
    let budget = contract.size_bound(n);
    if sep.s.len() > budget {
        violations.push(SeparationViolation::SizeBudget {
            size: sep.s.len(),
            budget,
        });
    }
    SeparationReport {
        passed: violations.is_empty(),
        separator_size: sep.s.len(),
        size_budget: budget,
        violations,
    }
}
