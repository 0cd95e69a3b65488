//! Weak and full (r, p)-divisions.
//!
//! A division partitions the edges of the undirected support into regions.
//! A region's vertex set is the set of endpoints of its edges; a vertex is a
//! boundary vertex when it lies in two or more regions. With
//! `p = r^((2 - γ)/3)` for a target exponent `γ ∈ [0, 1/2]`:
//!
//! * a *weak* division has regions of at most `r` vertices, and the total
//!   boundary multiplicity is bounded by `O(p·n/r)`;
//! * a *full* division additionally bounds every region's boundary by
//!   `c_bnd·p`.
//!
//! [`weak_division`] separates regions recursively. A region of `N > r`
//! vertices is separated with exponent `γ'(N) = (2 log r - 3 log p) / log N`
//! ([`gamma_for`]), which rises towards `γ` as regions shrink, or with the
//! ε-damped variant ([`gamma_eps_for`]), or with the fixed `γ' = γ` baseline.
//! [`refine_division`] then splits regions whose boundary is too large using
//! separators weighted on boundary vertices.

mod compare;
mod refine;
mod validate;
mod weak;

pub use compare::{compare_schedules, ScheduleComparison, ScheduleRun};
pub use refine::{compute_division, refine_division};
pub use validate::{boundary_stats, validate_division, BoundaryStats, Clause, DivisionConstants, DivisionReport};
pub use weak::{weak_division, WeakDivision};

use crate::graph::{EdgeId, GraphError};
use crate::separator::SeparatorError;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;
use thiserror::Error;

/// Relative slack when checking `√r <= p <= r^(2/3)` in floating point.
const PRE_TOL: f64 = 1e-12;
/// Exponents this close to the ends of `[0, 1/2]` are rounding noise and are
/// snapped without counting a clamp.
const SNAP_TOL: f64 = 1e-9;

#[derive(Debug, Error, PartialEq)]
pub enum ScheduleError {
    #[error("region size {size} must exceed r = {r}")]
    NotAboveRadius { size: usize, r: usize },
    #[error("p = {p} outside [sqrt(r), r^(2/3)] = [{lo}, {hi}]")]
    BoundaryOutOfRange { p: f64, lo: f64, hi: f64 },
    #[error("gamma target {0} outside [0, 1/2]")]
    GammaTarget(f64),
    #[error("epsilon {0} outside [0, 1/12)")]
    EpsilonRange(f64),
    #[error("the epsilon schedule needs a positive gamma target")]
    EpsilonNeedsPositiveGamma,
    #[error("region size {size} exceeds graph size {n}")]
    RegionExceedsGraph { size: usize, n: usize },
    #[error("r = n^{c:.4} is too small: the epsilon schedule needs exponent >= eps/(eps + gamma/3) = {required:.4}")]
    RadiusNotPolynomial { c: f64, required: f64 },
    #[error("the epsilon schedule is only legal when r = n^Omega(1) is asserted")]
    EpsilonNotAsserted,
}

#[derive(Debug, Error)]
pub enum DivisionError {
    #[error("r = {r} cannot hold an edge; need r >= 2")]
    InvalidRadius { r: usize },
    #[error(transparent)]
    Schedule(#[from] ScheduleError),
    #[error(transparent)]
    Separator(#[from] SeparatorError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("gamma clamped for a region of {size} vertices under the strict clamp policy")]
    StrictClamp { size: usize },
    #[error("refinement made no progress on a region of {size} vertices with {boundary} boundary vertices: {detail}")]
    NonProgress { size: usize, boundary: usize, detail: String },
    #[error("division does not match the graph: {0}")]
    Mismatch(String),
}

/// `p = r^((2 - γ)/3)`.
pub fn boundary_budget(r: usize, gamma_target: f64) -> f64 {
    (r as f64).powf((2.0 - gamma_target) / 3.0)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GammaValue {
    pub value: f64,
    pub clamped: bool,
}

fn snap(raw: f64) -> GammaValue {
    if !(-SNAP_TOL..=0.5 + SNAP_TOL).contains(&raw) {
        GammaValue {
            value: if raw.is_nan() { 0.0 } else { raw.clamp(0.0, 0.5) },
            clamped: true,
        }
    } else {
        GammaValue {
            value: raw.clamp(0.0, 0.5),
            clamped: false,
        }
    }
}

fn check_boundary_budget(size: usize, r: usize, p: f64) -> Result<(), ScheduleError> {
    if size <= r {
        return Err(ScheduleError::NotAboveRadius { size, r });
    }
    let rf = r as f64;
    let (lo, hi) = (rf.sqrt(), rf.powf(2.0 / 3.0));
    if !(p >= lo * (1.0 - PRE_TOL) && p <= hi * (1.0 + PRE_TOL)) {
        return Err(ScheduleError::BoundaryOutOfRange { p, lo, hi });
    }
    Ok(())
}

/// Separator exponent for a region of `size` vertices:
/// `γ' = (2 log r - 3 log p) / log N`, the solution of
/// `p·(N/r)^(2/3) = N^((2 - γ')/3)`.
pub fn gamma_for(size: usize, r: usize, p: f64) -> Result<GammaValue, ScheduleError> {
    check_boundary_budget(size, r, p)?;
    let raw = (2.0 * (r as f64).ln() - 3.0 * p.ln()) / (size as f64).ln();
    Ok(snap(raw))
}

/// ε-damped exponent, the solution of `p·(N/r)^(2/3 + ε) = N^((2 - γ')/3)`:
/// `γ' = (2 log r - 3 log p - 3ε log(N/r)) / log N`.
///
/// Legal only for `0 <= ε < 1/12`, a positive target exponent, `N <= n`, and
/// `r = n^c` with `c >= ε / (ε + γ/3)`; under those conditions the result
/// lies in `[0, 1/2)`.
pub fn gamma_eps_for(size: usize, r: usize, p: f64, epsilon: f64, n: usize) -> Result<GammaValue, ScheduleError> {
    check_boundary_budget(size, r, p)?;
    if !(0.0..1.0 / 12.0).contains(&epsilon) {
        return Err(ScheduleError::EpsilonRange(epsilon));
    }
    let (lr, lp, ln_size) = ((r as f64).ln(), p.ln(), (size as f64).ln());
    let target = 2.0 - 3.0 * lp / lr;
    if target <= SNAP_TOL {
        return Err(ScheduleError::EpsilonNeedsPositiveGamma);
    }
    if size > n {
        return Err(ScheduleError::RegionExceedsGraph { size, n });
    }
    let c = lr / (n as f64).ln();
    let required = epsilon / (epsilon + target / 3.0);
    if c < required * (1.0 - PRE_TOL) {
        return Err(ScheduleError::RadiusNotPolynomial { c, required });
    }
    let raw = (2.0 * lr - 3.0 * lp - 3.0 * epsilon * (ln_size - lr)) / ln_size;
    Ok(snap(raw))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScheduleMode {
    /// `γ' = γ` at every level.
    Fixed,
    Adaptive,
    AdaptiveEps,
}

impl FromStr for ScheduleMode {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "fixed" => Ok(ScheduleMode::Fixed),
            "adaptive" => Ok(ScheduleMode::Adaptive),
            "adaptive-eps" | "adaptive_eps" => Ok(ScheduleMode::AdaptiveEps),
            _ => Err(format!("unknown schedule `{s}`")),
        }
    }
}

impl fmt::Display for ScheduleMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ScheduleMode::Fixed => "fixed",
            ScheduleMode::Adaptive => "adaptive",
            ScheduleMode::AdaptiveEps => "adaptive-eps",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScheduleConfig {
    pub mode: ScheduleMode,
    pub gamma_target: f64,
    pub epsilon: f64,
    /// Caller's assertion that `r = n^Ω(1)`; required by the ε schedule.
    pub polynomial_r: bool,
    /// Treat any clamped exponent as an error instead of a logged event.
    pub strict_clamp: bool,
}

impl ScheduleConfig {
    pub fn adaptive(gamma_target: f64) -> Self {
        ScheduleConfig {
            mode: ScheduleMode::Adaptive,
            gamma_target,
            epsilon: 0.0,
            polynomial_r: false,
            strict_clamp: false,
        }
    }

    pub fn fixed(gamma_target: f64) -> Self {
        ScheduleConfig {
            mode: ScheduleMode::Fixed,
            ..Self::adaptive(gamma_target)
        }
    }

    pub fn adaptive_eps(gamma_target: f64, epsilon: f64) -> Self {
        ScheduleConfig {
            mode: ScheduleMode::AdaptiveEps,
            epsilon,
            polynomial_r: true,
            ..Self::adaptive(gamma_target)
        }
    }

    pub fn validate(&self) -> Result<(), ScheduleError> {
        if !(0.0..=0.5).contains(&self.gamma_target) {
            return Err(ScheduleError::GammaTarget(self.gamma_target));
        }
        if self.mode == ScheduleMode::AdaptiveEps {
            if !self.polynomial_r {
                return Err(ScheduleError::EpsilonNotAsserted);
            }
            if self.gamma_target <= 0.0 {
                return Err(ScheduleError::EpsilonNeedsPositiveGamma);
            }
            if !(0.0..1.0 / 12.0).contains(&self.epsilon) {
                return Err(ScheduleError::EpsilonRange(self.epsilon));
            }
        }
        Ok(())
    }

    /// Exponent to use for a region of `size > r` vertices in a graph of `n`.
    pub fn gamma(&self, size: usize, r: usize, p: f64, n: usize) -> Result<GammaValue, ScheduleError> {
        match self.mode {
            ScheduleMode::Fixed => Ok(GammaValue {
                value: self.gamma_target,
                clamped: false,
            }),
            ScheduleMode::Adaptive => gamma_for(size, r, p),
            ScheduleMode::AdaptiveEps => gamma_eps_for(size, r, p, self.epsilon, n),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Phase {
    Weak,
    Refine,
}

/// One separator call.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeparationRecord {
    pub phase: Phase,
    pub depth: usize,
    pub region_size: usize,
    pub gamma_prime: f64,
    /// `region_size^(1 + gamma_prime)`
    pub cost_units: f64,
    pub separator_size: usize,
    /// Boundary vertices of the region when it was split (refinement only).
    #[serde(default)]
    pub region_boundary: usize,
    /// Index of the weak-division region a refinement split descends from.
    #[serde(default)]
    pub origin: usize,
    #[serde(default)]
    pub over_budget: bool,
    /// The separator made no progress and the region was peeled instead.
    #[serde(default)]
    pub fallback: bool,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct WorkTotals {
    pub separations: usize,
    pub cost_units: f64,
    pub separator_vertices: usize,
    pub over_budget: usize,
    pub fallbacks: usize,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct WorkLog {
    pub records: Vec<SeparationRecord>,
    pub totals: WorkTotals,
}

impl WorkLog {
    pub fn push(&mut self, rec: SeparationRecord) {
        let t = &mut self.totals;
        t.separations += 1;
        t.cost_units += rec.cost_units;
        t.separator_vertices += rec.separator_size;
        t.over_budget += rec.over_budget as usize;
        t.fallbacks += rec.fallback as usize;
        self.records.push(rec);
    }

    pub fn extend(&mut self, other: WorkLog) {
        for rec in other.records {
            self.push(rec);
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DivisionKind {
    Weak,
    Full,
}

/// Edge subset of the support graph, its vertex set and boundary. All lists
/// are sorted.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Region {
    #[serde(rename = "edges")]
    pub edge_ids: Vec<EdgeId>,
    pub vertices: Vec<usize>,
    pub boundary: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DivisionStats {
    #[serde(rename = "B")]
    pub boundary_sum: usize,
    pub clamps: usize,
    pub worklog: WorkLog,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Division {
    pub r: usize,
    pub p: f64,
    pub gamma_target: f64,
    pub kind: DivisionKind,
    pub regions: Vec<Region>,
    pub stats: DivisionStats,
}
