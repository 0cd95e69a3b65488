use super::{
    validate_division, weak_division, DivisionConstants, DivisionError, Phase, ScheduleConfig, ScheduleMode,
    SeparationRecord,
};
use crate::graph::Graph;
use crate::separator::Backend;
use serde::Serialize;

#[derive(Debug, Clone, Serialize)]
pub struct ScheduleRun {
    pub mode: ScheduleMode,
    pub epsilon: f64,
    pub separations: usize,
    /// `Σ N^(1 + γ')` over separator calls.
    pub cost_units: f64,
    pub separator_vertices: usize,
    pub clamps: usize,
    pub regions: usize,
    #[serde(rename = "B")]
    pub boundary_sum: usize,
    pub boundary_ratio: f64,
    pub max_gamma_prime: f64,
    pub passed: bool,
    #[serde(skip)]
    pub records: Vec<SeparationRecord>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ScheduleComparison {
    pub n: usize,
    pub r: usize,
    pub p: f64,
    pub gamma_target: f64,
    pub runs: Vec<ScheduleRun>,
}

#[derive(Serialize)]
struct CsvRow<'a> {
    schedule: String,
    phase: &'a str,
    depth: usize,
    region_size: usize,
    gamma_prime: f64,
    cost_units: f64,
    separator_size: usize,
    over_budget: bool,
    fallback: bool,
}

impl ScheduleComparison {
    pub fn run(&self, mode: ScheduleMode) -> Option<&ScheduleRun> {
        self.runs.iter().find(|r| r.mode == mode)
    }

    /// One row per separation record, all schedules concatenated.
    pub fn to_csv(&self) -> Vec<u8> {
        let mut w = csv::Writer::from_writer(Vec::new());
        for run in &self.runs {
            for rec in &run.records {
                w.serialize(CsvRow {
                    schedule: run.mode.to_string(),
                    phase: match rec.phase {
                        Phase::Weak => "weak",
                        Phase::Refine => "refine",
                    },
                    depth: rec.depth,
                    region_size: rec.region_size,
                    gamma_prime: rec.gamma_prime,
                    cost_units: rec.cost_units,
                    separator_size: rec.separator_size,
                    over_budget: rec.over_budget,
                    fallback: rec.fallback,
                })
                .expect("in-memory csv");
            }
        }
        if self.runs.iter().all(|r| r.records.is_empty()) {
            w.write_record([
                "schedule",
                "phase",
                "depth",
                "region_size",
                "gamma_prime",
                "cost_units",
                "separator_size",
                "over_budget",
                "fallback",
            ])
            .expect("in-memory csv");
        }
        w.into_inner().expect("in-memory csv")
    }
}

/// Weak divisions of `g` under the fixed schedule, the adaptive schedule,
/// and, when `epsilon` is given (which asserts `r = n^Ω(1)`), the ε schedule.
pub fn compare_schedules(
    g: &Graph,
    r: usize,
    gamma_target: f64,
    backend: Backend,
    epsilon: Option<f64>,
) -> Result<ScheduleComparison, DivisionError> {
    let mut schedules = vec![ScheduleConfig::fixed(gamma_target), ScheduleConfig::adaptive(gamma_target)];
    if let Some(eps) = epsilon {
        schedules.push(ScheduleConfig::adaptive_eps(gamma_target, eps));
    }
    let constants = DivisionConstants::default();
    let mut runs = Vec::new();
    let mut p = super::boundary_budget(r, gamma_target);
    for schedule in schedules {
        let w = weak_division(g, r, &schedule, backend)?;
        let d = w.division;
        p = d.p;
        let report = validate_division(g, &d, &constants);
        let log = d.stats.worklog;
        runs.push(ScheduleRun {
            mode: schedule.mode,
            epsilon: schedule.epsilon,
            separations: log.totals.separations,
            cost_units: log.totals.cost_units,
            separator_vertices: log.totals.separator_vertices,
            clamps: d.stats.clamps,
            regions: d.regions.len(),
            boundary_sum: d.stats.boundary_sum,
            boundary_ratio: report.boundary_ratio,
            max_gamma_prime: log.records.iter().map(|r| r.gamma_prime).fold(0.0, f64::max),
            passed: report.passed,
            records: log.records,
        });
    }
    Ok(ScheduleComparison {
        n: g.n(),
        r,
        p,
        gamma_target,
        runs,
    })
}
