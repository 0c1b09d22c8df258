//! `plan`: run planner methods over benchmark tasks and tabulate outcomes.

use std::collections::BTreeMap;
use std::path::Path;
use std::time::Instant;

use serde::{Deserialize, Serialize};
use skillseq_core::planner::{execute, plan, ActionPlan, PlannerConfig, PlannerMethod};
use skillseq_core::pool::Pool;
use skillseq_core::scenarios::Task;
use skillseq_core::seed;
use skillseq_core::skills::SkillLibrary;
use skillseq_core::world::sample_initial;

use crate::error::{write_file, CliError, Result};

/// Column order of the benchmark table.
pub const BENCH_HEADER: [&str; 10] = [
    "task",
    "method",
    "seed",
    "j",
    "success",
    "subgoal_rate",
    "wall_time_ms",
    "num_samples",
    "uncertainty",
    "plan",
];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchRow {
    pub task: String,
    pub method: String,
    pub seed: u64,
    pub j: f64,
    pub success: u8,
    pub subgoal_rate: f64,
    pub wall_time_ms: f64,
    pub num_samples: usize,
    pub uncertainty: f64,
    pub plan: String,
}

/// Steps separated by `|`, action components by spaces.
pub fn format_plan(plan: &ActionPlan) -> String {
    plan.actions
        .iter()
        .map(|a| a.iter().map(|v| format!("{v:.6}")).collect::<Vec<_>>().join(" "))
        .collect::<Vec<_>>()
        .join("|")
}

/// Planner seed of scenario `index` of `task`.
pub fn case_seed(global: u64, task: &str, index: u64) -> u64 {
    seed::split_index(seed::split(global, task), index)
}

/// Plan and execute scenario `index` of `task`. The initial world comes from
/// the task's own scenario seed, so every method sees the same starts.
pub fn run_case<P: Pool>(
    lib: &SkillLibrary,
    task: &Task,
    base: &PlannerConfig,
    global: u64,
    index: u64,
    pool: &P,
) -> Result<BenchRow> {
    let world = sample_initial(&task.scenario, index)?;
    let cfg = PlannerConfig {
        seed: case_seed(global, &task.name, index),
        ..base.clone()
    };
    let t0 = Instant::now();
    let out = plan(lib, &task.skeleton, &world, &cfg, pool)?;
    let wall = t0.elapsed().as_secs_f64() * 1e3;
    let ex = execute(&world, &task.skeleton, &out.plan)?;
    Ok(BenchRow {
        task: task.name.clone(),
        method: cfg.method.name().into(),
        seed: index,
        j: out.result.j,
        success: ex.success as u8,
        subgoal_rate: ex.subgoal_rate,
        wall_time_ms: wall,
        num_samples: cfg.num_samples,
        uncertainty: out.result.uncertainty,
        plan: format_plan(&out.plan),
    })
}

/// Rows ordered task-major, then method, then scenario index.
pub fn run<P: Pool>(
    lib: &SkillLibrary,
    tasks: &[Task],
    methods: &[PlannerMethod],
    base: &PlannerConfig,
    scenarios: u64,
    global: u64,
    pool: &P,
) -> Result<Vec<BenchRow>> {
    let mut rows = Vec::new();
    for task in tasks {
        for &method in methods {
            let cfg = PlannerConfig {
                method,
                ..base.clone()
            };
            for s in 0..scenarios {
                rows.push(run_case(lib, task, &cfg, global, s, pool)?);
            }
        }
    }
    Ok(rows)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchSummary {
    pub task: String,
    pub method: String,
    pub n: usize,
    pub success_rate: f64,
    pub mean_j: f64,
    /// Mean of |J − success|.
    pub calibration_error: f64,
    pub subgoal_rate: f64,
    pub mean_wall_time_ms: f64,
}

/// One summary per (task, method), in first-appearance order.
pub fn summarize(rows: &[BenchRow]) -> Vec<BenchSummary> {
    let mut order = Vec::new();
    let mut groups: BTreeMap<(String, String), Vec<&BenchRow>> = BTreeMap::new();
    for r in rows {
        let key = (r.task.clone(), r.method.clone());
        if !groups.contains_key(&key) {
            order.push(key.clone());
        }
        groups.entry(key).or_default().push(r);
    }
    order
        .into_iter()
        .map(|key| {
            let g = &groups[&key];
            let n = g.len() as f64;
            let mean = |f: &dyn Fn(&BenchRow) -> f64| g.iter().map(|r| f(r)).sum::<f64>() / n;
            BenchSummary {
                task: key.0.clone(),
                method: key.1.clone(),
                n: g.len(),
                success_rate: mean(&|r| r.success as f64),
                mean_j: mean(&|r| r.j),
                calibration_error: mean(&|r| (r.j - r.success as f64).abs()),
                subgoal_rate: mean(&|r| r.subgoal_rate),
                mean_wall_time_ms: mean(&|r| r.wall_time_ms),
            }
        })
        .collect()
}

pub fn write_rows(path: impl AsRef<Path>, rows: &[BenchRow]) -> Result<()> {
    let path = path.as_ref();
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(Vec::new());
    let fail = |e: csv::Error| CliError::format(path.display().to_string(), 0, e.to_string());
    w.write_record(BENCH_HEADER).map_err(fail)?;
    for r in rows {
        w.serialize(r).map_err(fail)?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::io(path, e.into_error()))?;
    write_file(path, bytes)
}

pub fn write_summary(path: impl AsRef<Path>, summary: &[BenchSummary]) -> Result<()> {
    let text = serde_json::to_string_pretty(summary).map_err(|e| CliError::config(e.to_string()))?;
    write_file(path, text + "\n")
}
