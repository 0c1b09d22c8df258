//! `tamp`: run the task-and-motion loop over sampled problem instances, once
//! per uncertainty mode.

use std::collections::BTreeMap;
use std::path::Path;
use std::time::Instant;

use serde::Serialize;
use skillseq_core::pddl::{parse_domain, ParseError, PddlDomain, MANIPULATION_DOMAIN};
use skillseq_core::planner::execute;
use skillseq_core::pool::Pool;
use skillseq_core::scenarios::TampProblemSpec;
use skillseq_core::seed;
use skillseq_core::skills::SkillLibrary;
use skillseq_core::tamp::{default_names, problem_from_world, tamp_solve, Clock, TampConfig};
use skillseq_core::world::sample_initial;
use skillseq_core::Error;

use crate::error::{read_to_string, write_file, CliError, Result};

/// Wall-clock milliseconds since construction.
#[derive(Debug, Clone, Copy)]
pub struct WallClock(Instant);

impl WallClock {
    pub fn start() -> Self {
        Self(Instant::now())
    }
}

impl Clock for WallClock {
    fn elapsed_ms(&self) -> u64 {
        self.0.elapsed().as_millis() as u64
    }
}

pub fn pddl_error(source: &str, e: ParseError) -> CliError {
    let line = match &e {
        ParseError::Lexical { line, .. } | ParseError::Syntax { line, .. } => *line,
        _ => 0,
    };
    CliError::format(source, line, e.to_string())
}

/// The bundled domain, or the one at `path`.
pub fn load_domain(path: Option<&Path>) -> Result<PddlDomain> {
    match path {
        None => parse_domain(MANIPULATION_DOMAIN).map_err(|e| pddl_error("<bundled domain>", e)),
        Some(p) => parse_domain(&read_to_string(p)?).map_err(|e| pddl_error(&p.display().to_string(), e)),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum RunStatus {
    Solved,
    Unsolvable,
    Timeout,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TampRow {
    pub problem: String,
    pub mode: String,
    pub seed: u64,
    pub status: RunStatus,
    pub success: u8,
    pub j: f64,
    pub uncertainty: f64,
    pub skeletons_tried: usize,
    pub wall_time_ms: f64,
    pub skeleton: String,
}

/// One line of the candidate log.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CandidateLog {
    pub problem: String,
    pub mode: String,
    pub seed: u64,
    pub index: usize,
    pub skeleton: String,
    pub j: f64,
    pub score: f64,
    /// `null` when the plan left the training support.
    pub uncertainty: Option<f64>,
    pub elapsed_ms: u64,
    pub accepted: bool,
    pub filtered: bool,
}

/// Solve instance `index`; the planner seed is derived from the global seed
/// and the problem name, so every mode sees the same worlds and seeds.
#[allow(clippy::too_many_arguments)]
pub fn run_case<P: Pool>(
    lib: &SkillLibrary,
    domain: &PddlDomain,
    spec: &TampProblemSpec,
    base: &TampConfig,
    global: u64,
    index: u64,
    pool: &P,
    log: &mut Vec<CandidateLog>,
) -> Result<TampRow> {
    let world = sample_initial(&spec.scenario, index)?;
    let names = default_names(&world);
    let problem = problem_from_world(&spec.name, domain, &world, &names, spec.goal.clone());
    let mut cfg = base.clone();
    cfg.planner.seed = seed::split_index(seed::split(global, &spec.name), index);
    let mode = cfg.planner.uncertainty.mode.name().to_string();
    let clock = WallClock::start();
    let mut row = TampRow {
        problem: spec.name.clone(),
        mode: mode.clone(),
        seed: index,
        status: RunStatus::Solved,
        success: 0,
        j: 0.0,
        uncertainty: f64::NAN,
        skeletons_tried: 0,
        wall_time_ms: 0.0,
        skeleton: String::new(),
    };
    match tamp_solve(lib, domain, &problem, &world, &names, &cfg, &clock, pool) {
        Ok(out) => {
            let ex = execute(&world, &out.instances, &out.plan)?;
            row.success = ex.success as u8;
            row.j = out.result.j;
            row.uncertainty = out.result.uncertainty;
            row.skeletons_tried = out.log.len();
            row.skeleton = out.skeleton.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ");
            log.extend(out.log.iter().map(|e| CandidateLog {
                problem: spec.name.clone(),
                mode: mode.clone(),
                seed: index,
                index: e.index,
                skeleton: e.skeleton.clone(),
                j: e.j,
                score: e.score,
                uncertainty: e.uncertainty.is_finite().then_some(e.uncertainty),
                elapsed_ms: e.elapsed_ms,
                accepted: e.accepted,
                filtered: e.filtered,
            }));
        }
        Err(Error::Unsolvable { .. }) => row.status = RunStatus::Unsolvable,
        Err(Error::Timeout { .. }) => row.status = RunStatus::Timeout,
        Err(e) => return Err(e.into()),
    }
    row.wall_time_ms = clock.0.elapsed().as_secs_f64() * 1e3;
    Ok(row)
}

/// Rows ordered mode-major, then instance index.
#[allow(clippy::too_many_arguments)]
pub fn run<P: Pool>(
    lib: &SkillLibrary,
    domain: &PddlDomain,
    spec: &TampProblemSpec,
    configs: &[TampConfig],
    scenarios: u64,
    global: u64,
    pool: &P,
) -> Result<(Vec<TampRow>, Vec<CandidateLog>)> {
    let mut rows = Vec::new();
    let mut log = Vec::new();
    for cfg in configs {
        for s in 0..scenarios {
            rows.push(run_case(lib, domain, spec, cfg, global, s, pool, &mut log)?);
        }
    }
    Ok((rows, log))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ModeSummary {
    pub mode: String,
    pub n: usize,
    pub success_rate: f64,
    pub solved: usize,
    pub unsolvable: usize,
    pub timeout: usize,
    pub mean_skeletons_tried: f64,
    /// Chosen skeleton → count.
    pub skeletons: BTreeMap<String, usize>,
}

pub fn summarize(rows: &[TampRow]) -> Vec<ModeSummary> {
    let mut modes: Vec<String> = Vec::new();
    for r in rows {
        if !modes.contains(&r.mode) {
            modes.push(r.mode.clone());
        }
    }
    modes
        .into_iter()
        .map(|mode| {
            let g: Vec<&TampRow> = rows.iter().filter(|r| r.mode == mode).collect();
            let n = g.len();
            let count = |s: RunStatus| g.iter().filter(|r| r.status == s).count();
            let mut skeletons = BTreeMap::new();
            for r in g.iter().filter(|r| r.status == RunStatus::Solved) {
                *skeletons.entry(r.skeleton.clone()).or_insert(0) += 1;
            }
            ModeSummary {
                n,
                success_rate: g.iter().map(|r| r.success as f64).sum::<f64>() / n as f64,
                solved: count(RunStatus::Solved),
                unsolvable: count(RunStatus::Unsolvable),
                timeout: count(RunStatus::Timeout),
                mean_skeletons_tried: g.iter().map(|r| r.skeletons_tried as f64).sum::<f64>() / n as f64,
                skeletons,
                mode,
            }
        })
        .collect()
}

/// Writes `tamp.csv`, `tamp_log.jsonl` and `tamp_summary.json` under `out`.
pub fn write_outputs(out: &Path, rows: &[TampRow], log: &[CandidateLog]) -> Result<()> {
    let path = out.join("tamp.csv");
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r).map_err(|e| CliError::format(path.display().to_string(), 0, e.to_string()))?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::io(&path, e.into_error()))?;
    write_file(&path, bytes)?;

    let mut lines = String::new();
    for entry in log {
        lines.push_str(&serde_json::to_string(entry).expect("log entry serializes"));
        lines.push('\n');
    }
    write_file(out.join("tamp_log.jsonl"), lines)?;
    let summary = serde_json::to_string_pretty(&summarize(rows)).expect("summary serializes");
    write_file(out.join("tamp_summary.json"), summary + "\n")
}
