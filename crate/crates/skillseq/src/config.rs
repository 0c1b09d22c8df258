//! TOML run configuration shared by all commands.
//!
//! ```toml
//! seed = 7
//! out = "runs/demo"
//! workers = 4
//!
//! [train]
//! samples = 10000
//! heldout = 1000
//! export_datasets = true
//!
//! [train.skills.push]
//! q_grid = [["s0.x", 20], ["a0", 20]]
//!
//! [plan]
//! model = "runs/demo/model.txt"
//! tasks = ["hook-reach", "constrained-place", "rearrangement-push"]
//! methods = ["policy_cem", "greedy"]
//! scenarios = 100
//!
//! [plan.planner]
//! num_samples = 1000
//!
//! [tamp]
//! model = "runs/demo/model.txt"
//! problem = "distractor"
//! modes = ["off", "filter"]
//!
//! [tamp.uncertainty]
//! n_filter = 50
//!
//! [report]
//! inputs = ["runs/demo/bench.csv"]
//! ```
//!
//! Relative paths are resolved against the directory holding the config
//! file.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use skillseq_core::planner::{PlanSkeleton, PlannerConfig, PlannerMethod};
use skillseq_core::scenarios::{self, Task, TampProblemSpec};
use skillseq_core::skills::{FeatureRef, SkillConfig};
use skillseq_core::tamp::TampConfig;
use skillseq_core::uq::{Aggregation, UncertaintyConfig, UqMode};
use skillseq_core::world::{SkillId, SkillInstance};

use crate::error::{read_to_string, CliError, Result};
use crate::features::parse_feature;
use crate::worldio::{toml_error, ScenarioDoc};

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
    pub workers: Option<usize>,
    #[serde(default)]
    pub train: TrainSection,
    pub plan: Option<PlanSection>,
    pub tamp: Option<TampSection>,
    pub report: Option<ReportSection>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TrainSection {
    pub samples: usize,
    pub heldout: usize,
    pub ensemble: usize,
    pub quantile: f64,
    pub export_datasets: bool,
    /// Per-skill overrides keyed by skill name.
    pub skills: BTreeMap<String, SkillOverride>,
}

impl Default for TrainSection {
    fn default() -> Self {
        Self {
            samples: scenarios::TRAINING_SAMPLES,
            heldout: 1000,
            ensemble: 5,
            quantile: 0.2,
            export_datasets: false,
            skills: BTreeMap::new(),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SkillOverride {
    pub samples: Option<usize>,
    pub ensemble: Option<usize>,
    pub quantile: Option<f64>,
    /// `[feature, bins]` pairs, e.g. `["s0.x", 16]`.
    pub q_grid: Option<Vec<(String, usize)>>,
    pub dynamics_grid: Option<Vec<(String, usize)>>,
    pub scenario: Option<ScenarioDoc>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PlannerSection {
    pub num_samples: usize,
    pub cem_iterations: usize,
    pub elite_fraction: f64,
    pub policy_std: f64,
}

impl Default for PlannerSection {
    fn default() -> Self {
        let d = PlannerConfig::default();
        Self {
            num_samples: d.num_samples,
            cem_iterations: d.cem_iterations,
            elite_fraction: d.elite_fraction,
            policy_std: d.policy_std,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct UncertaintySection {
    pub mode: String,
    pub n_filter: usize,
    pub alpha: f64,
    pub aggregation: String,
}

impl Default for UncertaintySection {
    fn default() -> Self {
        let d = UncertaintyConfig::default();
        Self {
            mode: d.mode.name().into(),
            n_filter: d.n_filter,
            alpha: d.alpha,
            aggregation: d.aggregation.name().into(),
        }
    }
}

impl UncertaintySection {
    pub fn to_config(&self) -> Result<UncertaintyConfig> {
        let cfg = UncertaintyConfig {
            mode: parse_mode(&self.mode)?,
            n_filter: self.n_filter,
            alpha: self.alpha,
            aggregation: Aggregation::from_name(&self.aggregation)
                .ok_or_else(|| CliError::config(format!("unknown aggregation `{}`", self.aggregation)))?,
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

pub fn parse_mode(s: &str) -> Result<UqMode> {
    UqMode::from_name(s).ok_or_else(|| CliError::config(format!("unknown uncertainty mode `{s}`")))
}

pub fn parse_method(s: &str) -> Result<PlannerMethod> {
    PlannerMethod::from_name(s).ok_or_else(|| CliError::config(format!("unknown planner method `{s}`")))
}

impl PlannerSection {
    pub fn to_config(&self, method: PlannerMethod, uq: &UncertaintySection) -> Result<PlannerConfig> {
        let cfg = PlannerConfig {
            method,
            num_samples: self.num_samples,
            cem_iterations: self.cem_iterations,
            elite_fraction: self.elite_fraction,
            policy_std: self.policy_std,
            seed: 0,
            uncertainty: uq.to_config()?,
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CustomTask {
    pub name: String,
    pub scenario: ScenarioDoc,
    /// Steps like `"push 3 2 1"`: skill name then roster indices.
    pub skeleton: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlanSection {
    pub model: Option<PathBuf>,
    #[serde(default = "default_tasks")]
    pub tasks: Vec<String>,
    #[serde(default)]
    pub custom_tasks: Vec<CustomTask>,
    #[serde(default = "all_methods")]
    pub methods: Vec<String>,
    #[serde(default = "hundred")]
    pub scenarios: u64,
    #[serde(default)]
    pub planner: PlannerSection,
    #[serde(default)]
    pub uncertainty: UncertaintySection,
}

fn default_tasks() -> Vec<String> {
    scenarios::benchmark_tasks().into_iter().map(|t| t.name).collect()
}

fn all_methods() -> Vec<String> {
    PlannerMethod::ALL.iter().map(|m| m.name().to_string()).collect()
}

fn hundred() -> u64 {
    100
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TampSection {
    pub model: Option<PathBuf>,
    /// PDDL domain file; the bundled manipulation domain when absent.
    pub domain: Option<PathBuf>,
    pub problem: String,
    #[serde(default = "default_modes")]
    pub modes: Vec<String>,
    #[serde(default = "policy_cem")]
    pub method: String,
    #[serde(default = "hundred")]
    pub scenarios: u64,
    pub max_len: Option<usize>,
    pub budget: Option<usize>,
    pub success_threshold: Option<f64>,
    pub timeout_ms: Option<u64>,
    pub skeleton_filter: Option<usize>,
    #[serde(default)]
    pub planner: PlannerSection,
    #[serde(default)]
    pub uncertainty: UncertaintySection,
}

fn default_modes() -> Vec<String> {
    vec!["off".into(), "filter".into()]
}

fn policy_cem() -> String {
    PlannerMethod::PolicyCem.name().into()
}

impl TampSection {
    /// Solver settings for one UQ mode; the per-scenario seed is filled in
    /// by the caller.
    pub fn to_config(&self, mode: UqMode) -> Result<TampConfig> {
        let mut uq = self.uncertainty.clone();
        uq.mode = mode.name().into();
        let d = TampConfig::default();
        let cfg = TampConfig {
            max_len: self.max_len.unwrap_or(d.max_len),
            budget: self.budget.unwrap_or(d.budget),
            planner: self.planner.to_config(parse_method(&self.method)?, &uq)?,
            success_threshold: self.success_threshold.unwrap_or(d.success_threshold),
            timeout_ms: self.timeout_ms.or(d.timeout_ms),
            skeleton_filter: self.skeleton_filter.unwrap_or(d.skeleton_filter),
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn problem_spec(&self) -> Result<TampProblemSpec> {
        scenarios::tamp_problem_by_name(&self.problem)
            .ok_or_else(|| CliError::config(format!("unknown TAMP problem `{}`", self.problem)))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReportSection {
    #[serde(default)]
    pub inputs: Vec<PathBuf>,
    #[serde(default = "thousand")]
    pub bootstrap: usize,
    #[serde(default = "ninety_five")]
    pub confidence: f64,
}

impl Default for ReportSection {
    fn default() -> Self {
        Self {
            inputs: Vec::new(),
            bootstrap: thousand(),
            confidence: ninety_five(),
        }
    }
}

fn thousand() -> usize {
    1000
}

fn ninety_five() -> f64 {
    0.95
}

fn grid(spec: &[(String, usize)]) -> Result<Vec<(FeatureRef, usize)>> {
    spec.iter()
        .map(|(name, bins)| {
            let f = parse_feature(name).ok_or_else(|| CliError::config(format!("unknown grid feature `{name}`")))?;
            if *bins == 0 {
                return Err(CliError::config(format!("feature `{name}` needs at least one bin")));
            }
            Ok((f, *bins))
        })
        .collect()
}

impl TrainSection {
    /// The four skill configurations after applying overrides.
    pub fn skill_configs(&self) -> Result<Vec<SkillConfig>> {
        for name in self.skills.keys() {
            if SkillId::from_name(name).is_none() {
                return Err(CliError::config(format!("[train.skills.{name}]: unknown skill")));
            }
        }
        SkillId::ALL
            .into_iter()
            .map(|skill| {
                let mut c = scenarios::skill_config(skill);
                c.samples = self.samples;
                c.ensemble = self.ensemble;
                c.quantile = self.quantile;
                if let Some(o) = self.skills.get(skill.name()) {
                    c.samples = o.samples.unwrap_or(c.samples);
                    c.ensemble = o.ensemble.unwrap_or(c.ensemble);
                    c.quantile = o.quantile.unwrap_or(c.quantile);
                    if let Some(g) = &o.q_grid {
                        c.q_features = grid(g)?;
                    }
                    if let Some(g) = &o.dynamics_grid {
                        c.dynamics_features = grid(g)?;
                    }
                    if let Some(s) = &o.scenario {
                        c.scenario = s.to_spec()?;
                    }
                }
                if c.samples == 0 || c.ensemble == 0 {
                    return Err(CliError::config(format!("{skill}: samples and ensemble must be >= 1")));
                }
                if !(c.quantile > 0.0 && c.quantile <= 1.0) {
                    return Err(CliError::config(format!("{skill}: quantile must lie in (0, 1]")));
                }
                Ok(c)
            })
            .collect()
    }
}

fn parse_step(s: &str) -> Result<SkillInstance> {
    let mut it = s.split_whitespace();
    let name = it.next().ok_or_else(|| CliError::config("empty skeleton step"))?;
    let skill = SkillId::from_name(name).ok_or_else(|| CliError::config(format!("unknown skill `{name}`")))?;
    let args = it
        .map(|t| t.parse().map_err(|_| CliError::config(format!("bad object index `{t}` in `{s}`"))))
        .collect::<Result<Vec<usize>>>()?;
    let inst = SkillInstance::new(skill, &args);
    if args.len() != skill.arity() {
        return Err(CliError::config(format!("`{s}`: {skill} takes {} arguments", skill.arity())));
    }
    Ok(inst)
}

impl PlanSection {
    pub fn task_list(&self) -> Result<Vec<Task>> {
        let mut out = Vec::new();
        for name in &self.tasks {
            out.push(scenarios::task_by_name(name).ok_or_else(|| CliError::config(format!("unknown task `{name}`")))?);
        }
        for c in &self.custom_tasks {
            let scenario = c.scenario.to_spec()?;
            let skeleton = c.skeleton.iter().map(|s| parse_step(s)).collect::<Result<PlanSkeleton>>()?;
            for inst in &skeleton {
                inst.validate(scenario.objects.len())
                    .map_err(|e| CliError::config(format!("task {}: {e}", c.name)))?;
            }
            out.push(Task {
                name: c.name.clone(),
                scenario,
                skeleton,
            });
        }
        if out.is_empty() {
            return Err(CliError::config("[plan] lists no tasks"));
        }
        Ok(out)
    }

    pub fn method_list(&self) -> Result<Vec<PlannerMethod>> {
        if self.methods.is_empty() {
            return Err(CliError::config("[plan] lists no methods"));
        }
        self.methods.iter().map(|m| parse_method(m)).collect()
    }
}

impl RunConfig {
    pub fn from_toml(source: &str, text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| toml_error(source, text, &e))
    }

    /// Load and resolve relative paths against the file's directory.
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let mut cfg = Self::from_toml(&path.display().to_string(), &read_to_string(path)?)?;
        let base = path.parent().unwrap_or(Path::new(""));
        cfg.resolve(base);
        Ok(cfg)
    }

    fn resolve(&mut self, base: &Path) {
        let fix = |p: &mut PathBuf| {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        };
        if let Some(p) = &mut self.out {
            fix(p);
        }
        if let Some(p) = self.plan.as_mut().and_then(|s| s.model.as_mut()) {
            fix(p);
        }
        if let Some(t) = &mut self.tamp {
            if let Some(p) = &mut t.model {
                fix(p);
            }
            if let Some(p) = &mut t.domain {
                fix(p);
            }
        }
        if let Some(r) = &mut self.report {
            r.inputs.iter_mut().for_each(fix);
        }
    }
}
