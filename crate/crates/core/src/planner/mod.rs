//! Product-of-Q objective over dynamics rollouts and the planners that
//! optimise it.

mod search;

use alloc::format;
use alloc::vec::Vec;
use core::fmt;

pub use search::{cem_optimize, oracle_select, plan_cem, plan_greedy, plan_oracle, plan_shooting, CemOutcome};

use crate::error::{Error, Result};
use crate::pool::Pool;
use crate::skills::SkillLibrary;
use crate::uq::{plan_uncertainty, robust_objective, UncertaintyConfig, UqMode};
use crate::world::{project, step, SkillInstance, WorldState};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PlannerMethod {
    RandomShooting,
    PolicyShooting,
    RandomCem,
    PolicyCem,
    Greedy,
    Oracle,
}

impl PlannerMethod {
    pub const ALL: [PlannerMethod; 6] = [
        Self::RandomShooting,
        Self::PolicyShooting,
        Self::RandomCem,
        Self::PolicyCem,
        Self::Greedy,
        Self::Oracle,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Self::RandomShooting => "random_shooting",
            Self::PolicyShooting => "policy_shooting",
            Self::RandomCem => "random_cem",
            Self::PolicyCem => "policy_cem",
            Self::Greedy => "greedy",
            Self::Oracle => "oracle",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|m| m.name() == s)
    }
}

impl fmt::Display for PlannerMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PlannerConfig {
    pub method: PlannerMethod,
    pub num_samples: usize,
    pub cem_iterations: usize,
    pub elite_fraction: f64,
    /// Proposal std around policy means, as a fraction of the bound width.
    pub policy_std: f64,
    pub seed: u64,
    pub uncertainty: UncertaintyConfig,
}

impl Default for PlannerConfig {
    fn default() -> Self {
        Self {
            method: PlannerMethod::PolicyCem,
            num_samples: 1000,
            cem_iterations: 5,
            elite_fraction: 0.1,
            policy_std: 0.2,
            seed: 0,
            uncertainty: UncertaintyConfig::default(),
        }
    }
}

impl PlannerConfig {
    pub fn validate(&self) -> Result<()> {
        if self.num_samples == 0 {
            return Err(Error::config("num_samples must be >= 1"));
        }
        if self.cem_iterations == 0 {
            return Err(Error::config("cem_iterations must be >= 1"));
        }
        if !(self.elite_fraction > 0.0 && self.elite_fraction <= 1.0) {
            return Err(Error::config("elite_fraction must lie in (0, 1]"));
        }
        if !(self.policy_std > 0.0) || !self.policy_std.is_finite() {
            return Err(Error::config("policy_std must be > 0"));
        }
        self.uncertainty.validate()
    }
}

pub type PlanSkeleton = Vec<SkillInstance>;

/// One action vector per skeleton step.
#[derive(Debug, Clone, PartialEq)]
pub struct ActionPlan {
    pub actions: Vec<Vec<f64>>,
}

impl ActionPlan {
    pub fn new(actions: Vec<Vec<f64>>) -> Self {
        Self { actions }
    }

    pub fn len(&self) -> usize {
        self.actions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.actions.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StepEvaluation {
    pub q: f64,
    pub sigma: f64,
    pub unvisited: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EvaluationResult {
    pub steps: Vec<StepEvaluation>,
    /// Predicted states s̄_1 … s̄_{H+1}.
    pub states: Vec<WorldState>,
    pub j: f64,
    /// Lower-confidence-bound objective, present in robust mode.
    pub j_robust: Option<f64>,
    pub uncertainty: f64,
}

impl EvaluationResult {
    /// The quantity planners maximise.
    pub fn score(&self) -> f64 {
        self.j_robust.unwrap_or(self.j)
    }
}

/// Product of `q` computed in log space; exactly zero if any factor is.
pub fn product_of(q: impl IntoIterator<Item = f64>) -> f64 {
    let mut log = 0.0;
    for v in q {
        if v <= 0.0 {
            return 0.0;
        }
        log += libm::log(v);
    }
    libm::exp(log)
}

fn check_plan(skeleton: &[SkillInstance], plan: &ActionPlan) -> Result<()> {
    if skeleton.len() != plan.len() {
        return Err(Error::arg(format!(
            "plan has {} actions for {} skills",
            plan.len(),
            skeleton.len()
        )));
    }
    for (inst, a) in skeleton.iter().zip(&plan.actions) {
        if a.len() != inst.skill.action_dim() {
            return Err(Error::arg(format!("{inst}: wrong action dimension")));
        }
    }
    Ok(())
}

/// Roll the plan through the learned dynamics and score every step with the
/// Q ensemble mean.
pub fn evaluate_objective(
    lib: &SkillLibrary,
    skeleton: &[SkillInstance],
    plan: &ActionPlan,
    s1: &WorldState,
    uq: &UncertaintyConfig,
) -> Result<EvaluationResult> {
    check_plan(skeleton, plan)?;
    let mut states = Vec::with_capacity(skeleton.len() + 1);
    let mut steps = Vec::with_capacity(skeleton.len());
    states.push(s1.clone());
    for (inst, a) in skeleton.iter().zip(&plan.actions) {
        let entry = lib.require(inst.skill)?;
        let s = states.last().expect("non-empty");
        let local = project(s, inst, entry.projection_seed)?;
        let post = entry.q.posterior(&local.values, a);
        let next = entry.dynamics.predict(s, inst, a)?;
        steps.push(StepEvaluation {
            q: post.mean,
            sigma: post.std,
            unvisited: post.unvisited,
        });
        states.push(next);
    }
    let mut result = EvaluationResult {
        j: product_of(steps.iter().map(|s| s.q)),
        steps,
        states,
        j_robust: None,
        uncertainty: 0.0,
    };
    result.uncertainty = plan_uncertainty(&result, uq.aggregation);
    if uq.mode == UqMode::Robust {
        result.j_robust = Some(robust_objective(&result, uq.alpha));
    }
    Ok(result)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Execution {
    pub success: bool,
    pub subgoal_rate: f64,
    pub rewards: Vec<u8>,
    /// States visited, starting with the initial world.
    pub trajectory: Vec<WorldState>,
}

/// Run the plan in the ground-truth simulator, stopping at the first failure.
pub fn execute(world: &WorldState, skeleton: &[SkillInstance], plan: &ActionPlan) -> Result<Execution> {
    check_plan(skeleton, plan)?;
    let mut trajectory = alloc::vec![world.clone()];
    let mut rewards = Vec::new();
    for (inst, a) in skeleton.iter().zip(&plan.actions) {
        let (next, r) = step(trajectory.last().expect("non-empty"), inst, a)?;
        rewards.push(r);
        trajectory.push(next);
        if r == 0 {
            break;
        }
    }
    let done = rewards.iter().filter(|&&r| r == 1).count();
    let h = skeleton.len();
    Ok(Execution {
        success: done == h,
        subgoal_rate: if h == 0 { 1.0 } else { done as f64 / h as f64 },
        rewards,
        trajectory,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct PlanOutcome {
    pub plan: ActionPlan,
    pub result: EvaluationResult,
}

/// Dispatch on `cfg.method`. The oracle plans against the ground truth but
/// still reports the learned objective of its plan.
pub fn plan<P: Pool>(
    lib: &SkillLibrary,
    skeleton: &[SkillInstance],
    s1: &WorldState,
    cfg: &PlannerConfig,
    pool: &P,
) -> Result<PlanOutcome> {
    cfg.validate()?;
    for inst in skeleton {
        lib.require(inst.skill)?;
        inst.validate(s1.objects.len())?;
    }
    match cfg.method {
        PlannerMethod::RandomShooting | PlannerMethod::PolicyShooting => plan_shooting(lib, skeleton, s1, cfg, pool),
        PlannerMethod::RandomCem | PlannerMethod::PolicyCem => plan_cem(lib, skeleton, s1, cfg, pool),
        PlannerMethod::Greedy => {
            let plan = plan_greedy(lib, skeleton, s1)?;
            let result = evaluate_objective(lib, skeleton, &plan, s1, &cfg.uncertainty)?;
            Ok(PlanOutcome { plan, result })
        }
        PlannerMethod::Oracle => {
            let (plan, _) = plan_oracle(lib, s1, skeleton, cfg, pool)?;
            let result = evaluate_objective(lib, skeleton, &plan, s1, &cfg.uncertainty)?;
            Ok(PlanOutcome { plan, result })
        }
    }
}
