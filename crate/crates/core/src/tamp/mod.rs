//! Task-and-motion loop: enumerate skeletons symbolically, ground each with
//! the motion planner, keep the most promising.

mod abstraction;
mod search;

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

pub use abstraction::{default_names, pddl_type, problem_from_world, state_abstraction, SymbolicState};
pub use search::{plan_skeletons, GroundAction, GroundTask, SkeletonIter};

use crate::error::{Error, Result};
use crate::pddl::{PddlDomain, PddlProblem};
use crate::planner::{plan, ActionPlan, EvaluationResult, PlanSkeleton, PlannerConfig};
use crate::pool::Pool;
use crate::seed;
use crate::skills::SkillLibrary;
use crate::uq::{filter_uncertain, UqMode};
use crate::world::{SkillId, SkillInstance, WorldState};

/// Milliseconds since the solve started. Lets the core stay clock-agnostic.
pub trait Clock {
    fn elapsed_ms(&self) -> u64;
}

/// A clock that never advances; timeouts never fire.
#[derive(Debug, Clone, Copy, Default)]
pub struct NoClock;

impl Clock for NoClock {
    fn elapsed_ms(&self) -> u64 {
        0
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TampConfig {
    pub max_len: usize,
    /// Skeletons handed to the motion planner at most.
    pub budget: usize,
    pub planner: PlannerConfig,
    /// Stop as soon as a plan scores at least this much.
    pub success_threshold: f64,
    pub timeout_ms: Option<u64>,
    /// In filter mode, per-skeleton incumbents dropped for uncertainty
    /// before the final choice (capped to leave one).
    pub skeleton_filter: usize,
}

impl Default for TampConfig {
    fn default() -> Self {
        Self {
            max_len: 10,
            budget: 20,
            planner: PlannerConfig::default(),
            success_threshold: 0.5,
            timeout_ms: None,
            skeleton_filter: 1,
        }
    }
}

impl TampConfig {
    pub fn validate(&self) -> Result<()> {
        if self.max_len == 0 {
            return Err(Error::config("max skeleton length must be >= 1"));
        }
        if self.budget == 0 {
            return Err(Error::config("skeleton budget must be >= 1"));
        }
        self.planner.validate()
    }
}

/// Map a symbolic skeleton onto world indices.
pub fn bind(skeleton: &[GroundAction], names: &[String]) -> Result<PlanSkeleton> {
    skeleton
        .iter()
        .map(|a| {
            let skill = SkillId::from_name(&a.operator)
                .ok_or_else(|| Error::config(format!("operator {} has no skill", a.operator)))?;
            let args = a
                .args
                .iter()
                .map(|n| {
                    names
                        .iter()
                        .position(|m| m == n)
                        .ok_or_else(|| Error::config(format!("object {n} is not in the world")))
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(SkillInstance::new(skill, &args))
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct TampLogEntry {
    pub index: usize,
    pub skeleton: String,
    pub j: f64,
    pub score: f64,
    pub uncertainty: f64,
    pub elapsed_ms: u64,
    pub accepted: bool,
    pub filtered: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TampOutcome {
    pub skeleton: Vec<GroundAction>,
    pub instances: PlanSkeleton,
    pub plan: ActionPlan,
    pub result: EvaluationResult,
    pub log: Vec<TampLogEntry>,
}

struct Candidate {
    skeleton: Vec<GroundAction>,
    instances: PlanSkeleton,
    plan: ActionPlan,
    result: EvaluationResult,
}

#[allow(clippy::too_many_arguments)]
pub fn tamp_solve<P: Pool, C: Clock>(
    lib: &SkillLibrary,
    domain: &PddlDomain,
    problem: &PddlProblem,
    world: &WorldState,
    names: &[String],
    cfg: &TampConfig,
    clock: &C,
    pool: &P,
) -> Result<TampOutcome> {
    cfg.validate()?;
    for op in &domain.operators {
        let skill = SkillId::from_name(&op.name)
            .ok_or_else(|| Error::config(format!("operator {} has no skill", op.name)))?;
        lib.require(skill)?;
    }
    let filter = cfg.planner.uncertainty.mode == UqMode::Filter;
    let mut candidates: Vec<Candidate> = Vec::new();
    let mut log = Vec::new();
    let mut enumerated = 0;
    let mut timed_out = false;
    for (k, skeleton) in plan_skeletons(domain, problem, cfg.max_len).take(cfg.budget).enumerate() {
        enumerated += 1;
        if cfg.timeout_ms.is_some_and(|t| clock.elapsed_ms() >= t) {
            timed_out = true;
            break;
        }
        let instances = bind(&skeleton, names)?;
        let mut pc = cfg.planner.clone();
        pc.seed = seed::split_index(cfg.planner.seed, k as u64);
        let out = plan(lib, &instances, world, &pc, pool)?;
        let score = out.result.score();
        let stop = score >= cfg.success_threshold && (!filter || out.result.uncertainty.is_finite());
        log.push(TampLogEntry {
            index: k,
            skeleton: skeleton.iter().map(ToString::to_string).collect::<Vec<_>>().join(" "),
            j: out.result.j,
            score,
            uncertainty: out.result.uncertainty,
            elapsed_ms: clock.elapsed_ms(),
            accepted: false,
            filtered: false,
        });
        candidates.push(Candidate {
            skeleton,
            instances,
            plan: out.plan,
            result: out.result,
        });
        if stop {
            break;
        }
    }
    if candidates.is_empty() {
        if timed_out {
            return Err(Error::Timeout {
                elapsed_ms: clock.elapsed_ms(),
            });
        }
        debug_assert_eq!(enumerated, 0);
        return Err(Error::Unsolvable { max_len: cfg.max_len });
    }
    let unc: Vec<f64> = candidates.iter().map(|c| c.result.uncertainty).collect();
    let kept = if filter && candidates.len() > 1 {
        filter_uncertain(&unc, cfg.skeleton_filter.min(candidates.len() - 1))?
    } else {
        (0..candidates.len()).collect()
    };
    let mut best = kept[0];
    for &i in &kept[1..] {
        if candidates[i].result.score() > candidates[best].result.score() {
            best = i;
        }
    }
    for (i, entry) in log.iter_mut().enumerate() {
        entry.filtered = !kept.contains(&i);
        entry.accepted = i == best;
    }
    let c = candidates.swap_remove(best);
    Ok(TampOutcome {
        skeleton: c.skeleton,
        instances: c.instances,
        plan: c.plan,
        result: c.result,
        log,
    })
}
