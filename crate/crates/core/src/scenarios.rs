//! Built-in training scenarios, benchmark tasks and TAMP problems.
//!
//! Every roster starts `[table, rack, hook, block, …]`, so skill projections
//! share slot semantics across training and evaluation. The rack is fixed
//! at x = 0.85.

use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use crate::pddl::{GroundAtom, GroundLiteral};
use crate::planner::PlanSkeleton;
use crate::seed;
use crate::skills::{FeatureRef, SkillConfig};
use crate::world::{
    ObjectKind, ObjectSpec, PoseTag, ScenarioSpec, SkillId, SkillInstance, WorldParams, F_GRASP, F_HALF_WIDTH, F_X,
};

pub const TABLE: usize = 0;
pub const RACK: usize = 1;
pub const HOOK: usize = 2;
pub const BLOCK: usize = 3;
pub const RACK_X: f64 = 0.85;

/// Default transitions per skill.
pub const TRAINING_SAMPLES: usize = 10_000;

fn roster(hook: (f64, f64), block: (f64, f64)) -> Vec<ObjectSpec> {
    let p = WorldParams::default();
    vec![
        ObjectSpec::new(ObjectKind::Table, 0.5, 0.5, 0.5),
        ObjectSpec::new(ObjectKind::Rack, p.rack_half_width, RACK_X, RACK_X),
        ObjectSpec::new(ObjectKind::Hook, p.hook_half_length, hook.0, hook.1),
        ObjectSpec::new(ObjectKind::Block, p.block_half_width, block.0, block.1),
    ]
}

fn scenario(name: &str, objects: Vec<ObjectSpec>, hold: Vec<usize>) -> ScenarioSpec {
    ScenarioSpec {
        name: name.to_string(),
        objects,
        hold,
        grasp_range: None,
        params: WorldParams::default(),
        seed: seed::split(0x5eed, name),
    }
}

/// Single-step exploration scenario for one skill.
pub fn training_scenario(skill: SkillId) -> ScenarioSpec {
    match skill {
        SkillId::Pick => scenario("train-pick", roster((0.1, 0.7), (0.05, 0.9)), vec![]),
        SkillId::Place => scenario("train-place", roster((0.05, 0.7), (0.05, 0.7)), vec![HOOK, BLOCK]),
        SkillId::Pull => scenario("train-pull", roster((0.1, 0.7), (0.45, 0.9)), vec![HOOK]),
        SkillId::Push => scenario("train-push", roster((0.05, 0.7), (0.2, 0.72)), vec![]),
    }
}

/// Default grids and training sizes for one skill.
pub fn skill_config(skill: SkillId) -> SkillConfig {
    let s = FeatureRef::slot;
    let a = FeatureRef::Action(0);
    let (q_features, dynamics_features) = match skill {
        SkillId::Pick => (
            vec![(s(0, F_X), 16), (s(0, F_HALF_WIDTH), 2), (a, 40)],
            vec![(s(0, F_X), 8), (s(0, F_HALF_WIDTH), 2), (a, 40)],
        ),
        SkillId::Place => (
            vec![
                (s(0, F_GRASP), 6),
                (s(0, F_HALF_WIDTH), 2),
                (a, 16),
                (s(2, F_X), 8),
                (s(3, F_X), 8),
            ],
            vec![(s(0, F_HALF_WIDTH), 2), (a, 24), (s(3, F_X), 12), (s(0, F_GRASP), 3)],
        ),
        SkillId::Pull => (
            vec![(s(0, F_X), 12), (s(1, F_GRASP), 12), (a, 10)],
            vec![(s(0, F_X), 12), (s(1, F_GRASP), 12), (a, 16)],
        ),
        SkillId::Push => (
            vec![(s(0, F_X), 20), (a, 20)],
            vec![(s(0, F_X), 12), (s(1, F_X), 4), (a, 16)],
        ),
    };
    SkillConfig {
        skill,
        scenario: training_scenario(skill),
        q_features,
        dynamics_features,
        ensemble: 5,
        quantile: 0.2,
        samples: TRAINING_SAMPLES,
        projection_seed: seed::split(0x9407, skill.name()),
    }
}

pub fn default_skill_configs() -> Vec<SkillConfig> {
    SkillId::ALL.into_iter().map(skill_config).collect()
}

/// A fixed skeleton over a scenario.
#[derive(Debug, Clone, PartialEq)]
pub struct Task {
    pub name: String,
    pub scenario: ScenarioSpec,
    pub skeleton: PlanSkeleton,
}

fn pick(o: usize) -> SkillInstance {
    SkillInstance::new(SkillId::Pick, &[o, TABLE])
}

fn place(o: usize) -> SkillInstance {
    SkillInstance::new(SkillId::Place, &[o, TABLE])
}

/// H = 2: place the held block so that the hook can then push it under the
/// rack. The hook sits near the robot and blocks low placements.
pub fn toy_task() -> Task {
    Task {
        name: "place-push".into(),
        scenario: scenario("place-push", roster((0.05, 0.1), (0.3, 0.3)), vec![BLOCK]),
        skeleton: vec![place(BLOCK), SkillInstance::new(SkillId::Push, &[BLOCK, HOOK, RACK])],
    }
}

/// The block lies beyond reach; the hook grasp must leave enough reach to
/// pull it back.
pub fn hook_reach_task() -> Task {
    Task {
        name: "hook-reach".into(),
        scenario: scenario("hook-reach", roster((0.2, 0.4), (0.62, 0.78)), vec![]),
        skeleton: vec![
            pick(HOOK),
            SkillInstance::new(SkillId::Pull, &[BLOCK, HOOK]),
            place(HOOK),
            pick(BLOCK),
        ],
    }
}

/// Pick and re-place the block so that a later push can reach the rack; the
/// hook limits where it may go.
pub fn rearrangement_task() -> Task {
    Task {
        name: "rearrangement-push".into(),
        scenario: scenario("rearrangement-push", roster((0.62, 0.68), (0.15, 0.28)), vec![]),
        skeleton: vec![pick(BLOCK), place(BLOCK), SkillInstance::new(SkillId::Push, &[BLOCK, HOOK, RACK])],
    }
}

/// Pick and place with a hook nearby; solvable without lookahead.
pub fn constrained_place_task() -> Task {
    Task {
        name: "constrained-place".into(),
        scenario: scenario("constrained-place", roster((0.05, 0.15), (0.4, 0.5)), vec![]),
        skeleton: vec![pick(BLOCK), place(BLOCK)],
    }
}

/// Planning benchmark suite: the two dependency tasks and the simple one.
pub fn benchmark_tasks() -> Vec<Task> {
    vec![hook_reach_task(), constrained_place_task(), rearrangement_task()]
}

pub fn task_by_name(name: &str) -> Option<Task> {
    let mut all = benchmark_tasks();
    all.push(toy_task());
    all.into_iter().find(|t| t.name == name)
}

/// A TAMP problem: scenario plus a goal over default object names.
#[derive(Debug, Clone, PartialEq)]
pub struct TampProblemSpec {
    pub name: String,
    pub scenario: ScenarioSpec,
    pub goal: Vec<GroundLiteral>,
}

/// Goal `(holding block)` with the block beyond reach (`inside = false`) or
/// within it.
pub fn hook_reach_problem(inside: bool) -> TampProblemSpec {
    let (name, hook, block) = if inside {
        ("hook-reach-inside", (0.6, 0.7), (0.2, 0.4))
    } else {
        ("hook-reach", (0.2, 0.4), (0.62, 0.78))
    };
    TampProblemSpec {
        name: name.into(),
        scenario: scenario(name, roster(hook, block), vec![]),
        goal: vec![GroundLiteral {
            atom: GroundAtom::new("holding", &["block"]),
            positive: true,
        }],
    }
}

/// Goal `(not (handempty))`: grasp anything. `block0` sits right against the
/// robot base, a pose never seen in training, and cannot be grasped.
pub fn distractor_problem() -> TampProblemSpec {
    let p = WorldParams::default();
    let mut objects = roster((0.62, 0.7), (0.0, 0.03));
    objects[BLOCK] = objects[BLOCK].clone().with_pose(PoseTag::BehindBase);
    objects.push(ObjectSpec::new(ObjectKind::Block, p.block_half_width, 0.2, 0.4));
    TampProblemSpec {
        name: "distractor".into(),
        scenario: scenario("distractor", objects, vec![]),
        goal: vec![GroundLiteral {
            atom: GroundAtom::new("handempty", &[]),
            positive: false,
        }],
    }
}

pub fn tamp_problem_by_name(name: &str) -> Option<TampProblemSpec> {
    [hook_reach_problem(false), hook_reach_problem(true), distractor_problem()]
        .into_iter()
        .find(|p| p.name == name)
}
