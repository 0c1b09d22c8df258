//! Exploration data: uniformly random actions on sampled initial worlds.

use alloc::format;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::seed;
use crate::world::{
    project, sample_initial, step, ObjectKind, ScenarioSpec, SkillId, SkillInstance, Status, WorldState,
};

#[derive(Debug, Clone, PartialEq)]
pub struct TransitionRecord {
    pub world: WorldState,
    pub instance: SkillInstance,
    /// Projected skill state (values only; the slot order is implied by
    /// `instance` and the dataset's projection seed).
    pub state: Vec<f64>,
    pub action: Vec<f64>,
    pub reward: u8,
    pub next: WorldState,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TransitionDataset {
    pub skill: SkillId,
    pub projection_seed: u64,
    pub records: Vec<TransitionRecord>,
}

impl TransitionDataset {
    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn success_rate(&self) -> f64 {
        if self.records.is_empty() {
            return 0.0;
        }
        let s: u32 = self.records.iter().map(|r| u32::from(r.reward)).sum();
        f64::from(s) / self.records.len() as f64
    }

    /// Split into `(first n, rest)`.
    pub fn split_at(&self, n: usize) -> (TransitionDataset, TransitionDataset) {
        let n = n.min(self.records.len());
        let head = TransitionDataset {
            skill: self.skill,
            projection_seed: self.projection_seed,
            records: self.records[..n].to_vec(),
        };
        let tail = TransitionDataset {
            skill: self.skill,
            projection_seed: self.projection_seed,
            records: self.records[n..].to_vec(),
        };
        (head, tail)
    }

    pub(crate) fn pairs(&self) -> impl Iterator<Item = (&[f64], &[f64])> {
        self.records.iter().map(|r| (r.state.as_slice(), r.action.as_slice()))
    }
}

/// Every grounding of `skill` whose symbolic preconditions hold in `world`.
pub fn candidate_instances(world: &WorldState, skill: SkillId) -> Vec<SkillInstance> {
    let objs = &world.objects;
    let of_kind = |k: ObjectKind| (0..objs.len()).filter(move |&i| objs[i].kind == k);
    let loose = |i: usize| objs[i].kind.is_movable() && objs[i].status == Status::OnTable;
    let mut out = Vec::new();
    match skill {
        SkillId::Pick => {
            if world.hand.is_none() {
                for o in (0..objs.len()).filter(|&i| loose(i)) {
                    for t in of_kind(ObjectKind::Table) {
                        out.push(SkillInstance::new(skill, &[o, t]));
                    }
                }
            }
        }
        SkillId::Place => {
            if let Some(o) = world.held() {
                for t in of_kind(ObjectKind::Table) {
                    out.push(SkillInstance::new(skill, &[o, t]));
                }
            }
        }
        SkillId::Pull => {
            if let Some(t) = world.held().filter(|&t| objs[t].kind == ObjectKind::Hook) {
                for o in (0..objs.len()).filter(|&i| loose(i)) {
                    out.push(SkillInstance::new(skill, &[o, t]));
                }
            }
        }
        SkillId::Push => {
            if world.hand.is_none() {
                for o in (0..objs.len()).filter(|&i| loose(i)) {
                    for t in of_kind(ObjectKind::Hook).filter(|&t| t != o && loose(t)) {
                        for r in of_kind(ObjectKind::Rack) {
                            out.push(SkillInstance::new(skill, &[o, t, r]));
                        }
                    }
                }
            }
        }
    }
    out
}

/// Gather `n` bandit transitions of `skill` from `scenario`.
pub fn collect(
    skill: SkillId,
    scenario: &ScenarioSpec,
    n: usize,
    seed: u64,
    projection_seed: u64,
) -> Result<TransitionDataset> {
    if n == 0 {
        return Err(Error::arg("collect needs n >= 1"));
    }
    let bounds = skill.action_bounds();
    let world_seed = seed::split(seed, "world");
    let pick_seed = seed::split(seed, "explore");
    let mut records = Vec::with_capacity(n);
    for i in 0..n {
        let world = sample_initial(scenario, seed::split_index(world_seed, i as u64))?;
        let candidates = candidate_instances(&world, skill);
        if candidates.is_empty() {
            return Err(Error::arg(format!(
                "scenario '{}' offers no grounding of {}",
                scenario.name, skill
            )));
        }
        let mut rng = seed::rng(seed::split_index(pick_seed, i as u64));
        let instance = candidates[seed::below(&mut rng, candidates.len())].clone();
        let action: Vec<f64> = (0..bounds.dim())
            .map(|d| seed::uniform(&mut rng, bounds.lo[d], bounds.hi[d]))
            .collect();
        let state = project(&world, &instance, projection_seed)?.values;
        let (next, reward) = step(&world, &instance, &action)?;
        records.push(TransitionRecord {
            world,
            instance,
            state,
            action,
            reward,
            next,
        });
    }
    Ok(TransitionDataset {
        skill,
        projection_seed,
        records,
    })
}
