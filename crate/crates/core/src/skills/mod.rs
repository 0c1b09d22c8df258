//! Learned skill artifacts: data collection, Q ensembles, policies and
//! forward models, bundled into a library keyed by skill.

mod dataset;
mod dynamics;
mod grid;
mod policy;
mod qfunc;

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

pub use dataset::{candidate_instances, collect, TransitionDataset, TransitionRecord};
pub use dynamics::{fit_dynamics, predict, DynamicsModel};
pub use grid::{CellHit, FeatureGrid, FeatureRef, GridAxis};
pub use policy::{fit_policy, Gaussian, SkillPolicy, MIN_CELL_RECORDS, STD_FLOOR_FRACTION};
pub use qfunc::{fit_q, q_posterior, QFunction, QMember, QPosterior};

use crate::error::{Error, Result};
use crate::seed;
use crate::world::{ActionBounds, ScenarioSpec, SkillId};

/// Everything needed to train one skill.
#[derive(Debug, Clone, PartialEq)]
pub struct SkillConfig {
    pub skill: SkillId,
    pub scenario: ScenarioSpec,
    /// Features (and bin counts) of the Q grid; state features also define
    /// the policy cells.
    pub q_features: Vec<(FeatureRef, usize)>,
    pub dynamics_features: Vec<(FeatureRef, usize)>,
    pub ensemble: usize,
    pub quantile: f64,
    pub samples: usize,
    pub projection_seed: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SkillLibraryEntry {
    pub skill: SkillId,
    pub bounds: ActionBounds,
    pub projection_seed: u64,
    pub q: QFunction,
    pub policy: SkillPolicy,
    pub dynamics: DynamicsModel,
}

/// Summary figures reported after training.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrainingStats {
    pub skill: SkillId,
    pub records: usize,
    pub success_rate: f64,
    pub heldout_mse: f64,
}

/// Immutable-once-built map from skill to its artifacts.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct SkillLibrary {
    entries: BTreeMap<SkillId, SkillLibraryEntry>,
}

impl SkillLibrary {
    pub fn new() -> Self {
        Self::default()
    }

    /// Add a skill. Existing entries are left untouched; re-registering a
    /// skill is an error.
    pub fn insert(&mut self, entry: SkillLibraryEntry) -> Result<()> {
        if self.entries.contains_key(&entry.skill) {
            return Err(Error::arg(alloc::format!("skill {} already in the library", entry.skill)));
        }
        self.entries.insert(entry.skill, entry);
        Ok(())
    }

    pub fn get(&self, skill: SkillId) -> Option<&SkillLibraryEntry> {
        self.entries.get(&skill)
    }

    pub fn require(&self, skill: SkillId) -> Result<&SkillLibraryEntry> {
        self.get(skill)
            .ok_or_else(|| Error::config(alloc::format!("skill {skill} missing from the library")))
    }

    pub fn skills(&self) -> impl Iterator<Item = SkillId> + '_ {
        self.entries.keys().copied()
    }

    pub fn entries(&self) -> impl Iterator<Item = &SkillLibraryEntry> {
        self.entries.values()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// Fit all artifacts of one skill from an existing dataset.
pub fn fit_entry(config: &SkillConfig, data: &TransitionDataset, seed: u64) -> Result<SkillLibraryEntry> {
    if data.skill != config.skill {
        return Err(Error::arg("dataset skill does not match the configuration"));
    }
    let qgrid = FeatureGrid::fit(&config.q_features, data.pairs());
    let q = fit_q(data, qgrid, config.ensemble, seed::split(seed, "bootstrap"))?;
    let policy = fit_policy(&q, data, config.quantile)?;
    let dgrid = FeatureGrid::fit(&config.dynamics_features, data.pairs());
    let dynamics = fit_dynamics(data, dgrid)?;
    Ok(SkillLibraryEntry {
        skill: config.skill,
        bounds: config.skill.action_bounds(),
        projection_seed: data.projection_seed,
        q,
        policy,
        dynamics,
    })
}

/// collect → fit_q → fit_policy → fit_dynamics, plus a held-out forward-model
/// check on `heldout` fresh transitions.
pub fn train_skill(config: &SkillConfig, seed: u64, heldout: usize) -> Result<(SkillLibraryEntry, TrainingStats)> {
    train_skill_with_data(config, seed, heldout).map(|(entry, stats, _)| (entry, stats))
}

/// [`train_skill`], also returning the training dataset.
pub fn train_skill_with_data(
    config: &SkillConfig,
    seed: u64,
    heldout: usize,
) -> Result<(SkillLibraryEntry, TrainingStats, TransitionDataset)> {
    let data = collect(
        config.skill,
        &config.scenario,
        config.samples,
        seed::split(seed, "train"),
        config.projection_seed,
    )?;
    let entry = fit_entry(config, &data, seed)?;
    let heldout_mse = if heldout > 0 {
        let test = collect(
            config.skill,
            &config.scenario,
            heldout,
            seed::split(seed, "heldout"),
            config.projection_seed,
        )?;
        entry.dynamics.mse(&test)?
    } else {
        f64::NAN
    };
    let stats = TrainingStats {
        skill: config.skill,
        records: data.len(),
        success_rate: data.success_rate(),
        heldout_mse,
    };
    Ok((entry, stats, data))
}
