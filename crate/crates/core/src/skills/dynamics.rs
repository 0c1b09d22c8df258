//! Piecewise-constant forward model over argument-object features.

use alloc::vec;
use alloc::vec::Vec;

use super::dataset::TransitionDataset;
use super::grid::FeatureGrid;
use crate::error::{Error, Result};
use crate::world::{project, SkillInstance, Status, WorldState, FEATURES_PER_OBJECT, F_GRASP, F_STATUS, F_X};

/// Per-cell mean change of the argument objects' features. Non-argument
/// objects are never moved by a skill and are copied through.
#[derive(Debug, Clone, PartialEq)]
pub struct DynamicsModel {
    pub grid: FeatureGrid,
    pub arity: usize,
    pub projection_seed: u64,
    /// `n_cells × arity·FEATURES_PER_OBJECT`, row-major.
    pub deltas: Vec<f64>,
    pub counts: Vec<u32>,
}

pub(crate) fn arg_features(world: &WorldState, args: &[usize]) -> Vec<f64> {
    let mut out = Vec::with_capacity(args.len() * FEATURES_PER_OBJECT);
    for &i in args {
        out.extend_from_slice(&world.object_features(i));
    }
    out
}

pub fn fit_dynamics(data: &TransitionDataset, grid: FeatureGrid) -> Result<DynamicsModel> {
    if data.is_empty() {
        return Err(Error::arg("fit_dynamics needs a non-empty dataset"));
    }
    let arity = data.skill.arity();
    let width = arity * FEATURES_PER_OBJECT;
    let n = grid.n_cells();
    let mut sums = vec![0.0; n * width];
    let mut counts = vec![0u32; n];
    for r in &data.records {
        let cell = grid.locate(&r.state, &r.action).cell;
        let before = arg_features(&r.world, &r.instance.args);
        let after = arg_features(&r.next, &r.instance.args);
        for j in 0..width {
            sums[cell * width + j] += after[j] - before[j];
        }
        counts[cell] += 1;
    }
    for c in 0..n {
        if counts[c] > 0 {
            let k = f64::from(counts[c]);
            for v in &mut sums[c * width..(c + 1) * width] {
                *v /= k;
            }
        }
    }
    Ok(DynamicsModel {
        grid,
        arity,
        projection_seed: data.projection_seed,
        deltas: sums,
        counts,
    })
}

impl DynamicsModel {
    fn width(&self) -> usize {
        self.arity * FEATURES_PER_OBJECT
    }

    pub fn delta(&self, cell: usize) -> &[f64] {
        let w = self.width();
        &self.deltas[cell * w..(cell + 1) * w]
    }

    pub fn delta_mut(&mut self, cell: usize) -> &mut [f64] {
        let w = self.width();
        &mut self.deltas[cell * w..(cell + 1) * w]
    }

    /// Argument features plus the cell delta, before any decoding.
    pub fn raw_prediction(&self, state: &[f64], world: &WorldState, args: &[usize], action: &[f64]) -> Vec<f64> {
        let cell = self.grid.locate(state, action).cell;
        let mut f = arg_features(world, args);
        for (v, d) in f.iter_mut().zip(self.delta(cell)) {
            *v += d;
        }
        f
    }

    /// Predicted successor world; pure.
    pub fn predict(&self, world: &WorldState, instance: &SkillInstance, action: &[f64]) -> Result<WorldState> {
        if instance.args.len() != self.arity {
            return Err(Error::arg("instance arity does not match the dynamics model"));
        }
        let state = project(world, instance, self.projection_seed)?;
        let raw = self.raw_prediction(&state.values, world, &instance.args, action);
        Ok(decode(world, &instance.args, &raw))
    }

    /// Sum of squared errors of the raw prediction over `data`.
    pub fn squared_loss(&self, data: &TransitionDataset) -> f64 {
        data.records
            .iter()
            .map(|r| {
                let raw = self.raw_prediction(&r.state, &r.world, &r.instance.args, &r.action);
                let target = arg_features(&r.next, &r.instance.args);
                raw.iter().zip(&target).map(|(p, t)| (p - t) * (p - t)).sum::<f64>()
            })
            .sum()
    }

    /// Mean squared error per argument feature of decoded predictions.
    pub fn mse(&self, data: &TransitionDataset) -> Result<f64> {
        if data.is_empty() {
            return Err(Error::arg("mse needs a non-empty dataset"));
        }
        let mut total = 0.0;
        for r in &data.records {
            let pred = self.predict(&r.world, &r.instance, &r.action)?;
            let p = arg_features(&pred, &r.instance.args);
            let t = arg_features(&r.next, &r.instance.args);
            total += p.iter().zip(&t).map(|(a, b)| (a - b) * (a - b)).sum::<f64>();
        }
        Ok(total / (data.len() * self.width()) as f64)
    }
}

/// Free-function form of [`DynamicsModel::predict`].
pub fn predict(model: &DynamicsModel, world: &WorldState, instance: &SkillInstance, action: &[f64]) -> Result<WorldState> {
    model.predict(world, instance, action)
}

/// Turn predicted argument features back into a valid world: positions are
/// clamped to the line, the status is the largest one-hot entry and the grasp
/// offset is clamped to the object's half width.
fn decode(world: &WorldState, args: &[usize], raw: &[f64]) -> WorldState {
    let mut next = world.clone();
    for (k, &i) in args.iter().enumerate() {
        let f = &raw[k * FEATURES_PER_OBJECT..(k + 1) * FEATURES_PER_OBJECT];
        let mut status = Status::ALL[0];
        let mut best = f64::NEG_INFINITY;
        for s in Status::ALL {
            if f[F_STATUS + s.index()] > best {
                best = f[F_STATUS + s.index()];
                status = s;
            }
        }
        let hw = next.objects[i].half_width;
        let held_now = next.held();
        if status == Status::InHand {
            if held_now.is_none() || held_now == Some(i) {
                next.grasp(i, f[F_GRASP].clamp(-hw, hw));
            }
            continue;
        }
        if held_now == Some(i) {
            next.hand = None;
        }
        let o = &mut next.objects[i];
        o.status = status;
        o.x = f[F_X].clamp(0.0, 1.0);
    }
    next
}
