use alloc::vec::Vec;

use super::{SkillInstance, WorldState, FEATURES_PER_OBJECT};
use crate::error::Result;
use crate::seed;

/// Skill-local state: argument objects' features first, then the remaining
/// objects in a seed-fixed permutation of their world order.
#[derive(Debug, Clone, PartialEq)]
pub struct SkillState {
    pub values: Vec<f64>,
    /// World index of the object in each slot.
    pub order: Vec<usize>,
}

impl SkillState {
    pub fn slot(&self, k: usize) -> &[f64] {
        &self.values[k * FEATURES_PER_OBJECT..(k + 1) * FEATURES_PER_OBJECT]
    }
}

/// Slot order used by [`project`]; exposed so dynamics can map back.
pub(crate) fn slot_order(n_objects: usize, args: &[usize], seed: u64) -> Vec<usize> {
    let mut rest: Vec<usize> = (0..n_objects).filter(|i| !args.contains(i)).collect();
    let mut rng = seed::rng(seed::split_index(seed, rest.len() as u64));
    for i in (1..rest.len()).rev() {
        let j = seed::below(&mut rng, i + 1);
        rest.swap(i, j);
    }
    let mut order = args.to_vec();
    order.extend(rest);
    order
}

pub fn project(world: &WorldState, instance: &SkillInstance, seed: u64) -> Result<SkillState> {
    instance.validate(world.objects.len())?;
    let order = slot_order(world.objects.len(), &instance.args, seed);
    let mut values = Vec::with_capacity(order.len() * FEATURES_PER_OBJECT);
    for &i in &order {
        values.extend_from_slice(&world.object_features(i));
    }
    Ok(SkillState { values, order })
}
