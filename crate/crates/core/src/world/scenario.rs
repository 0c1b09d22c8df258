use alloc::format;
use alloc::vec::Vec;

use super::{ObjectKind, ObjectState, PoseTag, Status, WorldParams, WorldState};
use crate::error::{Error, Result};
use crate::seed;

const MAX_ATTEMPTS: usize = 200;

/// One roster entry: kind, size and the interval its position is drawn from.
#[derive(Debug, Clone, PartialEq)]
pub struct ObjectSpec {
    pub kind: ObjectKind,
    pub half_width: f64,
    pub x_range: (f64, f64),
    pub pose: PoseTag,
}

impl ObjectSpec {
    pub fn new(kind: ObjectKind, half_width: f64, lo: f64, hi: f64) -> Self {
        Self {
            kind,
            half_width,
            x_range: (lo, hi),
            pose: PoseTag::Normal,
        }
    }

    pub fn with_pose(mut self, pose: PoseTag) -> Self {
        self.pose = pose;
        self
    }
}

/// Initial-state distribution over worlds.
///
/// When `hold` is non-empty, one of the listed roster entries starts in the
/// hand with a grasp offset drawn uniformly within its half width (capped by
/// `grasp_limit`).
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioSpec {
    pub name: alloc::string::String,
    pub objects: Vec<ObjectSpec>,
    pub hold: Vec<usize>,
    pub grasp_range: Option<(f64, f64)>,
    pub params: WorldParams,
    pub seed: u64,
}

impl ScenarioSpec {
    pub fn validate(&self) -> Result<()> {
        let wm = self.params.workspace_max;
        if !(wm > 0.0 && wm < 1.0) {
            return Err(Error::arg(format!("workspace_max {wm} must lie in (0, 1)")));
        }
        for (i, o) in self.objects.iter().enumerate() {
            let (lo, hi) = o.x_range;
            if !(0.0..=1.0).contains(&lo) || !(0.0..=1.0).contains(&hi) || lo > hi {
                return Err(Error::arg(format!("object {i}: range [{lo}, {hi}] not within [0, 1]")));
            }
            if !(o.half_width > 0.0) {
                return Err(Error::arg(format!("object {i}: half_width must be > 0")));
            }
        }
        for &h in &self.hold {
            match self.objects.get(h) {
                Some(o) if o.kind.is_movable() => {}
                _ => return Err(Error::arg(format!("hold candidate {h} is not a movable object"))),
            }
        }
        if let Some((lo, hi)) = self.grasp_range {
            if lo > hi {
                return Err(Error::arg("grasp_range is inverted"));
            }
        }
        Ok(())
    }
}

/// Draw an initial world. Deterministic in `(scenario.seed, seed)`.
pub fn sample_initial(scenario: &ScenarioSpec, seed: u64) -> Result<WorldState> {
    scenario.validate()?;
    let stream = seed::split_index(scenario.seed, seed);
    let mut rng = seed::rng(stream);
    for _ in 0..MAX_ATTEMPTS {
        let held = if scenario.hold.is_empty() {
            None
        } else {
            Some(scenario.hold[seed::below(&mut rng, scenario.hold.len())])
        };
        let mut objects = Vec::with_capacity(scenario.objects.len());
        for spec in &scenario.objects {
            let x = seed::uniform(&mut rng, spec.x_range.0, spec.x_range.1);
            let mut o = ObjectState::new(spec.kind, x, spec.half_width);
            o.pose = spec.pose;
            objects.push(o);
        }
        let mut world = WorldState::new(objects, scenario.params);
        world.seed_tag = stream;
        if let Some(h) = held {
            let hw = world.objects[h].half_width;
            let (lo, hi) = scenario.grasp_range.unwrap_or((-hw, hw));
            let g = seed::uniform(&mut rng, lo.max(-hw), hi.min(hw));
            world.grasp(h, g);
        }
        if world.validate().is_ok() {
            debug_assert!(world.objects.iter().all(|o| o.status != Status::Absent));
            return Ok(world);
        }
    }
    Err(Error::Generation {
        attempts: MAX_ATTEMPTS,
    })
}
