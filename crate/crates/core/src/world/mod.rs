//! Deterministic 1-D tabletop with four parameterised skills.
//!
//! Positions live on `[0, 1]`; the robot reaches `[0, workspace_max]`.
//! Pulling moves objects toward the robot (decreasing `x`), pushing moves
//! them away.

mod project;
mod scenario;
mod sim;

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

pub use project::{project, SkillState};
pub use scenario::{sample_initial, ObjectSpec, ScenarioSpec};
pub use sim::{ground_truth_q, step};

use crate::error::{Error, Result};

/// Per-object feature count: kind one-hot (4), x, half width, status
/// one-hot (4), grasp offset when held.
pub const FEATURES_PER_OBJECT: usize = 11;
pub const F_KIND: usize = 0;
pub const F_X: usize = 4;
pub const F_HALF_WIDTH: usize = 5;
pub const F_STATUS: usize = 6;
pub const F_GRASP: usize = 10;

const OVERLAP_EPS: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ObjectKind {
    Block,
    Hook,
    Rack,
    Table,
}

impl ObjectKind {
    pub const ALL: [ObjectKind; 4] = [Self::Block, Self::Hook, Self::Rack, Self::Table];

    pub fn index(self) -> usize {
        self as usize
    }

    /// Blocks and hooks can be picked, placed, pulled and pushed.
    pub fn is_movable(self) -> bool {
        matches!(self, Self::Block | Self::Hook)
    }

    pub fn name(self) -> &'static str {
        match self {
            Self::Block => "block",
            Self::Hook => "hook",
            Self::Rack => "rack",
            Self::Table => "table",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|k| k.name() == s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Status {
    OnTable,
    InHand,
    UnderRack,
    Absent,
}

impl Status {
    pub const ALL: [Status; 4] = [Self::OnTable, Self::InHand, Self::UnderRack, Self::Absent];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn name(self) -> &'static str {
        match self {
            Self::OnTable => "on_table",
            Self::InHand => "in_hand",
            Self::UnderRack => "under_rack",
            Self::Absent => "absent",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|k| k.name() == s)
    }

    /// Resting on the table surface (possibly beneath a rack).
    pub fn on_surface(self) -> bool {
        matches!(self, Self::OnTable | Self::UnderRack)
    }
}

/// Distractor initialisations. Anything but `Normal` defeats Pick.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PoseTag {
    Normal,
    Stacked,
    BehindBase,
    Tipped,
}

impl PoseTag {
    pub const ALL: [PoseTag; 4] = [Self::Normal, Self::Stacked, Self::BehindBase, Self::Tipped];

    pub fn name(self) -> &'static str {
        match self {
            Self::Normal => "normal",
            Self::Stacked => "stacked",
            Self::BehindBase => "behind_base",
            Self::Tipped => "tipped",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|k| k.name() == s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ObjectState {
    pub kind: ObjectKind,
    pub x: f64,
    pub half_width: f64,
    pub status: Status,
    pub pose: PoseTag,
}

impl ObjectState {
    pub fn new(kind: ObjectKind, x: f64, half_width: f64) -> Self {
        Self {
            kind,
            x,
            half_width,
            status: Status::OnTable,
            pose: PoseTag::Normal,
        }
    }

    /// The table spans the whole line.
    pub fn table() -> Self {
        Self::new(ObjectKind::Table, 0.5, 0.5)
    }

    pub fn overlaps(&self, other: &ObjectState) -> bool {
        (self.x - other.x).abs() < self.half_width + other.half_width - OVERLAP_EPS
    }

    /// Takes part in table-top collision checks.
    pub fn is_obstacle(&self) -> bool {
        self.kind.is_movable() && self.status.on_surface()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Hand {
    pub object: usize,
    pub grasp_offset: f64,
}

/// Physical constants. `min_displacement` is the Pull/Push success margin.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WorldParams {
    pub workspace_max: f64,
    pub block_half_width: f64,
    pub hook_half_length: f64,
    pub rack_half_width: f64,
    pub min_displacement: f64,
}

impl Default for WorldParams {
    fn default() -> Self {
        Self {
            workspace_max: 0.55,
            block_half_width: 0.04,
            hook_half_length: 0.15,
            rack_half_width: 0.10,
            min_displacement: 0.05,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct WorldState {
    pub objects: Vec<ObjectState>,
    pub hand: Option<Hand>,
    pub params: WorldParams,
    /// Provenance label (scenario seed); ignored by the dynamics.
    pub seed_tag: u64,
}

impl WorldState {
    pub fn new(objects: Vec<ObjectState>, params: WorldParams) -> Self {
        Self {
            objects,
            hand: None,
            params,
            seed_tag: 0,
        }
    }

    pub fn held(&self) -> Option<usize> {
        self.hand.map(|h| h.object)
    }

    /// Put object `i` in the hand with the given grasp offset.
    pub fn grasp(&mut self, i: usize, grasp_offset: f64) {
        let obj = &mut self.objects[i];
        obj.status = Status::InHand;
        obj.x = 0.0;
        self.hand = Some(Hand {
            object: i,
            grasp_offset,
        });
    }

    pub fn object_features(&self, i: usize) -> [f64; FEATURES_PER_OBJECT] {
        let o = &self.objects[i];
        let mut f = [0.0; FEATURES_PER_OBJECT];
        f[F_KIND + o.kind.index()] = 1.0;
        f[F_X] = o.x;
        f[F_HALF_WIDTH] = o.half_width;
        f[F_STATUS + o.status.index()] = 1.0;
        if let Some(h) = self.hand {
            if h.object == i {
                f[F_GRASP] = h.grasp_offset;
            }
        }
        f
    }

    /// All object features in world order.
    pub fn features(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.objects.len() * FEATURES_PER_OBJECT);
        for i in 0..self.objects.len() {
            out.extend_from_slice(&self.object_features(i));
        }
        out
    }

    /// Check every state invariant; returns the first violation.
    pub fn validate(&self) -> core::result::Result<(), String> {
        for (i, o) in self.objects.iter().enumerate() {
            if !(o.half_width > 0.0) {
                return Err(format!("object {i}: half_width {} must be > 0", o.half_width));
            }
            if o.status.on_surface() && !(0.0..=1.0).contains(&o.x) {
                return Err(format!("object {i}: x {} outside [0, 1]", o.x));
            }
            let in_hand = o.status == Status::InHand;
            if in_hand != (self.held() == Some(i)) {
                return Err(format!("object {i}: in_hand status disagrees with hand"));
            }
        }
        if let Some(h) = self.hand {
            let Some(o) = self.objects.get(h.object) else {
                return Err(format!("hand index {} out of range", h.object));
            };
            if h.grasp_offset.abs() > o.half_width + OVERLAP_EPS {
                return Err(format!(
                    "grasp offset {} exceeds half_width {}",
                    h.grasp_offset, o.half_width
                ));
            }
        }
        for i in 0..self.objects.len() {
            for j in i + 1..self.objects.len() {
                let (a, b) = (&self.objects[i], &self.objects[j]);
                if !a.is_obstacle() || !b.is_obstacle() {
                    continue;
                }
                if a.pose == PoseTag::Stacked || b.pose == PoseTag::Stacked {
                    continue;
                }
                if a.overlaps(b) {
                    return Err(format!("objects {i} and {j} overlap"));
                }
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SkillId {
    Pick,
    Place,
    Pull,
    Push,
}

impl SkillId {
    pub const ALL: [SkillId; 4] = [Self::Pick, Self::Place, Self::Pull, Self::Push];

    pub fn arity(self) -> usize {
        match self {
            Self::Pick | Self::Place | Self::Pull => 2,
            Self::Push => 3,
        }
    }

    pub fn action_dim(self) -> usize {
        1
    }

    /// Per-dimension action bounds `(lo, hi)`.
    pub fn action_bounds(self) -> ActionBounds {
        let (lo, hi) = match self {
            Self::Pick => (-0.2, 0.2),
            Self::Place => (0.0, 1.0),
            Self::Pull | Self::Push => (0.0, 0.5),
        };
        ActionBounds {
            lo: alloc::vec![lo],
            hi: alloc::vec![hi],
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Self::Pick => "pick",
            Self::Place => "place",
            Self::Pull => "pull",
            Self::Push => "push",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        Self::ALL
            .into_iter()
            .find(|k| k.name().eq_ignore_ascii_case(s))
    }
}

impl fmt::Display for SkillId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ActionBounds {
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
}

impl ActionBounds {
    pub fn dim(&self) -> usize {
        self.lo.len()
    }

    pub fn width(&self, d: usize) -> f64 {
        self.hi[d] - self.lo[d]
    }

    pub fn contains(&self, a: &[f64]) -> bool {
        a.len() == self.dim()
            && a.iter()
                .enumerate()
                .all(|(d, v)| *v >= self.lo[d] && *v <= self.hi[d])
    }

    pub fn clamp(&self, a: &mut [f64]) {
        for (d, v) in a.iter_mut().enumerate() {
            *v = v.clamp(self.lo[d], self.hi[d]);
        }
    }
}

/// One grounded skill: Pick(obj, src), Place(obj, rec), Pull(obj, tool),
/// Push(obj, tool, rack).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SkillInstance {
    pub skill: SkillId,
    pub args: Vec<usize>,
}

impl SkillInstance {
    pub fn new(skill: SkillId, args: &[usize]) -> Self {
        Self {
            skill,
            args: args.to_vec(),
        }
    }

    pub fn validate(&self, n_objects: usize) -> Result<()> {
        if self.args.len() != self.skill.arity() {
            return Err(Error::arg(format!(
                "{} takes {} arguments, got {}",
                self.skill,
                self.skill.arity(),
                self.args.len()
            )));
        }
        for (k, a) in self.args.iter().enumerate() {
            if *a >= n_objects {
                return Err(Error::arg(format!("argument index {a} out of range")));
            }
            if self.args[..k].contains(a) {
                return Err(Error::arg(format!("argument index {a} repeated")));
            }
        }
        Ok(())
    }
}

impl fmt::Display for SkillInstance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}(", self.skill)?;
        for (k, a) in self.args.iter().enumerate() {
            if k > 0 {
                f.write_str(",")?;
            }
            write!(f, "{a}")?;
        }
        f.write_str(")")
    }
}
