//! Ground-truth transitions and binary rewards.
//!
//! Failed preconditions leave the world untouched. Pull and Push motions
//! that hit a non-argument object stop at contact; pushes that exceed the
//! arm's reach stop at the limit. Either way the reward is 0.

use alloc::format;

use super::{ObjectKind, SkillId, SkillInstance, Status, WorldState};
use crate::error::{Error, Result};

const EPS: f64 = 1e-12;

/// Apply one skill. Returns the successor state and the binary reward.
pub fn step(world: &WorldState, instance: &SkillInstance, action: &[f64]) -> Result<(WorldState, u8)> {
    instance.validate(world.objects.len())?;
    if action.len() != instance.skill.action_dim() {
        return Err(Error::arg(format!(
            "{} expects a {}-d action, got {}",
            instance.skill,
            instance.skill.action_dim(),
            action.len()
        )));
    }
    let mut next = world.clone();
    let a = action[0];
    let args = &instance.args;
    let reward = match instance.skill {
        SkillId::Pick => pick(&mut next, args[0], args[1], a),
        SkillId::Place => place(&mut next, args[0], args[1], a),
        SkillId::Pull => pull(&mut next, args[0], args[1], a),
        SkillId::Push => push(&mut next, args[0], args[1], args[2], a),
    };
    Ok((next, u8::from(reward)))
}

/// Success indicator of `step` without keeping the successor.
pub fn ground_truth_q(world: &WorldState, instance: &SkillInstance, action: &[f64]) -> Result<u8> {
    step(world, instance, action).map(|(_, r)| r)
}

fn pick(w: &mut WorldState, obj: usize, src: usize, offset: f64) -> bool {
    let o = w.objects[obj];
    if w.hand.is_some()
        || !o.kind.is_movable()
        || w.objects[src].kind != ObjectKind::Table
        || o.status != Status::OnTable
    {
        return false;
    }
    if offset.abs() > o.half_width || o.pose != super::PoseTag::Normal {
        return false;
    }
    let hand_x = o.x + offset;
    if !(0.0..=w.params.workspace_max).contains(&hand_x) {
        return false;
    }
    // Lifting straight up collides with a rack spanning the object.
    let blocked = w
        .objects
        .iter()
        .enumerate()
        .any(|(j, r)| j != obj && r.kind == ObjectKind::Rack && r.overlaps(&o));
    if blocked {
        return false;
    }
    w.grasp(obj, offset);
    true
}

fn place(w: &mut WorldState, obj: usize, rec: usize, target: f64) -> bool {
    let Some(hand) = w.hand else { return false };
    if hand.object != obj || w.objects[rec].kind != ObjectKind::Table {
        return false;
    }
    let hand_x = target + hand.grasp_offset;
    if !(0.0..=w.params.workspace_max).contains(&hand_x) || !(0.0..=1.0).contains(&target) {
        return false;
    }
    let mut placed = w.objects[obj];
    placed.x = target;
    let collides = w.objects.iter().enumerate().any(|(j, other)| {
        j != obj
            && j != rec
            && (other.is_obstacle() || other.kind == ObjectKind::Rack)
            && placed.overlaps(other)
    });
    if collides {
        return false;
    }
    placed.status = Status::OnTable;
    w.objects[obj] = placed;
    w.hand = None;
    true
}

fn pull(w: &mut WorldState, obj: usize, tool: usize, distance: f64) -> bool {
    let Some(hand) = w.hand else { return false };
    let o = w.objects[obj];
    let t = w.objects[tool];
    if hand.object != tool || t.kind != ObjectKind::Hook || !o.kind.is_movable() || o.status != Status::OnTable {
        return false;
    }
    let reach = w.params.workspace_max + (t.half_width - hand.grasp_offset);
    if o.x > reach {
        return false;
    }
    let mut end = (o.x - distance).max(0.0);
    let mut collided = false;
    for (j, other) in w.objects.iter().enumerate() {
        if j == obj || j == tool || !other.is_obstacle() || other.x >= o.x {
            continue;
        }
        let contact = other.x + other.half_width + o.half_width;
        if contact > end {
            end = contact.min(o.x);
            collided = true;
        }
    }
    w.objects[obj].x = end;
    let moved = o.x - end;
    !collided && moved + EPS >= w.params.min_displacement && end <= w.params.workspace_max
}

fn push(w: &mut WorldState, obj: usize, tool: usize, rack: usize, distance: f64) -> bool {
    if w.hand.is_some() {
        return false;
    }
    let o = w.objects[obj];
    let t = w.objects[tool];
    let r = w.objects[rack];
    if t.kind != ObjectKind::Hook
        || t.status != Status::OnTable
        || !o.kind.is_movable()
        || o.status != Status::OnTable
        || r.kind != ObjectKind::Rack
        || t.x - t.half_width > w.params.workspace_max
    {
        return false;
    }
    // Seat the hook against the object's near side.
    let seat_offset = o.half_width + t.half_width;
    let mut seated = t;
    seated.x = o.x - seat_offset;
    if seated.x < 0.0 {
        return false;
    }
    let seat_blocked = w.objects.iter().enumerate().any(|(j, other)| {
        j != obj && j != tool && other.is_obstacle() && seated.overlaps(other)
    });
    if seat_blocked {
        return false;
    }

    let target = o.x + distance;
    let reach_limit = w.params.workspace_max + o.half_width + 2.0 * t.half_width;
    let mut end = target.min(reach_limit).min(1.0);
    let mut collided = false;
    for (j, other) in w.objects.iter().enumerate() {
        if j == obj || j == tool || !other.is_obstacle() || other.x <= o.x {
            continue;
        }
        let contact = other.x - other.half_width - o.half_width;
        if contact < end {
            end = contact.max(o.x);
            collided = true;
        }
    }
    let under = (end - r.x).abs() <= r.half_width - o.half_width + EPS;
    {
        let moved = &mut w.objects[obj];
        moved.x = end;
        moved.status = if under { Status::UnderRack } else { Status::OnTable };
    }
    w.objects[tool].x = end - seat_offset;
    let reached = end + EPS >= target;
    !collided && reached && end - o.x + EPS >= w.params.min_displacement && under
}
