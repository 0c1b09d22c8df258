//! Geometry → propositions.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::pddl::{GroundAtom, GroundLiteral, PddlDomain, PddlProblem, Typed};
use crate::world::{ObjectKind, Status, WorldState};

pub type SymbolicState = BTreeSet<GroundAtom>;

/// Kind names, suffixed with a running index when a kind repeats
/// (`block0`, `block1`, …).
pub fn default_names(world: &WorldState) -> Vec<String> {
    let count = |k: ObjectKind| world.objects.iter().filter(|o| o.kind == k).count();
    let mut seen = [0usize; 4];
    world
        .objects
        .iter()
        .map(|o| {
            let k = o.kind.index();
            let name = if count(o.kind) > 1 {
                format!("{}{}", o.kind.name(), seen[k])
            } else {
                o.kind.name().to_string()
            };
            seen[k] += 1;
            name
        })
        .collect()
}

/// PDDL type of a world object in the bundled domain.
pub fn pddl_type(kind: ObjectKind) -> &'static str {
    match kind {
        ObjectKind::Block => "block",
        ObjectKind::Hook => "hook",
        ObjectKind::Rack => "rack",
        ObjectKind::Table => "surface",
    }
}

pub fn state_abstraction(world: &WorldState, names: &[String]) -> SymbolicState {
    let mut s = SymbolicState::new();
    let objs = &world.objects;
    match world.held() {
        None => {
            s.insert(GroundAtom::new("handempty", &[]));
        }
        Some(i) => {
            s.insert(GroundAtom::new("holding", &[&names[i]]));
        }
    }
    let tables: Vec<usize> = (0..objs.len()).filter(|&i| objs[i].kind == ObjectKind::Table).collect();
    for &t in &tables {
        let occupied = objs.iter().any(|o| o.kind.is_movable() && o.status == Status::OnTable);
        if !occupied {
            s.insert(GroundAtom::new("clear", &[&names[t]]));
        }
    }
    for (i, o) in objs.iter().enumerate() {
        if !o.kind.is_movable() {
            continue;
        }
        if o.x <= world.params.workspace_max {
            s.insert(GroundAtom::new("inworkspace", &[&names[i]]));
        }
        if o.status == Status::OnTable {
            for &t in &tables {
                s.insert(GroundAtom::new("on", &[&names[i], &names[t]]));
            }
        }
        if o.status == Status::UnderRack {
            for (r, rack) in objs.iter().enumerate() {
                let inside = o.x - o.half_width >= rack.x - rack.half_width - 1e-9
                    && o.x + o.half_width <= rack.x + rack.half_width + 1e-9;
                if rack.kind == ObjectKind::Rack && inside {
                    s.insert(GroundAtom::new("under", &[&names[i], &names[r]]));
                }
            }
        }
    }
    s
}

/// Build a problem whose objects and initial state come from `world`. World
/// objects named like a domain constant are not redeclared.
pub fn problem_from_world(
    name: &str,
    domain: &PddlDomain,
    world: &WorldState,
    names: &[String],
    goal: Vec<GroundLiteral>,
) -> PddlProblem {
    let objects = world
        .objects
        .iter()
        .zip(names)
        .filter(|(_, n)| domain.constant_type(n).is_none())
        .map(|(o, n)| Typed {
            name: n.clone(),
            ty: pddl_type(o.kind).to_string(),
        })
        .collect();
    PddlProblem {
        name: name.to_string(),
        domain: domain.name.clone(),
        objects,
        init: state_abstraction(world, names).into_iter().collect(),
        goal,
    }
}
