//! TOML forms of worlds and scenarios (fixtures and config sections).

use std::path::Path;

use serde::{Deserialize, Serialize};
use skillseq_core::world::{
    Hand, ObjectKind, ObjectSpec, ObjectState, PoseTag, ScenarioSpec, Status, WorldParams, WorldState,
};

use crate::error::{read_to_string, write_file, CliError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ParamsDoc {
    pub workspace_max: f64,
    pub block_half_width: f64,
    pub hook_half_length: f64,
    pub rack_half_width: f64,
    pub min_displacement: f64,
}

impl Default for ParamsDoc {
    fn default() -> Self {
        WorldParams::default().into()
    }
}

impl From<WorldParams> for ParamsDoc {
    fn from(p: WorldParams) -> Self {
        Self {
            workspace_max: p.workspace_max,
            block_half_width: p.block_half_width,
            hook_half_length: p.hook_half_length,
            rack_half_width: p.rack_half_width,
            min_displacement: p.min_displacement,
        }
    }
}

impl From<ParamsDoc> for WorldParams {
    fn from(p: ParamsDoc) -> Self {
        Self {
            workspace_max: p.workspace_max,
            block_half_width: p.block_half_width,
            hook_half_length: p.hook_half_length,
            rack_half_width: p.rack_half_width,
            min_displacement: p.min_displacement,
        }
    }
}

fn kind(s: &str) -> Result<ObjectKind> {
    ObjectKind::from_name(s).ok_or_else(|| CliError::config(format!("unknown object kind `{s}`")))
}

fn pose(s: &str) -> Result<PoseTag> {
    PoseTag::from_name(s).ok_or_else(|| CliError::config(format!("unknown pose `{s}`")))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ObjectDoc {
    pub kind: String,
    pub x: f64,
    pub half_width: f64,
    #[serde(default = "on_table")]
    pub status: String,
    #[serde(default = "normal")]
    pub pose: String,
}

fn on_table() -> String {
    Status::OnTable.name().into()
}

fn normal() -> String {
    PoseTag::Normal.name().into()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HandDoc {
    pub object: usize,
    pub grasp_offset: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WorldDoc {
    #[serde(default)]
    pub seed_tag: u64,
    #[serde(default)]
    pub params: ParamsDoc,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hand: Option<HandDoc>,
    pub objects: Vec<ObjectDoc>,
}

impl From<&WorldState> for WorldDoc {
    fn from(w: &WorldState) -> Self {
        Self {
            seed_tag: w.seed_tag,
            params: w.params.into(),
            hand: w.hand.map(|h| HandDoc {
                object: h.object,
                grasp_offset: h.grasp_offset,
            }),
            objects: w
                .objects
                .iter()
                .map(|o| ObjectDoc {
                    kind: o.kind.name().into(),
                    x: o.x,
                    half_width: o.half_width,
                    status: o.status.name().into(),
                    pose: o.pose.name().into(),
                })
                .collect(),
        }
    }
}

impl WorldDoc {
    /// Rebuild the world; rejects states that violate the world invariants.
    pub fn to_world(&self) -> Result<WorldState> {
        let objects = self
            .objects
            .iter()
            .map(|d| {
                let mut o = ObjectState::new(kind(&d.kind)?, d.x, d.half_width);
                o.status = Status::from_name(&d.status)
                    .ok_or_else(|| CliError::config(format!("unknown status `{}`", d.status)))?;
                o.pose = pose(&d.pose)?;
                Ok(o)
            })
            .collect::<Result<Vec<_>>>()?;
        let mut w = WorldState::new(objects, self.params.into());
        w.seed_tag = self.seed_tag;
        w.hand = self.hand.map(|h| Hand {
            object: h.object,
            grasp_offset: h.grasp_offset,
        });
        w.validate().map_err(|e| CliError::config(format!("invalid world: {e}")))?;
        Ok(w)
    }
}

pub fn world_to_toml(w: &WorldState) -> String {
    toml::to_string(&WorldDoc::from(w)).expect("world documents always serialise")
}

pub fn world_from_toml(source: &str, text: &str) -> Result<WorldState> {
    let doc: WorldDoc = toml::from_str(text).map_err(|e| toml_error(source, text, &e))?;
    doc.to_world()
}

pub fn save_world(path: impl AsRef<Path>, w: &WorldState) -> Result<()> {
    write_file(path, world_to_toml(w))
}

pub fn load_world(path: impl AsRef<Path>) -> Result<WorldState> {
    let path = path.as_ref();
    world_from_toml(&path.display().to_string(), &read_to_string(path)?)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ObjectSpecDoc {
    pub kind: String,
    pub half_width: f64,
    /// Position range `[lo, hi]`.
    pub x: [f64; 2],
    #[serde(default = "normal")]
    pub pose: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioDoc {
    pub name: String,
    pub seed: u64,
    #[serde(default)]
    pub hold: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grasp_range: Option<[f64; 2]>,
    #[serde(default)]
    pub params: ParamsDoc,
    pub objects: Vec<ObjectSpecDoc>,
}

impl From<&ScenarioSpec> for ScenarioDoc {
    fn from(s: &ScenarioSpec) -> Self {
        Self {
            name: s.name.clone(),
            seed: s.seed,
            hold: s.hold.clone(),
            grasp_range: s.grasp_range.map(|(a, b)| [a, b]),
            params: s.params.into(),
            objects: s
                .objects
                .iter()
                .map(|o| ObjectSpecDoc {
                    kind: o.kind.name().into(),
                    half_width: o.half_width,
                    x: [o.x_range.0, o.x_range.1],
                    pose: o.pose.name().into(),
                })
                .collect(),
        }
    }
}

impl ScenarioDoc {
    pub fn to_spec(&self) -> Result<ScenarioSpec> {
        let objects = self
            .objects
            .iter()
            .map(|o| Ok(ObjectSpec::new(kind(&o.kind)?, o.half_width, o.x[0], o.x[1]).with_pose(pose(&o.pose)?)))
            .collect::<Result<Vec<_>>>()?;
        let spec = ScenarioSpec {
            name: self.name.clone(),
            objects,
            hold: self.hold.clone(),
            grasp_range: self.grasp_range.map(|[a, b]| (a, b)),
            params: self.params.into(),
            seed: self.seed,
        };
        spec.validate()
            .map_err(|e| CliError::config(format!("scenario {}: {e}", self.name)))?;
        Ok(spec)
    }
}

pub(crate) fn toml_error(source: &str, text: &str, e: &toml::de::Error) -> CliError {
    let line = e
        .span()
        .map_or(0, |s| text[..s.start.min(text.len())].matches('\n').count() + 1);
    CliError::format(source, line, e.message())
}

#[cfg(test)]
mod tests {
    use super::*;
    use skillseq_core::scenarios::hook_reach_problem;
    use skillseq_core::world::sample_initial;

    #[test]
    fn world_round_trip() {
        let spec = skillseq_core::scenarios::training_scenario(skillseq_core::world::SkillId::Place);
        for s in 0..20 {
            let w = sample_initial(&spec, s).unwrap();
            let back = world_from_toml("t", &world_to_toml(&w)).unwrap();
            assert_eq!(back, w);
        }
    }

    #[test]
    fn scenario_round_trip() {
        let spec = hook_reach_problem(false).scenario;
        let text = toml::to_string(&ScenarioDoc::from(&spec)).unwrap();
        let doc: ScenarioDoc = toml::from_str(&text).unwrap();
        assert_eq!(doc.to_spec().unwrap(), spec);
    }

    #[test]
    fn invalid_world_rejected() {
        let text = "[[objects]]\nkind = \"block\"\nx = 0.3\nhalf_width = 0.04\n\n[[objects]]\nkind = \"block\"\nx = 0.31\nhalf_width = 0.04\n";
        assert!(matches!(world_from_toml("t", text), Err(CliError::Config(_))));
        let bad = "[[objects]]\nkind = \"chair\"\nx = 0.3\nhalf_width = 0.04\n";
        assert!(world_from_toml("t", bad).is_err());
        assert!(matches!(world_from_toml("t", "objects = 3"), Err(CliError::Format { .. })));
    }
}
