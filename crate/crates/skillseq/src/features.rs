//! Human-readable names for grid features: `s<slot>.<field>` for projected
//! state features and `a<dim>` for action components.

use skillseq_core::skills::FeatureRef;
use skillseq_core::world::{ObjectKind, Status, FEATURES_PER_OBJECT, F_GRASP, F_HALF_WIDTH, F_KIND, F_STATUS, F_X};

fn field_name(f: usize) -> String {
    match f {
        _ if (F_KIND..F_KIND + ObjectKind::ALL.len()).contains(&f) => {
            format!("kind.{}", ObjectKind::ALL[f - F_KIND].name())
        }
        F_X => "x".into(),
        F_HALF_WIDTH => "half_width".into(),
        _ if (F_STATUS..F_STATUS + Status::ALL.len()).contains(&f) => {
            format!("status.{}", Status::ALL[f - F_STATUS].name())
        }
        F_GRASP => "grasp".into(),
        _ => unreachable!("feature index within one object"),
    }
}

fn parse_field(s: &str) -> Option<usize> {
    match s {
        "x" => Some(F_X),
        "half_width" => Some(F_HALF_WIDTH),
        "grasp" => Some(F_GRASP),
        _ => {
            if let Some(k) = s.strip_prefix("kind.") {
                ObjectKind::from_name(k).map(|k| F_KIND + k.index())
            } else if let Some(st) = s.strip_prefix("status.") {
                Status::from_name(st).map(|st| F_STATUS + st.index())
            } else {
                None
            }
        }
    }
}

pub fn feature_name(f: FeatureRef) -> String {
    match f {
        FeatureRef::State(i) => format!("s{}.{}", i / FEATURES_PER_OBJECT, field_name(i % FEATURES_PER_OBJECT)),
        FeatureRef::Action(d) => format!("a{d}"),
    }
}

pub fn parse_feature(s: &str) -> Option<FeatureRef> {
    if let Some(rest) = s.strip_prefix('a') {
        return rest.parse().ok().map(FeatureRef::Action);
    }
    let (slot, field) = s.strip_prefix('s')?.split_once('.')?;
    let slot: usize = slot.parse().ok()?;
    Some(FeatureRef::slot(slot, parse_field(field)?))
}
