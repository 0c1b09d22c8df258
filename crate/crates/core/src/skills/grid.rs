//! Axis-aligned binning over selected state/action features.

use alloc::vec::Vec;

use crate::world::FEATURES_PER_OBJECT;

const SUPPORT_EPS: f64 = 1e-9;

/// A feature of `SkillState ⧺ ActionVector`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum FeatureRef {
    State(usize),
    Action(usize),
}

impl FeatureRef {
    /// Feature `f` of projection slot `k`.
    pub const fn slot(k: usize, f: usize) -> Self {
        FeatureRef::State(k * FEATURES_PER_OBJECT + f)
    }

    /// `None` when the state is too short to carry the feature.
    pub fn read(self, state: &[f64], action: &[f64]) -> Option<f64> {
        match self {
            FeatureRef::State(i) => state.get(i).copied(),
            FeatureRef::Action(i) => action.get(i).copied(),
        }
    }

    pub fn is_state(self) -> bool {
        matches!(self, FeatureRef::State(_))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GridAxis {
    pub feature: FeatureRef,
    pub bins: usize,
    pub lo: f64,
    pub hi: f64,
}

impl GridAxis {
    /// Bin index (clamped to the edge bins) and whether `v` lies in range.
    pub fn bin(&self, v: f64) -> (usize, bool) {
        let inside = v >= self.lo - SUPPORT_EPS && v <= self.hi + SUPPORT_EPS;
        if self.bins <= 1 || self.hi <= self.lo {
            return (0, inside);
        }
        let t = (v - self.lo) / (self.hi - self.lo);
        let b = libm::floor(t * self.bins as f64);
        let b = if b.is_nan() { 0.0 } else { b.clamp(0.0, (self.bins - 1) as f64) };
        (b as usize, inside)
    }

    pub fn bin_width(&self) -> f64 {
        (self.hi - self.lo) / self.bins.max(1) as f64
    }
}

/// Dense grid over a handful of features. Cell ids are row-major in axis
/// order.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureGrid {
    pub axes: Vec<GridAxis>,
}

/// Where a query landed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CellHit {
    pub cell: usize,
    /// Every selected feature was present and inside its axis range.
    pub in_support: bool,
}

impl FeatureGrid {
    pub fn new(axes: Vec<GridAxis>) -> Self {
        Self { axes }
    }

    /// Build axes over the observed range of each feature. Features that
    /// never vary collapse to a single bin.
    pub fn fit<'a, I>(features: &[(FeatureRef, usize)], samples: I) -> Self
    where
        I: IntoIterator<Item = (&'a [f64], &'a [f64])>,
    {
        let mut lo = alloc::vec![f64::INFINITY; features.len()];
        let mut hi = alloc::vec![f64::NEG_INFINITY; features.len()];
        for (s, a) in samples {
            for (k, (f, _)) in features.iter().enumerate() {
                if let Some(v) = f.read(s, a) {
                    lo[k] = lo[k].min(v);
                    hi[k] = hi[k].max(v);
                }
            }
        }
        let axes = features
            .iter()
            .enumerate()
            .map(|(k, &(feature, bins))| {
                let (l, h) = if lo[k] <= hi[k] { (lo[k], hi[k]) } else { (0.0, 0.0) };
                GridAxis {
                    feature,
                    bins: if h > l { bins.max(1) } else { 1 },
                    lo: l,
                    hi: h,
                }
            })
            .collect();
        Self { axes }
    }

    pub fn n_cells(&self) -> usize {
        self.axes.iter().map(|a| a.bins).product()
    }

    pub fn locate(&self, state: &[f64], action: &[f64]) -> CellHit {
        let mut cell = 0;
        let mut in_support = true;
        for axis in &self.axes {
            let (b, inside) = match axis.feature.read(state, action) {
                Some(v) => axis.bin(v),
                None => (0, false),
            };
            cell = cell * axis.bins + b;
            in_support &= inside;
        }
        CellHit { cell, in_support }
    }

    /// The grid restricted to state features (used for policy cells).
    pub fn state_part(&self) -> FeatureGrid {
        FeatureGrid {
            axes: self.axes.iter().filter(|a| a.feature.is_state()).cloned().collect(),
        }
    }
}
