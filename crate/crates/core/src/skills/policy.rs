//! Per-cell Gaussian policies distilled from the Q ensemble.

use alloc::vec::Vec;

use super::dataset::TransitionDataset;
use super::grid::FeatureGrid;
use super::qfunc::QFunction;
use crate::error::{Error, Result};
use crate::seed::{self, Rng};
use crate::world::ActionBounds;

/// Cells with fewer records than this fall back to the uniform policy.
pub const MIN_CELL_RECORDS: usize = 3;
/// Standard-deviation floor as a fraction of the bound width.
pub const STD_FLOOR_FRACTION: f64 = 0.05;

#[derive(Debug, Clone, PartialEq)]
pub struct Gaussian {
    pub mean: Vec<f64>,
    pub std: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SkillPolicy {
    pub grid: FeatureGrid,
    pub bounds: ActionBounds,
    /// `None` marks the uniform fallback.
    pub cells: Vec<Option<Gaussian>>,
}

impl SkillPolicy {
    pub fn cell(&self, state: &[f64]) -> Option<&Gaussian> {
        self.cells[self.grid.locate(state, &[]).cell].as_ref()
    }

    /// Deterministic action: the cell mean, or the bound midpoint.
    pub fn mean(&self, state: &[f64]) -> Vec<f64> {
        match self.cell(state) {
            Some(g) => g.mean.clone(),
            None => (0..self.bounds.dim())
                .map(|d| 0.5 * (self.bounds.lo[d] + self.bounds.hi[d]))
                .collect(),
        }
    }

    /// Draw an action, clamped into the bounds.
    pub fn sample(&self, state: &[f64], rng: &mut Rng) -> Vec<f64> {
        let b = &self.bounds;
        let mut a: Vec<f64> = match self.cell(state) {
            Some(g) => (0..b.dim())
                .map(|d| g.mean[d] + g.std[d] * seed::normal(rng))
                .collect(),
            None => (0..b.dim()).map(|d| seed::uniform(rng, b.lo[d], b.hi[d])).collect(),
        };
        b.clamp(&mut a);
        a
    }

    /// Proposal (mean, std) used to initialise CEM; the uniform fallback
    /// maps to the midpoint with the matching standard deviation.
    pub fn proposal(&self, state: &[f64]) -> Gaussian {
        match self.cell(state) {
            Some(g) => g.clone(),
            None => Gaussian {
                mean: self.mean(state),
                std: (0..self.bounds.dim())
                    .map(|d| self.bounds.width(d) / libm::sqrt(12.0))
                    .collect(),
            },
        }
    }
}

/// Fit a Gaussian per state cell to the actions whose Q lies in the top
/// `quantile` of that cell (ties with the cutoff are kept).
pub fn fit_policy(q: &QFunction, data: &TransitionDataset, quantile: f64) -> Result<SkillPolicy> {
    if !(quantile > 0.0 && quantile <= 1.0) {
        return Err(Error::arg("policy quantile must lie in (0, 1]"));
    }
    let bounds = data.skill.action_bounds();
    let grid = q.grid.state_part();
    let mut per_cell: Vec<Vec<(f64, &[f64])>> = (0..grid.n_cells()).map(|_| Vec::new()).collect();
    for r in &data.records {
        let cell = grid.locate(&r.state, &[]).cell;
        per_cell[cell].push((q.posterior(&r.state, &r.action).mean, &r.action));
    }
    let dim = bounds.dim();
    let cells = per_cell
        .into_iter()
        .map(|mut recs| {
            if recs.len() < MIN_CELL_RECORDS {
                return None;
            }
            recs.sort_by(|a, b| b.0.total_cmp(&a.0));
            let k = libm::ceil(quantile * recs.len() as f64) as usize;
            let k = k.clamp(1, recs.len());
            let mut cutoff = recs[k - 1].0;
            if k < recs.len() && recs[0].0 > 0.0 {
                // Zero-valued actions carry no evidence of success; they
                // only enter through ties when the quantile is selective.
                cutoff = cutoff.max(f64::MIN_POSITIVE);
            }
            let elite: Vec<&[f64]> = recs.iter().take_while(|r| r.0 >= cutoff).map(|r| r.1).collect();
            let m = elite.len() as f64;
            let mut mean = alloc::vec![0.0; dim];
            for a in &elite {
                for d in 0..dim {
                    mean[d] += a[d] / m;
                }
            }
            let std = (0..dim)
                .map(|d| {
                    let var = elite.iter().map(|a| (a[d] - mean[d]) * (a[d] - mean[d])).sum::<f64>() / m;
                    libm::sqrt(var).max(STD_FLOOR_FRACTION * bounds.width(d))
                })
                .collect();
            bounds.clamp(&mut mean);
            Some(Gaussian { mean, std })
        })
        .collect();
    Ok(SkillPolicy { grid, bounds, cells })
}
