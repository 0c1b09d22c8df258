//! Bootstrap ensemble of grid regressors for the success probability.

use alloc::vec;
use alloc::vec::Vec;

use super::dataset::TransitionDataset;
use super::grid::FeatureGrid;
use crate::error::{Error, Result};
use crate::seed;

/// One ensemble member: per-cell mean reward and visit count.
#[derive(Debug, Clone, PartialEq)]
pub struct QMember {
    pub values: Vec<f64>,
    pub counts: Vec<u32>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct QFunction {
    pub grid: FeatureGrid,
    pub members: Vec<QMember>,
    pub prior_value: f64,
}

/// Ensemble posterior at one query.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QPosterior {
    pub mean: f64,
    pub std: f64,
    /// The query fell outside the training support: an empty cell or a
    /// feature value outside the observed range.
    pub unvisited: bool,
}

impl QMember {
    fn fit(grid: &FeatureGrid, data: &TransitionDataset, weights: &[u32], prior: f64) -> Self {
        let n = grid.n_cells();
        let mut sums = vec![0.0; n];
        let mut counts = vec![0u32; n];
        for (r, &w) in data.records.iter().zip(weights) {
            if w == 0 {
                continue;
            }
            let cell = grid.locate(&r.state, &r.action).cell;
            sums[cell] += f64::from(w) * f64::from(r.reward);
            counts[cell] += w;
        }
        let values = sums
            .iter()
            .zip(&counts)
            .map(|(s, &c)| if c == 0 { prior } else { s / f64::from(c) })
            .collect();
        Self { values, counts }
    }
}

/// Fit `e` members; member 0 sees every record, member k > 0 a bootstrap
/// resample drawn from `seed`.
pub fn fit_q(data: &TransitionDataset, grid: FeatureGrid, e: usize, seed: u64) -> Result<QFunction> {
    if data.is_empty() {
        return Err(Error::arg("fit_q needs a non-empty dataset"));
    }
    if e == 0 {
        return Err(Error::arg("ensemble size must be >= 1"));
    }
    let prior = 0.0;
    let n = data.len();
    let mut members = Vec::with_capacity(e);
    members.push(QMember::fit(&grid, data, &vec![1; n], prior));
    for k in 1..e {
        let mut rng = seed::rng(seed::split_index(seed, k as u64));
        let mut weights = vec![0u32; n];
        for _ in 0..n {
            weights[seed::below(&mut rng, n)] += 1;
        }
        members.push(QMember::fit(&grid, data, &weights, prior));
    }
    Ok(QFunction {
        grid,
        members,
        prior_value: prior,
    })
}

impl QFunction {
    pub fn ensemble_size(&self) -> usize {
        self.members.len()
    }

    /// Records seen by the full-data member in the query's cell.
    pub fn visits(&self, state: &[f64], action: &[f64]) -> u32 {
        self.members[0].counts[self.grid.locate(state, action).cell]
    }

    pub fn posterior(&self, state: &[f64], action: &[f64]) -> QPosterior {
        let hit = self.grid.locate(state, action);
        let e = self.members.len() as f64;
        let mean = self.members.iter().map(|m| m.values[hit.cell]).sum::<f64>() / e;
        let var = self
            .members
            .iter()
            .map(|m| {
                let d = m.values[hit.cell] - mean;
                d * d
            })
            .sum::<f64>()
            / e;
        QPosterior {
            mean: mean.clamp(0.0, 1.0),
            std: libm::sqrt(var),
            unvisited: !hit.in_support || self.members[0].counts[hit.cell] == 0,
        }
    }
}

/// Free-function form of [`QFunction::posterior`].
pub fn q_posterior(q: &QFunction, state: &[f64], action: &[f64]) -> QPosterior {
    q.posterior(state, action)
}
