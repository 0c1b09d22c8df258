//! Plan-level uncertainty: scores, filtering and the lower-confidence-bound
//! objective.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::planner::{product_of, EvaluationResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum UqMode {
    #[default]
    Off,
    Filter,
    Robust,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Aggregation {
    #[default]
    MaxStepSigma,
    SumStepSigma,
}

impl UqMode {
    pub fn name(self) -> &'static str {
        match self {
            UqMode::Off => "off",
            UqMode::Filter => "filter",
            UqMode::Robust => "robust",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        [UqMode::Off, UqMode::Filter, UqMode::Robust]
            .into_iter()
            .find(|m| m.name() == s)
    }
}

impl Aggregation {
    pub fn name(self) -> &'static str {
        match self {
            Aggregation::MaxStepSigma => "max_step_sigma",
            Aggregation::SumStepSigma => "sum_step_sigma",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        [Aggregation::MaxStepSigma, Aggregation::SumStepSigma]
            .into_iter()
            .find(|m| m.name() == s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UncertaintyConfig {
    pub mode: UqMode,
    /// Candidates dropped per pool in filter mode.
    pub n_filter: usize,
    pub alpha: f64,
    pub aggregation: Aggregation,
}

impl Default for UncertaintyConfig {
    fn default() -> Self {
        Self {
            mode: UqMode::Off,
            n_filter: 0,
            alpha: 1.0,
            aggregation: Aggregation::MaxStepSigma,
        }
    }
}

impl UncertaintyConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.alpha >= 0.0) || !self.alpha.is_finite() {
            return Err(Error::config("alpha must be finite and >= 0"));
        }
        Ok(())
    }
}

/// Aggregate per-step σ; any step outside the training support makes the
/// plan maximally uncertain (`f64::INFINITY`).
pub fn plan_uncertainty(result: &EvaluationResult, aggregation: Aggregation) -> f64 {
    if result.steps.iter().any(|s| s.unvisited) {
        return f64::INFINITY;
    }
    let sigmas = result.steps.iter().map(|s| s.sigma);
    match aggregation {
        Aggregation::MaxStepSigma => sigmas.fold(0.0, f64::max),
        Aggregation::SumStepSigma => sigmas.sum(),
    }
}

/// Indices that survive dropping the `n` highest scores. Among equal scores
/// the lower index is kept; survivors stay in their original order.
pub fn filter_uncertain(scores: &[f64], n: usize) -> Result<Vec<usize>> {
    if n == 0 {
        return Ok((0..scores.len()).collect());
    }
    if n >= scores.len() {
        return Err(Error::arg("cannot filter every candidate"));
    }
    let mut order: Vec<usize> = (0..scores.len()).collect();
    // Highest score first; among ties the highest index goes first.
    order.sort_by(|&a, &b| scores[b].total_cmp(&scores[a]).then(b.cmp(&a)));
    let mut dropped = alloc::vec![false; scores.len()];
    for &i in &order[..n] {
        dropped[i] = true;
    }
    Ok((0..scores.len()).filter(|&i| !dropped[i]).collect())
}

/// `∏ clamp(q_h − α σ_h, 0, 1)`; steps outside the support count as σ = ∞
/// whenever α > 0.
pub fn robust_objective(result: &EvaluationResult, alpha: f64) -> f64 {
    // Same accumulation as J, so α = 0 reproduces it bit for bit.
    product_of(result.steps.iter().map(|s| {
        let sigma = if s.unvisited && alpha > 0.0 { f64::INFINITY } else { s.sigma };
        let penalty = if alpha == 0.0 { 0.0 } else { alpha * sigma };
        (s.q - penalty).clamp(0.0, 1.0)
    }))
}
