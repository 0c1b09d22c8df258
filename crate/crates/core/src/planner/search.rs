//! Shooting, CEM, greedy and oracle planners.
//!
//! Every sampled plan draws from its own stream derived from
//! `(seed, iteration, sample index)`, so the result does not depend on how a
//! [`Pool`] schedules work.

use alloc::vec::Vec;

use super::{evaluate_objective, execute, ActionPlan, PlanOutcome, PlannerConfig, PlannerMethod};
use crate::error::{Error, Result};
use crate::pool::Pool;
use crate::seed::{self, Rng};
use crate::skills::SkillLibrary;
use crate::uq::{filter_uncertain, UqMode};
use crate::world::{project, step, ActionBounds, SkillInstance, WorldState};

/// CEM standard-deviation floor as a fraction of the bound width.
const CEM_STD_FLOOR: f64 = 1e-3;

fn uniform_action(bounds: &ActionBounds, rng: &mut Rng) -> Vec<f64> {
    (0..bounds.dim())
        .map(|d| seed::uniform(rng, bounds.lo[d], bounds.hi[d]))
        .collect()
}

/// Policy proposal at `s`: N(policy mean, policy_std · width), or uniform in
/// cells without a fitted Gaussian.
fn policy_action(
    lib: &SkillLibrary,
    inst: &SkillInstance,
    s: &WorldState,
    policy_std: f64,
    rng: &mut Rng,
) -> Result<Vec<f64>> {
    let entry = lib.require(inst.skill)?;
    let local = project(s, inst, entry.projection_seed)?;
    let b = &entry.bounds;
    let mut a = match entry.policy.cell(&local.values) {
        Some(g) => (0..b.dim())
            .map(|d| g.mean[d] + policy_std * b.width(d) * seed::normal(rng))
            .collect(),
        None => uniform_action(b, rng),
    };
    b.clamp(&mut a);
    Ok(a)
}

fn sample_plan(
    lib: &SkillLibrary,
    skeleton: &[SkillInstance],
    s1: &WorldState,
    cfg: &PlannerConfig,
    rng: &mut Rng,
) -> Result<ActionPlan> {
    let mut actions = Vec::with_capacity(skeleton.len());
    if cfg.method == PlannerMethod::RandomShooting {
        for inst in skeleton {
            actions.push(uniform_action(&inst.skill.action_bounds(), rng));
        }
        return Ok(ActionPlan::new(actions));
    }
    // Roll forward with the sampled action so later proposals condition on
    // the actual candidate prefix.
    let mut s = s1.clone();
    for inst in skeleton {
        let a = policy_action(lib, inst, &s, cfg.policy_std, rng)?;
        s = lib.require(inst.skill)?.dynamics.predict(&s, inst, &a)?;
        actions.push(a);
    }
    Ok(ActionPlan::new(actions))
}

/// Candidates allowed to win: all, or the survivors of uncertainty
/// filtering.
fn admissible(uncertainty: &[f64], cfg: &PlannerConfig) -> Result<Vec<usize>> {
    let n = uncertainty.len();
    if cfg.uncertainty.mode == UqMode::Filter && n > 1 {
        filter_uncertain(uncertainty, cfg.uncertainty.n_filter.min(n - 1))
    } else {
        Ok((0..n).collect())
    }
}

/// Highest score among `idx`; ties go to the lowest index.
fn argmax(scores: &[f64], idx: &[usize]) -> usize {
    let mut best = idx[0];
    for &i in &idx[1..] {
        if scores[i] > scores[best] {
            best = i;
        }
    }
    best
}

pub fn plan_shooting<P: Pool>(
    lib: &SkillLibrary,
    skeleton: &[SkillInstance],
    s1: &WorldState,
    cfg: &PlannerConfig,
    pool: &P,
) -> Result<PlanOutcome> {
    let base = seed::split_index(seed::split(cfg.seed, "shooting"), 0);
    let samples: Vec<Result<PlanOutcome>> = pool.map_indexed(cfg.num_samples, |i| {
        let mut rng = seed::rng(seed::split_index(base, i as u64));
        let plan = sample_plan(lib, skeleton, s1, cfg, &mut rng)?;
        let result = evaluate_objective(lib, skeleton, &plan, s1, &cfg.uncertainty)?;
        Ok(PlanOutcome { plan, result })
    });
    let samples: Vec<PlanOutcome> = samples.into_iter().collect::<Result<_>>()?;
    let scores: Vec<f64> = samples.iter().map(|o| o.result.score()).collect();
    let unc: Vec<f64> = samples.iter().map(|o| o.result.uncertainty).collect();
    let best = argmax(&scores, &admissible(&unc, cfg)?);
    Ok(samples.into_iter().nth(best).expect("index in range"))
}

#[derive(Debug, Clone, PartialEq)]
pub struct CemOutcome<T> {
    pub plan: ActionPlan,
    pub score: f64,
    pub payload: T,
    /// Best score seen so far, after each iteration.
    pub best_per_iteration: Vec<f64>,
    pub final_mean: Vec<Vec<f64>>,
    pub final_std: Vec<Vec<f64>>,
}

/// Cross-entropy search over per-step diagonal Gaussians. `eval` returns
/// `(score, uncertainty, payload)` for a plan.
pub fn cem_optimize<P, F, T>(
    bounds: &[ActionBounds],
    mean: Vec<Vec<f64>>,
    std: Vec<Vec<f64>>,
    cfg: &PlannerConfig,
    pool: &P,
    eval: F,
) -> Result<CemOutcome<T>>
where
    P: Pool,
    T: Send + Clone,
    F: Fn(&ActionPlan) -> Result<(f64, f64, T)> + Sync,
{
    cem_run(bounds, mean, std, None, cfg, pool, eval)
}

type Sampler<'a> = &'a (dyn Fn(&mut Rng) -> Result<ActionPlan> + Sync);

/// CEM loop. When `first` is given, the first population is drawn from it
/// instead of the initial Gaussians.
fn cem_run<P, F, T>(
    bounds: &[ActionBounds],
    mut mean: Vec<Vec<f64>>,
    mut std: Vec<Vec<f64>>,
    first: Option<Sampler<'_>>,
    cfg: &PlannerConfig,
    pool: &P,
    eval: F,
) -> Result<CemOutcome<T>>
where
    P: Pool,
    T: Send + Clone,
    F: Fn(&ActionPlan) -> Result<(f64, f64, T)> + Sync,
{
    cfg.validate()?;
    if (cfg.num_samples as f64) * cfg.elite_fraction < 1.0 {
        return Err(Error::config("num_samples × elite_fraction leaves no elites"));
    }
    let per_iter = (cfg.num_samples / cfg.cem_iterations).max(1);
    let n_elite = ((per_iter as f64 * cfg.elite_fraction) as usize).max(1);
    let base = seed::split(cfg.seed, "cem");
    let mut best: Option<(ActionPlan, f64, T)> = None;
    let mut history = Vec::with_capacity(cfg.cem_iterations);
    for it in 0..cfg.cem_iterations {
        let stream = seed::split_index(base, it as u64);
        let (m, s) = (&mean, &std);
        let pool_out: Vec<Result<(ActionPlan, f64, f64, T)>> = pool.map_indexed(per_iter, |i| {
            let mut rng = seed::rng(seed::split_index(stream, i as u64));
            if let (0, Some(sample)) = (it, first) {
                let plan = sample(&mut rng)?;
                let (score, unc, payload) = eval(&plan)?;
                return Ok((plan, score, unc, payload));
            }
            let actions = bounds
                .iter()
                .enumerate()
                .map(|(h, b)| {
                    let mut a: Vec<f64> = (0..b.dim())
                        .map(|d| m[h][d] + s[h][d] * seed::normal(&mut rng))
                        .collect();
                    b.clamp(&mut a);
                    a
                })
                .collect();
            let plan = ActionPlan::new(actions);
            let (score, unc, payload) = eval(&plan)?;
            Ok((plan, score, unc, payload))
        });
        let samples: Vec<(ActionPlan, f64, f64, T)> = pool_out.into_iter().collect::<Result<_>>()?;
        let scores: Vec<f64> = samples.iter().map(|x| x.1).collect();
        let unc: Vec<f64> = samples.iter().map(|x| x.2).collect();
        let mut kept = admissible(&unc, cfg)?;
        kept.sort_by(|&a, &b| scores[b].total_cmp(&scores[a]).then(a.cmp(&b)));
        let top = kept[0];
        if best.as_ref().map_or(true, |b| scores[top] >= b.1) {
            best = Some((samples[top].0.clone(), scores[top], samples[top].3.clone()));
        }
        refit(&mut mean, &mut std, bounds, kept.iter().take(n_elite).map(|&k| &samples[k].0));
        history.push(best.as_ref().map_or(f64::NEG_INFINITY, |b| b.1));
    }
    let (plan, score, payload) = best.expect("at least one iteration");
    Ok(CemOutcome {
        plan,
        score,
        payload,
        best_per_iteration: history,
        final_mean: mean,
        final_std: std,
    })
}

fn refit<'a>(
    mean: &mut [Vec<f64>],
    std: &mut [Vec<f64>],
    bounds: &[ActionBounds],
    elites: impl Iterator<Item = &'a ActionPlan> + Clone,
) {
    let n = elites.clone().count() as f64;
    for (h, b) in bounds.iter().enumerate() {
        for d in 0..b.dim() {
            let mu = elites.clone().map(|p| p.actions[h][d]).sum::<f64>() / n;
            let var = elites
                .clone()
                .map(|p| (p.actions[h][d] - mu) * (p.actions[h][d] - mu))
                .sum::<f64>()
                / n;
            mean[h][d] = mu;
            std[h][d] = libm::sqrt(var).max(CEM_STD_FLOOR * b.width(d));
        }
    }
}

/// Initial per-step Gaussians: uniform moments, or the policy-mean rollout
/// with std `policy_std · width`.
fn cem_init(
    lib: &SkillLibrary,
    skeleton: &[SkillInstance],
    s1: &WorldState,
    cfg: &PlannerConfig,
) -> Result<(Vec<Vec<f64>>, Vec<Vec<f64>>)> {
    let mut mean = Vec::with_capacity(skeleton.len());
    let mut std = Vec::with_capacity(skeleton.len());
    let uniform_std = |b: &ActionBounds| (0..b.dim()).map(|d| b.width(d) / libm::sqrt(12.0)).collect::<Vec<_>>();
    if cfg.method == PlannerMethod::RandomCem {
        for inst in skeleton {
            let b = inst.skill.action_bounds();
            mean.push((0..b.dim()).map(|d| 0.5 * (b.lo[d] + b.hi[d])).collect());
            std.push(uniform_std(&b));
        }
        return Ok((mean, std));
    }
    let mut s = s1.clone();
    for inst in skeleton {
        let entry = lib.require(inst.skill)?;
        let local = project(&s, inst, entry.projection_seed)?;
        let b = &entry.bounds;
        let m = entry.policy.mean(&local.values);
        match entry.policy.cell(&local.values) {
            Some(_) => std.push((0..b.dim()).map(|d| cfg.policy_std * b.width(d)).collect()),
            None => std.push(uniform_std(b)),
        }
        s = entry.dynamics.predict(&s, inst, &m)?;
        mean.push(m);
    }
    Ok((mean, std))
}

pub fn plan_cem<P: Pool>(
    lib: &SkillLibrary,
    skeleton: &[SkillInstance],
    s1: &WorldState,
    cfg: &PlannerConfig,
    pool: &P,
) -> Result<PlanOutcome> {
    let (mean, std) = cem_init(lib, skeleton, s1, cfg)?;
    let bounds: Vec<ActionBounds> = skeleton.iter().map(|i| i.skill.action_bounds()).collect();
    // Policy CEM draws its first population exactly like policy shooting,
    // conditioning each proposal on that sample's own predicted state.
    let rollout = |rng: &mut Rng| sample_plan(lib, skeleton, s1, cfg, rng);
    let first: Option<Sampler<'_>> = match cfg.method {
        PlannerMethod::PolicyCem => Some(&rollout),
        _ => None,
    };
    let out = cem_run(&bounds, mean, std, first, cfg, pool, |plan| {
        let r = evaluate_objective(lib, skeleton, plan, s1, &cfg.uncertainty)?;
        Ok((r.score(), r.uncertainty, r))
    })?;
    Ok(PlanOutcome {
        plan: out.plan,
        result: out.payload,
    })
}

/// Policy means along the predicted trajectory, without lookahead.
pub fn plan_greedy(lib: &SkillLibrary, skeleton: &[SkillInstance], s1: &WorldState) -> Result<ActionPlan> {
    let mut s = s1.clone();
    let mut actions = Vec::with_capacity(skeleton.len());
    for inst in skeleton {
        let entry = lib.require(inst.skill)?;
        let local = project(&s, inst, entry.projection_seed)?;
        let a = entry.policy.mean(&local.values);
        s = entry.dynamics.predict(&s, inst, &a)?;
        actions.push(a);
    }
    Ok(ActionPlan::new(actions))
}

/// First fully successful plan in `plans`, else the one completing the most
/// steps (lowest index on ties). Returns `(index, success)`.
pub fn oracle_select(world: &WorldState, skeleton: &[SkillInstance], plans: &[ActionPlan]) -> Result<(usize, bool)> {
    if plans.is_empty() {
        return Err(Error::arg("oracle needs at least one candidate plan"));
    }
    let mut best = (0, 0usize);
    for (i, p) in plans.iter().enumerate() {
        let ex = execute(world, skeleton, p)?;
        if ex.success {
            return Ok((i, true));
        }
        let done = ex.rewards.iter().filter(|&&r| r == 1).count();
        if done > best.1 {
            best = (i, done);
        }
    }
    Ok((best.0, false))
}

/// Policy shooting scored by the ground-truth simulator. Proposals condition
/// on the simulated states.
pub fn plan_oracle<P: Pool>(
    lib: &SkillLibrary,
    world: &WorldState,
    skeleton: &[SkillInstance],
    cfg: &PlannerConfig,
    pool: &P,
) -> Result<(ActionPlan, bool)> {
    let base = seed::split_index(seed::split(cfg.seed, "oracle"), 0);
    let samples: Vec<Result<(ActionPlan, usize)>> = pool.map_indexed(cfg.num_samples, |i| {
        let mut rng = seed::rng(seed::split_index(base, i as u64));
        let mut s = world.clone();
        let mut actions = Vec::with_capacity(skeleton.len());
        let mut done = 0;
        let mut failed = false;
        for inst in skeleton {
            let a = policy_action(lib, inst, &s, cfg.policy_std, &mut rng)?;
            if !failed {
                let (next, r) = step(&s, inst, &a)?;
                if r == 1 {
                    done += 1;
                    s = next;
                } else {
                    failed = true;
                }
            }
            actions.push(a);
        }
        Ok((ActionPlan::new(actions), done))
    });
    let samples: Vec<(ActionPlan, usize)> = samples.into_iter().collect::<Result<_>>()?;
    let h = skeleton.len();
    let mut best = 0;
    for (i, (_, done)) in samples.iter().enumerate() {
        if *done == h {
            best = i;
            break;
        }
        if *done > samples[best].1 {
            best = i;
        }
    }
    let success = samples[best].1 == h;
    Ok((samples.into_iter().nth(best).expect("index in range").0, success))
}
