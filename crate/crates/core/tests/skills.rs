//! Training artifacts checked against independent recomputation.

use std::collections::BTreeMap;

use proptest::prelude::*;
use skillseq_core::scenarios::{default_skill_configs, skill_config, training_scenario};
use skillseq_core::seed;
use skillseq_core::skills::*;
use skillseq_core::world::*;

fn pick_data(n: usize, s: u64) -> TransitionDataset {
    let cfg = skill_config(SkillId::Pick);
    collect(SkillId::Pick, &cfg.scenario, n, s, cfg.projection_seed).unwrap()
}

fn q_grid(data: &TransitionDataset) -> FeatureGrid {
    let cfg = skill_config(data.skill);
    FeatureGrid::fit(&cfg.q_features, data.records.iter().map(|r| (r.state.as_slice(), r.action.as_slice())))
}

#[test]
fn collect_rejects_zero_and_is_deterministic() {
    let cfg = skill_config(SkillId::Push);
    assert!(collect(SkillId::Push, &cfg.scenario, 0, 1, 0).is_err());
    let a = collect(SkillId::Push, &cfg.scenario, 300, 9, cfg.projection_seed).unwrap();
    let b = collect(SkillId::Push, &cfg.scenario, 300, 9, cfg.projection_seed).unwrap();
    assert_eq!(a, b);
    assert_eq!(a.len(), 300);
    let bounds = SkillId::Push.action_bounds();
    assert!(a.records.iter().all(|r| bounds.contains(&r.action) && r.reward <= 1));
}

/// Success probability of uniform exploration, integrated over a state
/// sample and a dense action grid.
#[test]
fn pick_success_rate_matches_brute_force() {
    let data = pick_data(10_000, 3);
    let scenario = training_scenario(SkillId::Pick);
    let b = SkillId::Pick.action_bounds();
    let grid = 400;
    let mut total = 0.0;
    let states = 2000;
    for i in 0..states {
        let w = sample_initial(&scenario, 1_000_000 + i).unwrap();
        let cands = candidate_instances(&w, SkillId::Pick);
        let mut p = 0.0;
        for inst in &cands {
            let hits = (0..grid)
                .filter(|&k| {
                    let a = b.lo[0] + (k as f64 + 0.5) * b.width(0) / grid as f64;
                    ground_truth_q(&w, inst, &[a]).unwrap() == 1
                })
                .count();
            p += hits as f64 / grid as f64;
        }
        total += p / cands.len() as f64;
    }
    let brute = total / states as f64;
    let empirical = data.success_rate();
    assert!((empirical - brute).abs() <= 0.03, "empirical {empirical} vs brute force {brute}");
}

#[test]
fn single_member_q_is_the_cell_mean() {
    let data = pick_data(3000, 5);
    let grid = q_grid(&data);
    let q = fit_q(&data, grid.clone(), 1, 0).unwrap();
    let mut sums: BTreeMap<usize, (f64, u32)> = BTreeMap::new();
    for r in &data.records {
        let e = sums.entry(grid.locate(&r.state, &r.action).cell).or_default();
        e.0 += f64::from(r.reward);
        e.1 += 1;
    }
    for cell in 0..grid.n_cells() {
        let expect = sums.get(&cell).map_or(0.0, |&(s, c)| s / f64::from(c));
        assert_eq!(q.members[0].values[cell], expect, "cell {cell}");
    }
    for r in data.records.iter().take(200) {
        assert_eq!(q.posterior(&r.state, &r.action).std, 0.0);
    }
}

#[test]
fn all_success_data_gives_unit_cells() {
    let mut data = pick_data(500, 2);
    for r in &mut data.records {
        r.reward = 1;
    }
    let q = fit_q(&data, q_grid(&data), 4, 1).unwrap();
    for m in &q.members {
        for (v, &c) in m.values.iter().zip(&m.counts) {
            assert_eq!(*v, if c > 0 { 1.0 } else { q.prior_value });
        }
    }
    let e1 = fit_q(&data, q_grid(&data), 1, 1).unwrap();
    for r in &data.records {
        let p = e1.posterior(&r.state, &r.action);
        assert_eq!((p.mean, p.std), (1.0, 0.0));
    }
}

#[test]
fn empty_cell_reports_prior_and_flag() {
    let data = pick_data(2000, 4);
    let q = fit_q(&data, q_grid(&data), 5, 1).unwrap();
    let cell = (0..q.grid.n_cells()).find(|&c| q.members[0].counts[c] == 0).expect("some empty cell");
    // Centre of that cell.
    let mut rest = cell;
    let mut point = vec![0.0; q.grid.axes.len()];
    for (k, axis) in q.grid.axes.iter().enumerate().rev() {
        let b = rest % axis.bins;
        rest /= axis.bins;
        point[k] = axis.lo + (b as f64 + 0.5) * axis.bin_width();
    }
    let mut state = data.records[0].state.clone();
    let mut action = vec![0.0];
    for (axis, v) in q.grid.axes.iter().zip(&point) {
        match axis.feature {
            FeatureRef::State(i) => state[i] = *v,
            FeatureRef::Action(i) => action[i] = *v,
        }
    }
    assert_eq!(q.grid.locate(&state, &action).cell, cell);
    let p = q.posterior(&state, &action);
    assert_eq!((p.mean, p.std, p.unvisited), (q.prior_value, 0.0, true));
}

/// Cells with plenty of data agree with fresh ground-truth rollouts that land
/// in the same cell.
#[test]
fn well_visited_cells_match_ground_truth() {
    let data = pick_data(10_000, 6);
    let coarse = [(FeatureRef::slot(0, F_X), 4), (FeatureRef::slot(0, F_HALF_WIDTH), 2), (FeatureRef::Action(0), 8)];
    let grid = FeatureGrid::fit(&coarse, data.records.iter().map(|r| (r.state.as_slice(), r.action.as_slice())));
    let q = fit_q(&data, grid, 5, 2).unwrap();
    let fresh = pick_data(40_000, 77);
    let mut mc: BTreeMap<usize, (f64, f64)> = BTreeMap::new();
    for r in &fresh.records {
        let e = mc.entry(q.grid.locate(&r.state, &r.action).cell).or_default();
        e.0 += f64::from(r.reward);
        e.1 += 1.0;
    }
    let mut checked = 0;
    for r in &data.records {
        let hit = q.grid.locate(&r.state, &r.action);
        if q.members[0].counts[hit.cell] < 100 {
            continue;
        }
        let (s, n) = mc[&hit.cell];
        let mu = q.posterior(&r.state, &r.action).mean;
        assert!((mu - s / n).abs() <= 0.1, "cell {}: {mu} vs {}", hit.cell, s / n);
        checked += 1;
    }
    assert!(checked > 0);
}

#[test]
fn policy_with_full_quantile_is_cell_mean() {
    let data = pick_data(3000, 8);
    let q = fit_q(&data, q_grid(&data), 3, 0).unwrap();
    let pol = fit_policy(&q, &data, 1.0).unwrap();
    let mut groups: BTreeMap<usize, Vec<f64>> = BTreeMap::new();
    for r in &data.records {
        groups.entry(pol.grid.locate(&r.state, &[]).cell).or_default().push(r.action[0]);
    }
    for (cell, acts) in groups {
        let g = &pol.cells[cell];
        if acts.len() < MIN_CELL_RECORDS {
            assert!(g.is_none());
            continue;
        }
        let mean = acts.iter().sum::<f64>() / acts.len() as f64;
        assert!((g.as_ref().unwrap().mean[0] - mean).abs() < 1e-12);
    }
}

#[test]
fn pick_policy_centres_on_the_object() {
    let cfg = skill_config(SkillId::Pick);
    let (entry, _) = train_skill(&cfg, 7, 0).unwrap();
    let bin = entry.q.grid.axes.iter().find(|a| !a.feature.is_state()).unwrap().bin_width();
    let w = WorldState::new(
        vec![
            ObjectState::table(),
            ObjectState::new(ObjectKind::Rack, 0.85, 0.10),
            ObjectState::new(ObjectKind::Hook, 0.6, 0.15),
            ObjectState::new(ObjectKind::Block, 0.3, 0.04),
        ],
        WorldParams::default(),
    );
    let inst = SkillInstance::new(SkillId::Pick, &[3, 0]);
    let s = project(&w, &inst, entry.projection_seed).unwrap();
    let m = entry.policy.mean(&s.values)[0];
    assert!(m.abs() <= bin, "policy mean {m}, bin width {bin}");
}

#[test]
fn policy_samples_respect_bounds() {
    let data = pick_data(2000, 9);
    let q = fit_q(&data, q_grid(&data), 3, 0).unwrap();
    let pol = fit_policy(&q, &data, 0.2).unwrap();
    let b = SkillId::Pick.action_bounds();
    let mut rng = seed::rng(1);
    for i in 0..10_000 {
        let r = &data.records[i % data.len()];
        assert!(b.contains(&pol.sample(&r.state, &mut rng)));
    }
    for g in pol.cells.iter().flatten() {
        assert!(b.contains(&g.mean) && g.std[0] >= STD_FLOOR_FRACTION * b.width(0));
    }
    assert!(fit_policy(&q, &data, 0.0).is_err());
}

fn dyn_grid(data: &TransitionDataset) -> FeatureGrid {
    let cfg = skill_config(data.skill);
    FeatureGrid::fit(&cfg.dynamics_features, data.records.iter().map(|r| (r.state.as_slice(), r.action.as_slice())))
}

#[test]
fn dynamics_exact_with_one_record_per_cell() {
    for skill in SkillId::ALL {
        let cfg = skill_config(skill);
        let full = collect(skill, &cfg.scenario, 2000, 11, cfg.projection_seed).unwrap();
        let grid = dyn_grid(&full);
        let mut seen = std::collections::BTreeSet::new();
        let mut sub = full.clone();
        sub.records.retain(|r| seen.insert(grid.locate(&r.state, &r.action).cell));
        let model = fit_dynamics(&sub, grid).unwrap();
        for r in &sub.records {
            let p = model.predict(&r.world, &r.instance, &r.action).unwrap();
            assert_eq!(p.hand.map(|h| h.object), r.next.hand.map(|h| h.object));
            for (a, b) in p.objects.iter().zip(&r.next.objects) {
                assert_eq!(a.status, b.status);
                assert!((a.x - b.x).abs() < 1e-12, "{skill}: {} vs {}", a.x, b.x);
            }
        }
    }
}

#[test]
fn failed_no_op_records_give_zero_deltas() {
    let mut data = pick_data(2000, 12);
    data.records.retain(|r| r.reward == 0);
    let model = fit_dynamics(&data, dyn_grid(&data)).unwrap();
    assert!(model.deltas.iter().all(|&d| d == 0.0));
}

#[test]
fn training_is_deterministic_and_modular() {
    let cfgs = default_skill_configs();
    let mut lib = SkillLibrary::new();
    let (pick, stats) = train_skill(&cfgs[0], 4, 100).unwrap();
    assert_eq!(train_skill(&cfgs[0], 4, 100).unwrap(), (pick.clone(), stats));
    lib.insert(pick.clone()).unwrap();
    let (push, _) = train_skill(&cfgs[3], 4, 0).unwrap();
    lib.insert(push).unwrap();
    assert_eq!(lib.get(SkillId::Pick), Some(&pick));
    assert!(lib.insert(pick).is_err());
    assert!(lib.require(SkillId::Pull).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn posterior_ranges(e in 1..6usize, s in any::<u64>(), k in 0..500usize, a in -0.3..0.3f64) {
        let data = pick_data(500, s % 16);
        let q = fit_q(&data, q_grid(&data), e, s).unwrap();
        let p = q.posterior(&data.records[k].state, &[a]);
        prop_assert!((0.0..=1.0).contains(&p.mean));
        prop_assert!(p.std >= 0.0);
        if e == 1 {
            prop_assert_eq!(p.std, 0.0);
        }
    }

    /// The stored deltas minimise the squared loss: nudging any component of
    /// any cell never lowers it.
    #[test]
    fn dynamics_deltas_minimise_loss(cell_pick in any::<usize>(), j in 0..22usize, eps in -0.05..0.05f64) {
        let cfg = skill_config(SkillId::Pull);
        let data = collect(SkillId::Pull, &cfg.scenario, 400, 13, cfg.projection_seed).unwrap();
        let model = fit_dynamics(&data, dyn_grid(&data)).unwrap();
        let base = model.squared_loss(&data);
        let mut m2 = model.clone();
        let cell = cell_pick % m2.counts.len();
        m2.delta_mut(cell)[j % (2 * FEATURES_PER_OBJECT)] += eps;
        prop_assert!(m2.squared_loss(&data) >= base - 1e-9);
    }
}
