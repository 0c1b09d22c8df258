//! `train`: fit every skill and write the model plus a training report.

use std::path::Path;

use serde::Serialize;
use skillseq_core::pool::Pool;
use skillseq_core::skills::{train_skill_with_data, SkillConfig, SkillLibrary, TrainingStats, TransitionDataset};

use crate::config::TrainSection;
use crate::dataset;
use crate::error::{write_file, CliError, Result};
use crate::model;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SkillReport {
    pub skill: String,
    pub records: usize,
    pub success_rate: f64,
    pub heldout_mse: f64,
    pub q_cells: usize,
    pub dynamics_cells: usize,
}

pub struct Trained {
    pub library: SkillLibrary,
    pub reports: Vec<SkillReport>,
    pub datasets: Vec<TransitionDataset>,
}

/// Train all skills, one per pool task. Every skill uses the same training
/// seed; results do not depend on the pool.
pub fn train<P: Pool>(configs: &[SkillConfig], seed: u64, heldout: usize, pool: &P) -> Result<Trained> {
    let results = pool.map_indexed(configs.len(), |i| train_skill_with_data(&configs[i], seed, heldout));
    let mut library = SkillLibrary::new();
    let mut reports = Vec::new();
    let mut datasets = Vec::new();
    for r in results {
        let (entry, stats, data): (_, TrainingStats, _) = r?;
        reports.push(SkillReport {
            skill: stats.skill.name().into(),
            records: stats.records,
            success_rate: stats.success_rate,
            heldout_mse: stats.heldout_mse,
            q_cells: entry.q.grid.n_cells(),
            dynamics_cells: entry.dynamics.grid.n_cells(),
        });
        library.insert(entry)?;
        datasets.push(data);
    }
    Ok(Trained {
        library,
        reports,
        datasets,
    })
}

/// Writes `model.txt`, `train_report.csv`, `train_summary.json` and, if
/// asked, `datasets/<skill>.csv` under `out`.
pub fn run<P: Pool>(section: &TrainSection, seed: u64, out: &Path, pool: &P) -> Result<Trained> {
    let configs = section.skill_configs()?;
    let trained = train(&configs, seed, section.heldout, pool)?;
    model::save(out.join("model.txt"), &trained.library)?;

    let path = out.join("train_report.csv");
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in &trained.reports {
        w.serialize(r).map_err(|e| CliError::format(path.display().to_string(), 0, e.to_string()))?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::io(&path, e.into_error()))?;
    write_file(&path, bytes)?;

    let summary = serde_json::json!({
        "seed": seed,
        "heldout": section.heldout,
        "skills": trained.reports,
    });
    write_file(out.join("train_summary.json"), &format!("{summary:#}\n"))?;

    if section.export_datasets {
        for d in &trained.datasets {
            dataset::write_csv(out.join("datasets").join(format!("{}.csv", d.skill.name())), d)?;
        }
    }
    Ok(trained)
}
