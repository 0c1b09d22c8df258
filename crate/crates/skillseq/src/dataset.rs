//! Delimited-text export of transition datasets, for inspection.

use std::path::Path;

use skillseq_core::skills::TransitionDataset;

use crate::error::{CliError, Result};

fn csv_err(path: &Path, e: csv::Error) -> CliError {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => CliError::io(path, io),
        other => CliError::format(path.display().to_string(), 0, format!("{other:?}")),
    }
}

/// One row per transition: skill, argument indices, reward, action
/// components and the projected state.
pub fn write_csv(path: impl AsRef<Path>, data: &TransitionDataset) -> Result<()> {
    let path = path.as_ref();
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    }
    let mut w = csv::WriterBuilder::new()
        .flexible(true)
        .from_path(path)
        .map_err(|e| csv_err(path, e))?;
    let (adim, sdim) = data
        .records
        .first()
        .map_or((0, 0), |r| (r.action.len(), r.state.len()));
    let mut header = vec!["index".to_string(), "skill".into(), "args".into(), "reward".into()];
    header.extend((0..adim).map(|d| format!("a{d}")));
    header.extend((0..sdim).map(|i| format!("s{i}")));
    w.write_record(&header).map_err(|e| csv_err(path, e))?;
    for (i, r) in data.records.iter().enumerate() {
        let mut row = vec![
            i.to_string(),
            data.skill.name().to_string(),
            r.instance.args.iter().map(ToString::to_string).collect::<Vec<_>>().join(" "),
            r.reward.to_string(),
        ];
        row.extend(r.action.iter().map(|v| format!("{v:?}")));
        row.extend(r.state.iter().map(|v| format!("{v:?}")));
        w.write_record(&row).map_err(|e| csv_err(path, e))?;
    }
    w.flush().map_err(|e| CliError::io(path, e))
}

/// `(records, success rate)` recomputed from an exported file.
pub fn success_rate_of(path: impl AsRef<Path>) -> Result<(usize, f64)> {
    let path = path.as_ref();
    let mut r = csv::ReaderBuilder::new()
        .flexible(true)
        .from_path(path)
        .map_err(|e| csv_err(path, e))?;
    let col = r
        .headers()
        .map_err(|e| csv_err(path, e))?
        .iter()
        .position(|h| h == "reward")
        .ok_or_else(|| CliError::format(path.display().to_string(), 1, "no `reward` column"))?;
    let (mut n, mut ok) = (0usize, 0usize);
    for (i, rec) in r.records().enumerate() {
        let rec = rec.map_err(|e| csv_err(path, e))?;
        match rec.get(col) {
            Some("1") => ok += 1,
            Some("0") => {}
            other => {
                return Err(CliError::format(
                    path.display().to_string(),
                    i + 2,
                    format!("bad reward {other:?}"),
                ))
            }
        }
        n += 1;
    }
    Ok((n, if n == 0 { 0.0 } else { ok as f64 / n as f64 }))
}
