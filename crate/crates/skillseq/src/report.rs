//! `report`: aggregate benchmark tables into success rates with bootstrap
//! confidence intervals, plus plot-ready series.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use serde::Serialize;
use skillseq_core::seed;

use crate::bench::{BenchRow, BENCH_HEADER};
use crate::error::{write_file, CliError, Result};

/// Read one benchmark table, rejecting anything whose header differs from
/// [`BENCH_HEADER`].
pub fn read_rows(path: impl AsRef<Path>) -> Result<Vec<BenchRow>> {
    let path = path.as_ref();
    let name = path.display().to_string();
    let mut r = csv::Reader::from_path(path).map_err(|e| match e.into_kind() {
        csv::ErrorKind::Io(io) => CliError::io(path, io),
        other => CliError::format(name.clone(), 1, format!("{other:?}")),
    })?;
    let header = r
        .headers()
        .map_err(|e| CliError::format(name.clone(), 1, e.to_string()))?
        .clone();
    if header.len() == 0 {
        return Ok(Vec::new());
    }
    if !header.iter().eq(BENCH_HEADER) {
        return Err(CliError::format(
            name,
            1,
            format!("expected columns `{}`", BENCH_HEADER.join(",")),
        ));
    }
    let mut rows = Vec::new();
    for rec in r.deserialize() {
        let row: BenchRow = rec.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line() as usize);
            CliError::format(name.clone(), line, e.to_string())
        })?;
        rows.push(row);
    }
    Ok(rows)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Interval {
    pub mean: f64,
    pub lo: f64,
    pub hi: f64,
}

/// Mean of `xs` with a percentile bootstrap interval at `confidence`.
pub fn bootstrap_ci(xs: &[f64], resamples: usize, confidence: f64, seed: u64) -> Interval {
    let n = xs.len();
    if n == 0 {
        return Interval {
            mean: f64::NAN,
            lo: f64::NAN,
            hi: f64::NAN,
        };
    }
    let mean = xs.iter().sum::<f64>() / n as f64;
    if resamples == 0 {
        return Interval { mean, lo: mean, hi: mean };
    }
    let mut rng = seed::rng(seed);
    let mut means: Vec<f64> = (0..resamples)
        .map(|_| (0..n).map(|_| xs[seed::below(&mut rng, n)]).sum::<f64>() / n as f64)
        .collect();
    means.sort_by(f64::total_cmp);
    let tail = (1.0 - confidence) / 2.0;
    let at = |q: f64| means[((q * (resamples - 1) as f64).round() as usize).min(resamples - 1)];
    Interval {
        mean,
        lo: at(tail),
        hi: at(1.0 - tail),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GroupStats {
    /// Task name, or `*` for the per-method pooled row.
    pub task: String,
    pub method: String,
    pub num_samples: usize,
    pub n: usize,
    pub success: Interval,
    pub mean_j: f64,
    pub calibration_error: f64,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct Report {
    pub groups: Vec<GroupStats>,
    /// Pooled over tasks, per (method, num_samples).
    pub methods: Vec<GroupStats>,
}

fn stats(task: &str, method: &str, num_samples: usize, rows: &[&BenchRow], resamples: usize, confidence: f64, seed: u64) -> GroupStats {
    let ys: Vec<f64> = rows.iter().map(|r| r.success as f64).collect();
    let n = rows.len() as f64;
    let key = format!("{task}/{method}/{num_samples}");
    GroupStats {
        task: task.into(),
        method: method.into(),
        num_samples,
        n: rows.len(),
        success: bootstrap_ci(&ys, resamples, confidence, seed::split(seed, &key)),
        mean_j: rows.iter().map(|r| r.j).sum::<f64>() / n,
        calibration_error: rows.iter().map(|r| (r.j - r.success as f64).abs()).sum::<f64>() / n,
    }
}

/// Groups are sorted by key, so the report does not depend on input order;
/// each group's resampling stream is derived from `seed` and its key.
pub fn aggregate(rows: &[BenchRow], resamples: usize, confidence: f64, seed: u64) -> Report {
    let mut groups: BTreeMap<(&str, &str, usize), Vec<&BenchRow>> = BTreeMap::new();
    let mut methods: BTreeMap<(&str, usize), Vec<&BenchRow>> = BTreeMap::new();
    for r in rows {
        groups.entry((&r.task, &r.method, r.num_samples)).or_default().push(r);
        methods.entry((&r.method, r.num_samples)).or_default().push(r);
    }
    Report {
        groups: groups
            .iter()
            .map(|((t, m, k), g)| stats(t, m, *k, g, resamples, confidence, seed))
            .collect(),
        methods: methods
            .iter()
            .map(|((m, k), g)| stats("*", m, *k, g, resamples, confidence, seed))
            .collect(),
    }
}

impl Report {
    pub fn to_table(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(
            s,
            "{:<22} {:<16} {:>7} {:>5} {:>8} {:>17} {:>7} {:>7}",
            "task", "method", "samples", "n", "success", "ci", "mean_j", "calib"
        );
        for g in self.groups.iter().chain(&self.methods) {
            let _ = writeln!(
                s,
                "{:<22} {:<16} {:>7} {:>5} {:>8.3} {:>17} {:>7.3} {:>7.3}",
                g.task,
                g.method,
                g.num_samples,
                g.n,
                g.success.mean,
                format!("[{:.3}, {:.3}]", g.success.lo, g.success.hi),
                g.mean_j,
                g.calibration_error
            );
        }
        s
    }

    /// Success against planner budget, one line per (method, num_samples).
    pub fn plot_csv(&self) -> String {
        let mut s = String::from("method,num_samples,success,ci_lo,ci_hi\n");
        for g in &self.methods {
            let _ = writeln!(
                s,
                "{},{},{},{},{}",
                g.method, g.num_samples, g.success.mean, g.success.lo, g.success.hi
            );
        }
        s
    }
}

/// Writes `report.txt`, `report.json` and `plot_success_vs_samples.csv`.
pub fn write_outputs(out: &Path, report: &Report) -> Result<()> {
    write_file(out.join("report.txt"), report.to_table())?;
    let json = serde_json::to_string_pretty(report).expect("report serializes");
    write_file(out.join("report.json"), json + "\n")?;
    write_file(out.join("plot_success_vs_samples.csv"), report.plot_csv())
}
