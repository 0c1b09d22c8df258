use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use skillseq::bench;
use skillseq::config::{parse_mode, PlanSection, ReportSection, RunConfig};
use skillseq::report;
use skillseq::tamprun;
use skillseq::train;
use skillseq::{model, CliError, Result, ThreadPool};

#[derive(Debug, Parser)]
#[command(name = "skillseq", version, about = "Train skills, plan skill sequences, run TAMP experiments")]
struct Cli {
    /// TOML run configuration.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Global seed; overrides the config.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output directory; overrides the config.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads (default: available parallelism).
    #[arg(long, global = true)]
    workers: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Collect bandit data, fit every skill and save the model.
    Train,
    /// Run planner methods on benchmark tasks.
    Plan {
        /// Model file; defaults to `<out>/model.txt`.
        #[arg(long)]
        model: Option<PathBuf>,
    },
    /// Run the task-and-motion loop once per uncertainty mode.
    Tamp {
        /// Model file; defaults to `<out>/model.txt`.
        #[arg(long)]
        model: Option<PathBuf>,
        /// Built-in problem name; overrides the config.
        #[arg(long)]
        problem: Option<String>,
    },
    /// Aggregate benchmark tables.
    Report {
        /// Benchmark tables; override the config.
        inputs: Vec<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn run(cli: Cli) -> Result<()> {
    let cfg = match &cli.config {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::default(),
    };
    let out = cli.out.clone().or(cfg.out.clone()).unwrap_or_else(|| PathBuf::from("skillseq-out"));
    let pool = match cli.workers.or(cfg.workers) {
        Some(n) => ThreadPool::new(n),
        None => ThreadPool::default(),
    };
    let seed = cli.seed.or(cfg.seed);
    let need_seed = || seed.ok_or_else(|| CliError::config("a seed is required (`seed = …` or --seed)"));
    let model_path = |flag: Option<PathBuf>, section: Option<PathBuf>| flag.or(section).unwrap_or_else(|| out.join("model.txt"));

    match cli.command {
        Command::Train => {
            let seed = need_seed()?;
            let trained = train::run(&cfg.train, seed, &out, &pool)?;
            for r in &trained.reports {
                println!(
                    "{:<6} records={} success_rate={:.3} heldout_mse={:.5}",
                    r.skill, r.records, r.success_rate, r.heldout_mse
                );
            }
            println!("model written to {}", out.join("model.txt").display());
        }
        Command::Plan { model } => {
            let seed = need_seed()?;
            let section = match cfg.plan {
                Some(s) => s,
                None => toml::from_str::<PlanSection>("").expect("plan defaults"),
            };
            let lib = model::load(model_path(model, section.model.clone()))?;
            let tasks = section.task_list()?;
            let methods = section.method_list()?;
            let base = section.planner.to_config(methods[0], &section.uncertainty)?;
            let rows = bench::run(&lib, &tasks, &methods, &base, section.scenarios, seed, &pool)?;
            bench::write_rows(out.join("bench.csv"), &rows)?;
            let summary = bench::summarize(&rows);
            bench::write_summary(out.join("bench_summary.json"), &summary)?;
            for s in &summary {
                println!(
                    "{:<22} {:<16} success={:.3} mean_j={:.3} calib={:.3}",
                    s.task, s.method, s.success_rate, s.mean_j, s.calibration_error
                );
            }
        }
        Command::Tamp { model, problem } => {
            let seed = need_seed()?;
            let mut section = cfg.tamp.clone().map_or_else(
                || {
                    problem
                        .clone()
                        .ok_or_else(|| CliError::config("tamp needs a problem ([tamp] problem or --problem)"))
                        .map(|p| toml::from_str(&format!("problem = {p:?}")).expect("tamp defaults"))
                },
                Ok,
            )?;
            if let Some(p) = problem {
                section.problem = p;
            }
            let spec = section.problem_spec()?;
            let lib = model::load(model_path(model, section.model.clone()))?;
            let domain = tamprun::load_domain(section.domain.as_deref())?;
            let configs = section
                .modes
                .iter()
                .map(|m| section.to_config(parse_mode(m)?))
                .collect::<Result<Vec<_>>>()?;
            let (rows, log) = tamprun::run(&lib, &domain, &spec, &configs, section.scenarios, seed, &pool)?;
            tamprun::write_outputs(&out, &rows, &log)?;
            for s in tamprun::summarize(&rows) {
                println!(
                    "{:<8} success={:.3} solved={} unsolvable={} timeout={}",
                    s.mode, s.success_rate, s.solved, s.unsolvable, s.timeout
                );
            }
        }
        Command::Report { inputs } => {
            let section = cfg.report.clone().unwrap_or_default();
            let inputs = if inputs.is_empty() { section.inputs.clone() } else { inputs };
            report_cmd(&inputs, &section, seed.unwrap_or(0), &out)?;
        }
    }
    Ok(())
}

fn report_cmd(inputs: &[PathBuf], section: &ReportSection, seed: u64, out: &Path) -> Result<()> {
    if !(section.confidence > 0.0 && section.confidence < 1.0) {
        return Err(CliError::config("[report] confidence must lie in (0, 1)"));
    }
    let mut rows = Vec::new();
    for p in inputs {
        rows.extend(report::read_rows(p)?);
    }
    let rep = report::aggregate(&rows, section.bootstrap, section.confidence, seed);
    report::write_outputs(out, &rep)?;
    print!("{}", rep.to_table());
    Ok(())
}
