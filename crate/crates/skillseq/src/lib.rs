//! File formats, threading and experiment drivers around `skillseq-core`.
//!
//! The `skillseq` binary exposes four commands:
//!
//! * `train`  — collect bandit data, fit every skill, save a model file;
//! * `plan`   — run planner methods on benchmark tasks, write a table;
//! * `tamp`   — run the task-and-motion loop with and without filtering;
//! * `report` — aggregate tables into confidence intervals and plot data.

pub mod bench;
pub mod config;
pub mod dataset;
pub mod error;
pub mod features;
pub mod model;
pub mod report;
pub mod tamprun;
pub mod threads;
pub mod train;
pub mod worldio;

pub use error::{CliError, Result};
pub use threads::ThreadPool;
