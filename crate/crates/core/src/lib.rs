//! Skill sequencing over a deterministic 1-D tabletop.
//!
//! The crate trains per-skill artifacts (Q-function ensemble, policy,
//! dynamics model) from single-step bandit data and grounds skill sequences
//! with primitive parameters that maximise the product of Q-values along a
//! dynamics-predicted trajectory. A STRIPS task planner enumerates candidate
//! skeletons for the task-and-motion loop.
//!
//! Everything here is `no_std` + `alloc`; file formats, threads and the CLI
//! live in the `skillseq` crate.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod error;
pub mod pddl;
pub mod planner;
pub mod pool;
pub mod scenarios;
pub mod seed;
pub mod skills;
pub mod tamp;
pub mod uq;
pub mod world;

pub use error::{Error, Result};
