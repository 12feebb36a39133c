//! Configuration-driven experiments on top of `wavesource-core`: TOML
//! configs, CSV/JSON artifacts, seeded noise and parallel lattice sweeps.

// `!(x > 0.0)` is used deliberately so that NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod commands;
pub mod config;
pub mod error;
pub mod io;
pub mod noise;
pub mod residual;

pub use commands::{Experiment, Overrides};
pub use config::ExperimentConfig;
pub use error::CliError;
