//! Experiment commands behind the `pbridge` binary: configuration, runs,
//! and CSV/JSON reports.

mod commands;
mod config;
mod report;

pub use commands::{
    cmd_behavior_fit, cmd_integrate, cmd_reduce_compare, cmd_series_check, compare_runs, deviation, integrate_from,
    resonant_at, seed, Command, BEHAVIOR_GUARD, DEFECT_FACTOR, FIT_WINDOW, NOISE, SEED_ORDER, SLOPE_TOL,
};
pub use config::{CaseSelector, ExperimentConfig, Tolerances};
pub use report::{write_samples, Check, FittedSlope, RunReport, SampleRecord};

use crate::Error;

/// Process exit code for a finished report or an error.
pub fn exit_code(outcome: &Result<RunReport, Error>) -> i32 {
    match outcome {
        Ok(r) if r.passed => 0,
        Ok(_) => 1,
        Err(e) if e.is_numeric() => 2,
        Err(_) => 3,
    }
}
