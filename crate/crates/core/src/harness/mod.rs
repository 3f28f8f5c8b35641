//! Experiment runner, estimators, CSV output and verification suites.

pub mod config;
pub mod output;
pub mod run;
pub mod stats;
pub mod verify;

pub use config::{parse_alpha_grid, parse_n_list, ExperimentConfig, Settings};
pub use run::{
    map_indexed, run_experiment, run_experiment_with, run_sweep, simulate_replication, AlphaRow, Execution,
    ExperimentResult, MomentRow, Replication, Statistic,
};
pub use stats::{estimate_moment, mean_se, MomentEstimate};
pub use verify::{verify_suite, Check, Suite, SuiteReport, VerifyOptions};
