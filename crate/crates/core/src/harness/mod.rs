//! Monte Carlo experiment driver: seeded trials, sweeps, CSV output and the
//! self-check report.

mod config;
mod experiment;
mod output;
mod validate;

pub use config::{ExperimentConfig, Sweep};
pub use experiment::{
    aggregate, duty_cycle_grid, run_point, run_trial, sweep_dd, sweep_dt, trial_rng, MetricRecord,
    OpsMean, TrialOutcome,
};
pub use output::{emit_csv, read_csv, write_csv, COLUMNS, STDERR_COLUMNS};
pub use validate::{
    balance_residual, bfs_rescan_gap, e1_error, ergodic_pairs_error, one_center_ratio,
    outage_sigma, power_factor_identity_error, validate, validate_with, Check, ValidationReport,
    ValidationSizes, E1_POINTS, ONE_CENTER_FACTOR,
};
