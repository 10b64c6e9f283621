//! Benchmark harness: experiment configs, parallel trial runner, CSV and
//! JSON-lines emission, and scaling-exponent fits.

pub mod cli;
mod config;
mod emit;
mod experiments;
mod fit;
mod record;
mod selftest;

pub use config::{parse_sizes, ExperimentConfig};
pub use emit::{emit, read_csv, Format, RecordWriter};
pub use experiments::{
    planted_collision, run_experiment, summarize, Experiment, SizeSummary, Summary,
    TrialOutcome, MAX_STATEVECTOR, SAT_CLAUSE_RATIO,
};
pub use fit::{fit_exponent, fit_log_linear, ScalingFit};
pub use record::{trial_seed, ExperimentRecord, CSV_HEADER};
pub use selftest::{run_selftest, Check, CHECKS};
