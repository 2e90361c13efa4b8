//! Experiment harness for the acfista solvers.

pub mod config;
pub mod experiment;
pub mod instance;
pub mod output;

pub use config::{
    CliOverrides, ExperimentConfig, MethodName, ProblemEntry, ProblemSpec, SolverSpec,
};
pub use experiment::{build_instance, run_all, run_experiment, ExperimentOutcome, RunOutput};
pub use output::{emit_summary_table, emit_trace, fmt_sig, SummaryRow};
