//! Experiment harness around `smi-core`: scenario configs, the sampling
//! and bound-evaluation pipeline, rank-correlation tables, and CSV/SVG
//! reporting. The `smi-harness` binary exposes all of it as subcommands
//! (`generate`, `run`, `sweep`, `plot`).

pub mod config;
pub mod csv_out;
pub mod error;
pub mod experiment;
pub mod plot;

pub use config::{default_functions, preset_experiment, ExperimentConfig, KernelKind, KernelSpec};
pub use csv_out::{correlations_csv, emit_correlations_csv, emit_csv, samples_csv};
pub use error::{HarnessError, Result};
pub use experiment::{
    run_eta_sweep, run_experiment, CorrelationRow, CorrelationTable, ExperimentOutput,
    FunctionRun, MetricKind,
};
pub use plot::emit_plots;
