//! Experiment runner for the gsmm solvers: single runs with CSV trajectories,
//! learning-rate grid search, schedule printing and the probe suite.

pub mod cli;
pub mod config;
pub mod csv;
pub mod error;
pub mod experiment;
pub mod grid;
pub mod suite;

pub use config::{DatasetSpec, ExperimentConfig, HyperSource, SyntheticSpec};
pub use error::{BenchError, BenchResult};
pub use experiment::{run_experiment, ExperimentSummary};
pub use grid::{grid_search, GridOutcome, GridRow, GridSpec, Selection};
