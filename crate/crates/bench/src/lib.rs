//! Benchmark harness for the streaming quantile estimators.
//!
//! A run feeds one series to every selected estimator and to an exact oracle,
//! queries them all at the same steps, and scores each estimator by its mean
//! relative and L-infinity error against the oracle.

pub mod config;
pub mod error;
pub mod experiment;
pub mod ingest;
pub mod output;

pub use config::{ConfigFile, EstimatorKind, ExperimentConfig, Mode, Source};
pub use error::{BenchError, Result};
pub use experiment::{load_source, run_experiment, Column, Outcome, RunTrace, SummaryRow};
pub use ingest::{ingest_column, ingest_file};
pub use output::emit_outputs;
