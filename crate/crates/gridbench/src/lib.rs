//! Benchmark harness around the grid-computation cache simulator.
//!
//! The library side exposes everything the binary does — experiment
//! configs, sweep execution, CSV serialization, slope fitting, and oracle
//! verification — so integration tests and downstream tooling can run
//! experiments in-process.

pub mod config;
pub mod fitting;
pub mod runner;

pub use config::{ExperimentConfig, Policy};
pub use fitting::{fit_csv, least_squares_slope, FitLine, FIT_METRICS};
pub use runner::{csv_string, execute, verify, write_csv, CliError, SweepRow, CSV_HEADER};
