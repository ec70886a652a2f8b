//! Experiment orchestration: multi-seed runs, reports, decision grids,
//! checkpoints and the command line.

pub mod aggregate;
pub mod bench;
pub mod checkpoint;
pub mod cli;
pub mod experiment;
pub mod grid;
pub mod report;
pub mod verify;

pub use aggregate::{aggregate, compare, Comparison, SeedOutcome, SummaryRow};
pub use checkpoint::{load_model, save_model};
pub use cli::cli_main;
pub use experiment::{run_experiment, run_experiment_with, DatasetSpec, ExperimentReport, ExperimentSpec, SeedRun};
pub use grid::{decision_grid, write_grid_csv, GridPoint};
pub use report::{read_history_csv, read_summary_csv, write_history_csv, write_summary_csv};
pub use verify::{run_verify, VerifyReport};
