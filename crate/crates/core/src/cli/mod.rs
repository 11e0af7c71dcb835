//! Configuration-driven front end shared by the `reltoa` binary and tests.

pub mod commands;
pub mod config;
pub mod manifest;

pub use commands::{cmd_classical, cmd_kernel_eval, cmd_sweep, cmd_traversal, cmd_validate, CommandOutput};
pub use config::{ScenarioConfig, SweepAxis};
pub use manifest::{write_run, CsvTable, RunManifest};
