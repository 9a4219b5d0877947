//! Experiment orchestration for the `alstop` command-line tool: dataset
//! preparation, cross-validated runs, parameter sweeps, reports and exact
//! replays from a manifest.

pub mod data;
pub mod run;
pub mod spec;

pub use data::{prepare, Dataset, PrepareRequest, PrepareSummary};
pub use run::{cmd_replay, cmd_report, cmd_run, cmd_sweep, Manifest, ReplayReport, RunOutput, SweepTable};
pub use spec::{ExperimentSpec, Format, SweepAxis, SweepSpec};
