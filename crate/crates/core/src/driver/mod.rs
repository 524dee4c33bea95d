//! Configuration, orchestration, persistence and invariant suites.

pub mod archive;
pub mod checks;
pub mod config;
pub mod report;
pub mod run;

pub use archive::{read_norms, read_snapshot, ArchiveWriter, RunArchive, Snapshot};
pub use checks::{run_check, CheckItem, CheckReport, SUITES};
pub use config::{RunConfig, SolverMode};
pub use run::{
    initial_conditions, remainder_field, run, NormRecord, RunOptions, RunOutput, Simulation, StepContext, StepObserver,
};
