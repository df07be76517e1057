//! Pipeline orchestration behind the `fss` command.

pub mod config;
pub mod curves;
pub mod error;
pub mod pipeline;
pub mod verify;

pub use config::{DataSource, PipelineConfig, ReductionMode, SpecSource};
pub use curves::emit_curves;
pub use error::CliError;
pub use pipeline::{analyse, run_pipeline, run_stage, RunSummary, Stage};
pub use verify::{verify_fixtures, VerifyReport};
