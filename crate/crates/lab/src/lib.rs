//! Experiment harnesses, statistics and reporting on top of `lpp-core`.
//!
//! Each experiment takes a validated config, draws replicates on
//! per-replicate RNG streams (`stream_id = cell << 32 | rep`), reduces them
//! sequentially and returns an [`ExperimentReport`] whose gates encode the
//! expected qualitative behaviour. Reports do not depend on the worker count.

pub mod config;
pub mod error;
pub mod experiments;
pub mod fixtures;
pub mod oracles;
pub mod parallel;
pub mod report;
pub mod selftest;
pub mod stats;

pub use config::Settings;
pub use error::{LabError, LabResult};
pub use experiments::Experiment;
pub use report::{ExperimentReport, Outcome};
pub use selftest::{run_selftest, SelftestOptions, SelftestReport};
