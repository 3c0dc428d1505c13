//! Command-line harness, experiment records and file formats on top of
//! `zecklab-core`.

pub mod budget;
pub mod cli;
pub mod grid;
pub mod json;
pub mod record;

pub use cli::run;
pub use record::{ExperimentRecord, Status};
