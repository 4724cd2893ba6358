//! File formats, report emission and command dispatch around
//! [`gravdec_core`].

pub mod commands;
pub mod error;
pub mod measured;
pub mod output;
pub mod scenario_file;

pub use commands::{run, Command, RunOptions};
pub use error::ReportError;
