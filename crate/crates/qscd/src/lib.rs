//! File formats, experiment runner and command-line interface on top of
//! [`qscd_core`].

pub mod artifacts;
pub mod cli;
pub mod dataset;
pub mod error;
pub mod netfile;
pub mod parallel;
pub mod run;
pub mod spec;

pub use error::{Result, RunError};
pub use qscd_core;
