//! Command-line front end for the `eudoxus` crate: cone description files,
//! reports with machine-readable `CHECK` lines, and the acceptance suite.

pub mod commands;
pub mod demos;
pub mod report;
pub mod spec_file;
pub mod suite;

pub use commands::run_command;
pub use report::{Check, Report, Status};
pub use spec_file::{emit_cone_spec, load_cone, parse_cone_spec, SpecError};
