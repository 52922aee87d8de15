//! Command-line front-end: instance files, computations and verification
//! suites, with human and JSON reports.

pub mod cli;
pub mod commands;
pub mod instance;
pub mod polynomial;
pub mod report;
