//! Command-line laboratory for classical probability: the compiled-in
//! reproduction suite, report records, CSV tables and the argument parser.

pub mod parallel;
pub mod registry;
pub mod render;
pub mod report;
pub mod scenario;
pub mod scenario_file;
pub mod tables;
pub mod cli;
