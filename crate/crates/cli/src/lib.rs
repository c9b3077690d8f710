//! Command-line driver for the exact verification suites.

pub mod config;
pub mod report;
pub mod runner;
pub mod sweep;
