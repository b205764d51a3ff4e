//! Experiment runner around the `pcops` operator calculus: JSON-configured
//! method construction, iteration, verification, and trace/report output.

pub mod config;
pub mod emit;
pub mod problems;
pub mod runner;
