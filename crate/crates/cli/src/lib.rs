//! Library half of the `phillips` binary: grid parsing, reports and suites.

pub mod grid;
pub mod report;
pub mod suites;
