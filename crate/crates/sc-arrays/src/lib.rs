//! Fixtures, sampling, verification suites and JSON reports behind the
//! `sc-arrays` command.

pub mod fixtures;
pub mod report;
pub mod sampling;
pub mod suites;
