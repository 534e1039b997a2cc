//! Support code for the `hypersack` binary: corpus files, run reports and
//! the benchmark/calibration harness.

pub mod bench;
pub mod corpus;
pub mod report;
