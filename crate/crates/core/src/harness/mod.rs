//! Scenario runner: sampling, fixtures and verification suites.

pub mod sampling;
pub mod fixtures;
pub mod report;
pub mod suites;
