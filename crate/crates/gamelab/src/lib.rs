//! File formats, reports, parallel execution and the command-line front
//! end for `gamelab-core`.

pub mod cli;
pub mod instance;
pub mod parallel;
pub mod report;
