//! File formats, experiment configs and runners behind the `betanorm`
//! command line tool.

pub mod config;
pub mod formats;
pub mod report;
pub mod run;
