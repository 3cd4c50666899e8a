//! Experiments on curves: generators, the end-to-end pipeline, verification
//! suites and report writing.

pub mod config;
pub mod fixtures;
pub mod generators;
pub mod output;
pub mod pipeline;
pub mod ratio;
pub mod suites;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum LabError {
    #[error("bad input: {0}")]
    BadInput(String),
    #[error("geometry: {0}")]
    Geometry(String),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("{0} check(s) failed")]
    Violation(usize),
}

impl LabError {
    /// Process exit code: 1 for failed checks, 2 for anything the input caused.
    pub fn exit_code(&self) -> i32 {
        match self {
            LabError::Violation(_) => 1,
            _ => 2,
        }
    }
}
