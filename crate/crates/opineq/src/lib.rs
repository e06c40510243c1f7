//! Std front end for `opineq-core`: JSON encodings, deterministic reports,
//! rayon-parallel suites and searches, and the `opineq` command line.

pub mod cli;
pub mod json;
pub mod parallel;
pub mod report;

use std::process::ExitCode;

pub use opineq_core as core;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Core(#[from] opineq_core::Error),
    #[error("invalid JSON input: {0}")]
    Json(String),
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Process exit status.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Ok = 0,
    /// A theorem family was violated with its hypotheses in force.
    Violation = 1,
    Usage = 2,
    NonConvergence = 3,
}

impl Status {
    pub fn code(self) -> u8 {
        self as u8
    }
}

impl From<Status> for ExitCode {
    fn from(s: Status) -> Self {
        ExitCode::from(s.code())
    }
}

impl Error {
    pub fn status(&self) -> Status {
        match self {
            Error::Core(opineq_core::Error::NoConvergence { .. }) => Status::NonConvergence,
            _ => Status::Usage,
        }
    }
}
