//! Batch front-end for the `revgap-core` checks: reads an experiment spec,
//! runs validations, spectra, inequality sweeps and homotopy scans, and
//! writes JSON and CSV reports.
//!
//! Exit codes are a stable contract: 0 when every assertion holds, 1 when
//! an assertion fails (or a cell cannot be computed), 2 for input errors.

// Negated comparisons such as `!(x <= tol)` are deliberate: they reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::path::PathBuf;

pub mod commands;
pub mod output;
pub mod random;
pub mod spec;

pub use commands::{Command, Outcome, Run};
pub use spec::{ExperimentSpec, Overrides, ProfileEntry};

pub const EXIT_OK: i32 = 0;
pub const EXIT_ASSERTION: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("thread pool: {0}")]
    Pool(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) | CliError::Io { .. } => EXIT_INPUT,
            CliError::Pool(_) => EXIT_ASSERTION,
        }
    }
}
