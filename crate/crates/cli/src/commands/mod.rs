//! Subcommands. Each one computes its cells in parallel, collects them in
//! spec order, then writes its reports from a single thread.

use std::path::{Path, PathBuf};

use clap::ValueEnum;
use rayon::prelude::*;

use crate::spec::ExperimentSpec;
use crate::{CliError, EXIT_ASSERTION, EXIT_OK};

pub mod homotopy;
pub mod inequality;
pub mod report;
pub mod spectrum;
pub mod validate;

/// Default output directory when neither `--out` nor the spec names one.
pub const DEFAULT_OUT_DIR: &str = "revgap-out";

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Command {
    Validate,
    Spectrum,
    Inequality,
    Homotopy,
    Report,
}

/// A loaded spec with its output directory and worker pool.
pub struct Run {
    pub spec: ExperimentSpec,
    pub out: PathBuf,
    pool: rayon::ThreadPool,
}

impl Run {
    /// `jobs = 0` lets rayon choose the number of workers.
    pub fn new(spec: ExperimentSpec, out: Option<PathBuf>, jobs: usize) -> Result<Self, CliError> {
        spec.check()?;
        let out = out
            .or_else(|| spec.outputs.dir.clone())
            .unwrap_or_else(|| PathBuf::from(DEFAULT_OUT_DIR));
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build()
            .map_err(|e| CliError::Pool(e.to_string()))?;
        Ok(Self { spec, out, pool })
    }

    pub fn out_dir(&self) -> &Path {
        &self.out
    }

    /// Maps `f` over `cells` on the pool, keeping input order.
    pub(crate) fn map<T, R, F>(&self, cells: Vec<T>, f: F) -> Vec<R>
    where
        T: Send,
        R: Send,
        F: Fn(T) -> R + Sync + Send,
    {
        self.pool.install(|| cells.into_par_iter().map(f).collect())
    }

    pub fn execute(&self, command: Command) -> Result<Outcome, CliError> {
        match command {
            Command::Validate => validate::run(self),
            Command::Spectrum => spectrum::run(self),
            Command::Inequality => inequality::run(self),
            Command::Homotopy => homotopy::run(self),
            Command::Report => report::run(self),
        }
    }
}

/// Assertion failures and written files of one command.
#[derive(Debug, Default)]
pub struct Outcome {
    pub failures: Vec<String>,
    pub warnings: Vec<String>,
    pub files: Vec<PathBuf>,
}

impl Outcome {
    pub fn fail(&mut self, msg: String) {
        log::debug!("{msg}");
        self.failures.push(msg);
    }

    pub fn warn(&mut self, msg: String) {
        log::debug!("{msg}");
        self.warnings.push(msg);
    }

    pub fn merge(&mut self, other: Outcome) {
        self.failures.extend(other.failures);
        self.warnings.extend(other.warnings);
        self.files.extend(other.files);
    }

    pub fn exit_code(&self) -> i32 {
        if self.failures.is_empty() {
            EXIT_OK
        } else {
            EXIT_ASSERTION
        }
    }
}
