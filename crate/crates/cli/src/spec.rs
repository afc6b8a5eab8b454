//! Experiment descriptions read from JSON.

use std::collections::HashSet;
use std::path::{Path, PathBuf};

use revgap_core::spectral::{DEFAULT_BASIS_SIZE, DEFAULT_GAP_TOLERANCE, MIN_BASIS_SIZE};
use revgap_core::{DimensionedProfile, Profile};
use serde::{Deserialize, Serialize};

use crate::CliError;

/// A named profile.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProfileEntry {
    pub id: String,
    #[serde(flatten)]
    pub profile: Profile,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Outputs {
    /// Output directory, relative to the working directory.
    #[serde(default)]
    pub dir: Option<PathBuf>,
    #[serde(default = "default_formats")]
    pub formats: Vec<Format>,
}

impl Default for Outputs {
    fn default() -> Self {
        Self {
            dir: None,
            formats: default_formats(),
        }
    }
}

fn default_formats() -> Vec<Format> {
    vec![Format::Json, Format::Csv]
}

/// Default `s` grid: 21 equispaced points on `[0, 1]`.
pub fn default_s_grid() -> Vec<f64> {
    (0..=20).map(|i| i as f64 / 20.0).collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentSpec {
    pub profiles: Vec<ProfileEntry>,
    #[serde(default = "default_n_list")]
    pub n_list: Vec<usize>,
    #[serde(default = "default_m_max")]
    pub m_max: usize,
    #[serde(default = "default_basis_size", alias = "N")]
    pub basis_size: usize,
    #[serde(default = "default_p_list")]
    pub p_list: Vec<f64>,
    #[serde(default = "default_seeds")]
    pub seeds: Vec<u64>,
    #[serde(default = "default_s_grid")]
    pub s_grid: Vec<f64>,
    #[serde(default = "default_tolerance")]
    pub tolerance: f64,
    #[serde(default)]
    pub outputs: Outputs,
}

fn default_n_list() -> Vec<usize> {
    vec![3]
}

fn default_m_max() -> usize {
    4
}

fn default_basis_size() -> usize {
    DEFAULT_BASIS_SIZE
}

fn default_p_list() -> Vec<f64> {
    vec![0.0]
}

fn default_seeds() -> Vec<u64> {
    vec![0]
}

fn default_tolerance() -> f64 {
    DEFAULT_GAP_TOLERANCE
}

/// Command-line values that replace fields of the spec.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub n: Option<usize>,
    pub m_max: Option<usize>,
    pub basis_size: Option<usize>,
    pub tol: Option<f64>,
    pub seed: Option<u64>,
}

impl ExperimentSpec {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Input(format!("malformed spec: {e}")))
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::from_json(&text)
    }

    pub fn apply(&mut self, o: &Overrides) {
        if let Some(n) = o.n {
            self.n_list = vec![n];
        }
        if let Some(m) = o.m_max {
            self.m_max = m;
        }
        if let Some(size) = o.basis_size {
            self.basis_size = size;
        }
        if let Some(tol) = o.tol {
            self.tolerance = tol;
        }
        if let Some(seed) = o.seed {
            self.seeds = vec![seed];
        }
    }

    /// Checks the invariants that do not depend on the profiles' shapes.
    pub fn check(&self) -> Result<(), CliError> {
        let bad = |msg: String| Err(CliError::Input(msg));
        if self.profiles.is_empty() {
            return bad("spec lists no profiles".into());
        }
        let mut ids = HashSet::new();
        for p in &self.profiles {
            if p.id.is_empty() || !ids.insert(p.id.as_str()) {
                return bad(format!(
                    "profile ids must be unique and non-empty (got {:?})",
                    p.id
                ));
            }
        }
        if self.n_list.is_empty() || self.n_list.iter().any(|&n| n < 2) {
            return bad(format!(
                "n_list entries must be >= 2, got {:?}",
                self.n_list
            ));
        }
        if self.basis_size < MIN_BASIS_SIZE {
            return bad(format!(
                "basis size must be >= {MIN_BASIS_SIZE}, got {}",
                self.basis_size
            ));
        }
        let n_min = *self.n_list.iter().min().unwrap() as f64;
        if let Some(p) = self.p_list.iter().find(|p| !(**p < n_min)) {
            return bad(format!("exponent p = {p} must be < n = {n_min}"));
        }
        if let Some(s) = self.s_grid.iter().find(|s| !(0.0..=1.0).contains(*s)) {
            return bad(format!("s grid value {s} is outside [0, 1]"));
        }
        if !(self.tolerance > 0.0 && self.tolerance.is_finite()) {
            return bad(format!(
                "tolerance must be positive, got {}",
                self.tolerance
            ));
        }
        Ok(())
    }

    pub fn wants(&self, format: Format) -> bool {
        self.outputs.formats.contains(&format)
    }

    /// `(profile, n)` pairs in spec order.
    pub fn bodies(&self) -> Vec<(&ProfileEntry, usize)> {
        self.profiles
            .iter()
            .flat_map(|p| self.n_list.iter().map(move |&n| (p, n)))
            .collect()
    }
}

impl ProfileEntry {
    pub fn in_dimension(&self, n: usize) -> DimensionedProfile {
        DimensionedProfile {
            profile: self.profile.clone(),
            n,
        }
    }
}
