//! Parity-split homotopy scans `eta_s = (1 - s) + s eta`.
//!
//! For symmetric profiles `L_m` decouples into even and odd parts. Along the
//! homotopy from the ball (`s = 0`) to the body (`s = 1`) the scan tracks the
//! top eigenvalue of each part on the relevant constrained subspace:
//!
//! - `m = 0`: even `⟂ eta_s` against odd `⟂ t`;
//! - `m = 1`: odd against even `⟂ 1`;
//! - `m >= 2`: even against odd.
//!
//! and the difference `F(s)` of the two suprema.

use serde::{Deserialize, Serialize};

use super::solve::solve;
use super::system::{assemble, GalerkinSystem};
use crate::basis::Parity;
use crate::error::{Error, Result};
use crate::profile::DimensionedProfile;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HomotopyPoint {
    pub s: f64,
    /// Top eigenvalue on the first subspace.
    pub sup_a: f64,
    /// Top eigenvalue on the second subspace.
    pub sup_b: f64,
    /// `sup_a - sup_b`.
    pub f: f64,
    /// Both suprema exceed `-1/(n-1) + tol`.
    pub both_above_bound: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HomotopyScan {
    pub check: String,
    pub n: usize,
    pub m: usize,
    pub basis_size: usize,
    pub subspace_a: String,
    pub subspace_b: String,
    pub bound: f64,
    pub tolerance: f64,
    pub points: Vec<HomotopyPoint>,
}

impl HomotopyScan {
    /// Whether no grid point has both suprema above the bound.
    pub fn passed(&self) -> bool {
        self.points
            .iter()
            .all(|p| !p.both_above_bound && p.f.is_finite())
    }
}

/// Labels of the two subspaces compared for `m`.
pub fn subspace_labels(m: usize) -> (&'static str, &'static str) {
    match m {
        0 => ("even ⟂ eta_s", "odd ⟂ t"),
        1 => ("odd", "even ⟂ 1"),
        _ => ("even", "odd"),
    }
}

/// Closed form of `F(0)`: the ball gap between the two suprema.
pub fn ball_f0(n: usize, m: usize) -> f64 {
    let n = n as f64;
    let m = m as f64;
    if m < 2.0 {
        (n + 3.0) / (n - 1.0)
    } else {
        (2.0 * m + n - 1.0) / (n - 1.0)
    }
}

fn top(system: &GalerkinSystem) -> Result<f64> {
    solve(system)?
        .top()
        .ok_or_else(|| Error::Parameter("empty constrained subspace".into()))
}

/// Evaluates the two suprema at a single `s`.
pub fn homotopy_point(
    dprofile: &DimensionedProfile,
    m: usize,
    s: f64,
    size: usize,
    tol: f64,
) -> Result<HomotopyPoint> {
    let dps = DimensionedProfile::new(dprofile.profile.homotopy(s)?, dprofile.n)?;
    let full = assemble(&dps, m, size)?;
    let mut even = full.restrict(Parity::Even);
    let mut odd = full.restrict(Parity::Odd);
    let (sup_a, sup_b) = match m {
        0 => {
            even.constrain_orthogonal_to(|t| dps.profile.jet(t).value)?;
            odd.constrain_orthogonal_to(|t| t)?;
            (top(&even)?, top(&odd)?)
        }
        1 => {
            even.constrain_orthogonal_to(|_| 1.0)?;
            (top(&odd)?, top(&even)?)
        }
        _ => (top(&even)?, top(&odd)?),
    };
    let bound = -1.0 / (dprofile.nf() - 1.0);
    Ok(HomotopyPoint {
        s,
        sup_a,
        sup_b,
        f: sup_a - sup_b,
        both_above_bound: sup_a > bound + tol && sup_b > bound + tol,
    })
}

/// Scans `s_grid` (each `s` in `[0, 1]`) for a symmetric base profile.
pub fn homotopy_scan(
    dprofile: &DimensionedProfile,
    m: usize,
    s_grid: &[f64],
    size: usize,
    tol: f64,
) -> Result<HomotopyScan> {
    dprofile.profile.require_symmetric("homotopy scan")?;
    let points = s_grid
        .iter()
        .map(|&s| homotopy_point(dprofile, m, s, size, tol))
        .collect::<Result<Vec<_>>>()?;
    let (a, b) = subspace_labels(m);
    Ok(HomotopyScan {
        check: "homotopy_parity_split".into(),
        n: dprofile.n,
        m,
        basis_size: size,
        subspace_a: a.into(),
        subspace_b: b.into(),
        bound: -1.0 / (dprofile.nf() - 1.0),
        tolerance: tol,
        points,
    })
}
