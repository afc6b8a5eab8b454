//! Volumes and the Kubota-type integral identity.

use serde::{Deserialize, Serialize};
use statrs::function::gamma::gamma;

use crate::error::Result;
use crate::profile::DimensionedProfile;
use crate::quadrature::gauss_jacobi;

/// Nodes of the Gauss-Jacobi rules used for profile integrals.
pub const PROFILE_NODES: usize = 128;

/// Surface area of the unit sphere `S^k` in `R^(k+1)`:
/// `2 pi^((k+1)/2) / Gamma((k+1)/2)`.
pub fn sphere_area(k: usize) -> f64 {
    let h = (k as f64 + 1.0) / 2.0;
    2.0 * std::f64::consts::PI.powf(h) / gamma(h)
}

/// `int A2 A1^(n-2) eta (1-t^2)^((n-3)/2) dt`.
pub(crate) fn volume_integral(dprofile: &DimensionedProfile) -> Result<f64> {
    let n = dprofile.n;
    let rule = gauss_jacobi(PROFILE_NODES, (n as f64 - 3.0) / 2.0)?;
    Ok(rule.integrate(|t| {
        let jet = dprofile.profile.jet(t);
        jet.a2(t) * jet.a1(t).powi(n as i32 - 2) * jet.value
    }))
}

/// `vol(K) = sigma_{n-2}/n int A2 A1^(n-2) eta (1-t^2)^((n-3)/2) dt`.
pub fn volume(dprofile: &DimensionedProfile) -> Result<f64> {
    dprofile.ensure_valid()?;
    Ok(sphere_area(dprofile.n - 2) / dprofile.nf() * volume_integral(dprofile)?)
}

/// Both sides of
/// `int A2 A1^(n-1) (1-t^2)^((n-1)/2) = (n-1)/n int A2 A1^(n-2) eta (1-t^2)^((n-3)/2)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct KubotaReport {
    pub lhs: f64,
    pub rhs: f64,
    pub relative_error: f64,
}

pub fn kubota_check(dprofile: &DimensionedProfile) -> Result<KubotaReport> {
    dprofile.ensure_valid()?;
    let n = dprofile.n;
    let nf = n as f64;
    let rule = gauss_jacobi(PROFILE_NODES, (nf - 1.0) / 2.0)?;
    let lhs = rule.integrate(|t| {
        let jet = dprofile.profile.jet(t);
        jet.a2(t) * jet.a1(t).powi(n as i32 - 1)
    });
    let rhs = (nf - 1.0) / nf * volume_integral(dprofile)?;
    Ok(KubotaReport {
        lhs,
        rhs,
        relative_error: (lhs - rhs).abs() / rhs.abs(),
    })
}
