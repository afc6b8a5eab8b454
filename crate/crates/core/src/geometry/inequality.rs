//! Local `L^p` Brunn-Minkowski deficits and their stability refinement.

use serde::{Deserialize, Serialize};

use super::body::{component_integral, mixed_quantities, BodyContext, TestFunction};
use super::volume::PROFILE_NODES;
use crate::error::{Error, Result};
use crate::profile::DimensionedProfile;
use crate::quadrature::gauss_jacobi;

/// Relative tolerance applied to the largest term of an inequality.
pub const DEFICIT_TOLERANCE: f64 = 1e-8;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StabilityTerm {
    pub m: usize,
    pub c_m: f64,
    /// `int (pi_m f)^2 / h_K dS_K`.
    pub integral: f64,
    /// `c_m / n * integral`.
    pub term: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InequalityReport {
    pub check: String,
    pub n: usize,
    pub p: f64,
    /// `V(f, K[n-1])`.
    pub term_v_lk: f64,
    /// `V(f, f, K[n-2])`.
    pub term_v_llk: f64,
    /// `int f^2 / h_K dS_K`.
    pub term_integral: f64,
    pub vol_k: f64,
    /// `(n-1)/(n-p) V(f,f,K[n-2]) + (1-p)/(n(n-p)) int f^2/h_K dS_K
    ///  - V(f,K[n-1])^2 / vol(K)`; nonpositive when the inequality holds.
    pub deficit: f64,
    /// Stability terms for `m >= 1`, when the constants are defined.
    pub per_m_stability: Vec<StabilityTerm>,
    /// Left side of the strengthened inequality, when evaluated.
    pub strengthened: Option<f64>,
    /// Distance below the tolerance of the asserted quantity.
    pub margin: f64,
    pub tolerance: f64,
    pub passed: bool,
    /// Equality within tolerance although `f` has an `m >= 1` part.
    pub suspicious: bool,
}

fn largest(values: &[f64]) -> f64 {
    values.iter().fold(0.0f64, |acc, v| acc.max(v.abs()))
}

fn stability_terms(body: &BodyContext, f: &TestFunction) -> Result<Vec<StabilityTerm>> {
    let mut ms: Vec<usize> = f
        .components
        .iter()
        .map(|c| c.m)
        .filter(|&m| m >= 1)
        .collect();
    ms.sort_unstable();
    ms.dedup();
    let mut c1 = None;
    ms.into_iter()
        .map(|m| {
            let c_m = if m == 1 {
                *c1.get_or_insert(stability_constant(body.dprofile(), 1)?)
            } else {
                stability_constant(body.dprofile(), m)?
            };
            let integral = component_integral(body, f, m)?;
            Ok(StabilityTerm {
                m,
                c_m,
                integral,
                term: c_m / body.dprofile().nf() * integral,
            })
        })
        .collect()
}

/// Evaluates the local `L^p` Brunn-Minkowski deficit of `f`, `p < n`.
pub fn local_lp_deficit(body: &BodyContext, f: &TestFunction, p: f64) -> Result<InequalityReport> {
    let nf = body.dprofile().nf();
    if !(p < nf) {
        return Err(Error::Parameter(format!(
            "exponent p = {p} must be < n = {nf}"
        )));
    }
    let q = mixed_quantities(body, f)?;
    let vol = body.volume();
    let terms = [
        (nf - 1.0) / (nf - p) * q.v_llk,
        (1.0 - p) / (nf * (nf - p)) * q.integral,
        -q.v_lk * q.v_lk / vol,
    ];
    let deficit: f64 = terms.iter().sum();
    let tolerance = DEFICIT_TOLERANCE * largest(&terms);
    let per_m_stability = if body.dprofile().profile.is_symmetric() && body.n() >= 3 {
        stability_terms(body, f)?
    } else {
        Vec::new()
    };
    Ok(InequalityReport {
        check: "local_lp_deficit".into(),
        n: body.n(),
        p,
        term_v_lk: q.v_lk,
        term_v_llk: q.v_llk,
        term_integral: q.integral,
        vol_k: vol,
        deficit,
        per_m_stability,
        strengthened: None,
        margin: tolerance - deficit,
        tolerance,
        passed: deficit <= tolerance,
        suspicious: deficit.abs() <= tolerance && f.has_nonzonal_part(),
    })
}

/// `c_m(K)`: `m(m+n-3)/(n-1) - 1` for `m >= 2`, and for `m = 1`
/// `(n-3)/(n-1) + int t^2 L_K w / int t^2 w` with
/// `w = A2 A1^(n-2) / eta (1-t^2)^((n-3)/2)` and `L_K` the cap height.
pub fn stability_constant(dprofile: &DimensionedProfile, m: usize) -> Result<f64> {
    if m == 0 {
        return Err(Error::Parameter(
            "stability constants are defined for m >= 1".into(),
        ));
    }
    dprofile.profile.require_symmetric("stability constants")?;
    let n = dprofile.n;
    if n < 3 {
        return Err(Error::Unsupported(format!(
            "stability constants need n >= 3, got n = {n}"
        )));
    }
    let nf = n as f64;
    if m >= 2 {
        let mf = m as f64;
        return Ok(mf * (mf + nf - 3.0) / (nf - 1.0) - 1.0);
    }
    dprofile.ensure_valid()?;
    let rule = gauss_jacobi(PROFILE_NODES, (nf - 3.0) / 2.0)?;
    let (mut num, mut den) = (0.0, 0.0);
    for (t, w) in rule.iter() {
        let jet = dprofile.profile.jet(t);
        let weight = w * t * t * jet.a2(t) * jet.a1(t).powi(n as i32 - 2) / jet.value;
        num += weight * dprofile.profile.cap_height_unchecked(t);
        den += weight;
    }
    Ok((nf - 3.0) / (nf - 1.0) + num / den)
}

/// Evaluates the strengthened local logarithmic inequality
/// `V(f,f,K[n-2]) - n/(n-1) V(f,K[n-1])^2/vol(K) + 1/(n(n-1)) int f^2/h_K dS_K
///  + 1/n sum_{m>=1} c_m int (pi_m f)^2/h_K dS_K <= 0`.
pub fn strengthened_deficit(body: &BodyContext, f: &TestFunction) -> Result<InequalityReport> {
    body.dprofile()
        .profile
        .require_symmetric("strengthened deficit")?;
    let nf = body.dprofile().nf();
    let q = mixed_quantities(body, f)?;
    let vol = body.volume();
    let per_m_stability = stability_terms(body, f)?;
    let stability: f64 = per_m_stability.iter().map(|s| s.term).sum();
    let terms = [
        q.v_llk,
        -nf / (nf - 1.0) * q.v_lk * q.v_lk / vol,
        q.integral / (nf * (nf - 1.0)),
        stability,
    ];
    let value: f64 = terms.iter().sum();
    let tolerance = DEFICIT_TOLERANCE * largest(&terms);
    let deficit = (nf - 1.0) / nf * (terms[0] + terms[1] + terms[2]);
    Ok(InequalityReport {
        check: "strengthened_log_deficit".into(),
        n: body.n(),
        p: 0.0,
        term_v_lk: q.v_lk,
        term_v_llk: q.v_llk,
        term_integral: q.integral,
        vol_k: vol,
        deficit,
        per_m_stability,
        strengthened: Some(value),
        margin: tolerance - value,
        tolerance,
        passed: value <= tolerance,
        suspicious: value.abs() <= tolerance && f.has_nonzonal_part(),
    })
}

/// Comparison of the stability sum with its symmetrization lower bound.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SymmetrizationReport {
    pub c1: f64,
    pub c2: f64,
    /// `sum_{m>=1} c_m int (pi_m f)^2/h_K dS_K`.
    pub lhs: f64,
    /// `min(c1, c2) (int f^2/h_K dS_K - int (pi_0 f)^2/h_K dS_K)`.
    pub rhs: f64,
    /// `-(n-1) min(c1, c2)`: the exponent down to which the local `L^p`
    /// inequality follows.
    pub threshold_p: f64,
    pub holds: bool,
}

pub fn symmetrization_bound(body: &BodyContext, f: &TestFunction) -> Result<SymmetrizationReport> {
    let dp = body.dprofile();
    let c1 = stability_constant(dp, 1)?;
    let c2 = stability_constant(dp, 2)?;
    let lhs: f64 = stability_terms(body, f)?
        .iter()
        .map(|s| s.c_m * s.integral)
        .sum();
    let total = mixed_quantities(body, f)?.integral;
    let zonal = component_integral(body, f, 0)?;
    let c_min = c1.min(c2);
    let rhs = c_min * (total - zonal);
    let scale = lhs.abs().max(rhs.abs());
    Ok(SymmetrizationReport {
        c1,
        c2,
        lhs,
        rhs,
        threshold_p: -(dp.nf() - 1.0) * c_min,
        holds: lhs >= rhs - 1e-12 * scale,
    })
}
