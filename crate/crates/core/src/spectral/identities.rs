//! Identities and bounds that relate the forms of `L_m` for different `m`.
//!
//! Every integral here is evaluated by a Gauss-Jacobi rule whose exponent
//! matches the singular factor `(1 - t^2)^a` of its integrand, so only
//! smooth factors are sampled.

use serde::{Deserialize, Serialize};

use super::system::potential;
use crate::basis::{BasisContext, Parity};
use crate::error::{Error, Result};
use crate::profile::{DimensionedProfile, Jet};
use crate::quadrature::{self, gauss_jacobi};

/// Change in a result under node doubling above which it is flagged as
/// under-resolved.
pub const REFINEMENT_TOLERANCE: f64 = 1e-9;

/// Both sides of the identity that moves `f` in `E_m` to
/// `g = (1 - t^2)^(m/2) f` in `E_0`:
///
/// `<L_m f, f>_m + <f, f>_m/(n-1) = <L_0 g, g>_0 + <g, g>_0/(n-1) - C`,
/// `C = m(m+n-3)/(n(n-1)) int A2 A1^(n-3) (1-t^2)^(m+(n-5)/2) f^2`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OrthogonalSpaceIdentity {
    pub n: usize,
    pub m: usize,
    pub lhs: f64,
    pub rhs: f64,
    pub correction: f64,
    /// Largest magnitude among the terms of both sides.
    pub scale: f64,
    /// Whether doubling the quadrature changed either side by more than
    /// [`REFINEMENT_TOLERANCE`].
    pub under_resolved: bool,
}

impl OrthogonalSpaceIdentity {
    pub fn discrepancy(&self) -> f64 {
        (self.lhs - self.rhs).abs()
    }
}

/// Samples of the profile quantities used by the integrands.
struct Sample {
    t: f64,
    w: f64,
    jet: Jet,
    a1: f64,
    a2: f64,
    f: f64,
    df: f64,
}

struct Expansion<'a> {
    ctx: Option<BasisContext>,
    coeffs: &'a [f64],
}

impl<'a> Expansion<'a> {
    fn new(n: usize, m: usize, coeffs: &'a [f64]) -> Result<Self> {
        let ctx = if coeffs.is_empty() {
            None
        } else {
            Some(BasisContext::for_harmonic(n, m, coeffs.len(), Parity::All)?)
        };
        Ok(Self { ctx, coeffs })
    }

    fn len(&self) -> usize {
        self.coeffs.len()
    }

    fn jet(&self, t: f64) -> (f64, f64) {
        let Some(ctx) = &self.ctx else {
            return (0.0, 0.0);
        };
        let mut v = vec![0.0; ctx.len()];
        let mut d = vec![0.0; ctx.len()];
        ctx.jets_into(t, &mut v, &mut d);
        let f = v.iter().zip(self.coeffs).map(|(p, c)| p * c).sum();
        let df = d.iter().zip(self.coeffs).map(|(p, c)| p * c).sum();
        (f, df)
    }
}

fn sample(
    dprofile: &DimensionedProfile,
    f: &Expansion,
    order: usize,
    alpha: f64,
) -> Result<Vec<Sample>> {
    let rule = gauss_jacobi(order, alpha)?;
    Ok(rule
        .iter()
        .map(|(t, w)| {
            let jet = dprofile.profile.jet(t);
            let (fv, df) = f.jet(t);
            Sample {
                t,
                w,
                a1: jet.a1(t),
                a2: jet.a2(t),
                jet,
                f: fv,
                df,
            }
        })
        .collect())
}

struct IdentityTerms {
    lhs: f64,
    rhs: f64,
    correction: f64,
    scale: f64,
}

fn identity_terms(
    dprofile: &DimensionedProfile,
    m: usize,
    f: &Expansion,
    order: usize,
) -> Result<IdentityTerms> {
    let n = dprofile.n;
    let nf = n as f64;
    let mf = m as f64;
    let pw = |x: f64, k: i32| x.powi(k);
    let c_form = 1.0 / (nf * (nf - 1.0));

    // Left side with the weight (1 - t^2)^(m + (n-3)/2).
    let (mut stiff_m, mut pot_m, mut mass_m) = (0.0, 0.0, 0.0);
    for s in sample(dprofile, f, order, quadrature::weight_exponent(n, m))? {
        let a1n3 = pw(s.a1, n as i32 - 3);
        stiff_m -= s.w * a1n3 * s.a1 * (1.0 - s.t * s.t) * s.df * s.df;
        pot_m += s.w * a1n3 * potential(n, m, s.a1, s.a2, s.jet.d2) * s.f * s.f;
        mass_m += s.w * s.a2 * a1n3 * s.a1 / (nf * s.jet.value) * s.f * s.f;
    }
    let lhs = c_form * (stiff_m + pot_m) + mass_m / (nf - 1.0);

    // Right side with the weight (1 - t^2)^(m + (n-5)/2).
    let (mut t1, mut t2, mut mass0, mut corr) = (0.0, 0.0, 0.0, 0.0);
    for s in sample(dprofile, f, order, mf + (nf - 5.0) / 2.0)? {
        let omt = 1.0 - s.t * s.t;
        let a1n3 = pw(s.a1, n as i32 - 3);
        let dg = omt * s.df - mf * s.t * s.f;
        t1 += s.w * a1n3 * s.a1 * dg * dg;
        let k0 = (nf - 2.0) * s.a2 + s.a1;
        t2 += s.w * a1n3 * k0 * omt * s.f * s.f;
        mass0 += s.w * s.a2 * a1n3 * s.a1 / (nf * s.jet.value) * omt * s.f * s.f;
        corr += s.w * s.a2 * a1n3 * s.f * s.f;
    }
    let correction = mf * (mf + nf - 3.0) * c_form * corr;
    let rhs = c_form * (-t1 + t2) + mass0 / (nf - 1.0) - correction;
    let scale = [
        c_form * stiff_m,
        c_form * pot_m,
        mass_m,
        c_form * t1,
        c_form * t2,
        mass0,
        correction,
    ]
    .iter()
    .fold(0.0f64, |acc, v| acc.max(v.abs()));
    Ok(IdentityTerms {
        lhs,
        rhs,
        correction,
        scale,
    })
}

/// Evaluates both sides of the `E_m -> E_0` identity for `f` given by its
/// coefficients in the `(n, m)` Gegenbauer basis. Requires `m >= 1`.
pub fn orthogonal_space_identity(
    dprofile: &DimensionedProfile,
    m: usize,
    coeffs: &[f64],
) -> Result<OrthogonalSpaceIdentity> {
    if m == 0 {
        return Err(Error::Parameter(
            "orthogonal-space identity needs m >= 1".into(),
        ));
    }
    dprofile.ensure_valid()?;
    let f = Expansion::new(dprofile.n, m, coeffs)?;
    let order = quadrature::oversampled_nodes(f.len().max(1));
    let coarse = identity_terms(dprofile, m, &f, order)?;
    let fine = identity_terms(dprofile, m, &f, 2 * order)?;
    let change = (coarse.lhs - fine.lhs)
        .abs()
        .max((coarse.rhs - fine.rhs).abs());
    Ok(OrthogonalSpaceIdentity {
        n: dprofile.n,
        m,
        lhs: fine.lhs,
        rhs: fine.rhs,
        correction: fine.correction,
        scale: fine.scale,
        under_resolved: change > REFINEMENT_TOLERANCE * fine.scale.max(1.0),
    })
}

/// Cauchy-Schwarz product bound `J^2 <= factor * I1 * I2`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CsBoundReport {
    pub n: usize,
    pub m: usize,
    /// The integral `J` whose square is bounded.
    pub lhs: f64,
    pub factor: f64,
    pub i1: f64,
    pub i2: f64,
    /// `factor * I1 * I2`.
    pub bound: f64,
    /// `bound - J^2`.
    pub slack: f64,
    pub holds: bool,
}

/// Checks the Cauchy-Schwarz bounds used for `E_1` and `E_m`, `m >= 2`.
///
/// - `m = 1` (needs `n >= 3`):
///   `(int A2 A1^(n-2)/eta (1-t^2)^((n-2)/2) t f)^2
///    <= (n-2) int A2 A1^(n-3) (1-t^2)^((n-3)/2) f^2
///           * int A2 A1^(n-2)/eta (1-t^2)^((n-3)/2) t^2`.
/// - `m >= 2`:
///   `(int A2 A1^(n-2) (1-t^2)^((m+n-3)/2) f)^2
///    <= m(m+n-3)/n int A2 A1^(n-3) (1-t^2)^(m+(n-5)/2) f^2
///           * int A2 A1^(n-2) eta (1-t^2)^((n-3)/2)`.
pub fn cs_bound_check(
    dprofile: &DimensionedProfile,
    m: usize,
    coeffs: &[f64],
) -> Result<CsBoundReport> {
    dprofile
        .profile
        .require_symmetric("Cauchy-Schwarz bound check")?;
    dprofile.ensure_valid()?;
    let n = dprofile.n;
    let nf = n as f64;
    let mf = m as f64;
    if m == 0 {
        return Err(Error::Parameter(
            "Cauchy-Schwarz bound check needs m >= 1".into(),
        ));
    }
    if m == 1 && n == 2 {
        return Err(Error::Unsupported(
            "the E_1 bound degenerates for n = 2 (factor n - 2 = 0)".into(),
        ));
    }
    let f = Expansion::new(n, m, coeffs)?;
    let order = quadrature::oversampled_nodes(f.len().max(1));
    let a1n2 = |s: &Sample| s.a1.powi(n as i32 - 2);
    let integrate = |alpha: f64, g: &dyn Fn(&Sample) -> f64| -> Result<f64> {
        Ok(sample(dprofile, &f, order, alpha)?
            .iter()
            .map(|s| s.w * g(s))
            .sum())
    };
    let (lhs, factor, i1, i2) = if m == 1 {
        let j = integrate((nf - 2.0) / 2.0, &|s| {
            s.a2 * a1n2(s) / s.jet.value * s.t * s.f
        })?;
        let i1 = integrate((nf - 3.0) / 2.0, &|s| s.a2 * a1n2(s) / s.a1 * s.f * s.f)?;
        let i2 = integrate((nf - 3.0) / 2.0, &|s| {
            s.a2 * a1n2(s) / s.jet.value * s.t * s.t
        })?;
        (j, nf - 2.0, i1, i2)
    } else {
        let j = integrate((mf + nf - 3.0) / 2.0, &|s| s.a2 * a1n2(s) * s.f)?;
        let i1 = integrate(mf + (nf - 5.0) / 2.0, &|s| {
            s.a2 * a1n2(s) / s.a1 * s.f * s.f
        })?;
        let i2 = integrate((nf - 3.0) / 2.0, &|s| s.a2 * a1n2(s) * s.jet.value)?;
        (j, mf * (mf + nf - 3.0) / nf, i1, i2)
    };
    let bound = factor * i1 * i2;
    Ok(CsBoundReport {
        n,
        m,
        lhs,
        factor,
        i1,
        i2,
        bound,
        slack: bound - lhs * lhs,
        holds: lhs * lhs <= bound * (1.0 + 1e-9),
    })
}
