//! Test functions on a body of revolution and their mixed quantities.
//!
//! A test function `f` on `S^(n-1)` is a finite sum of components
//! `h(x_1, ..., x_(n-1)) * f̄(x_n)`, with `h` a spherical harmonic of degree
//! `m` on `S^(n-2)` and `f̄` expanded in the `(n, m)` Gegenbauer basis.
//! Components are taken pairwise orthogonal (distinct harmonics), so every
//! quadratic quantity is a sum over components weighted by `⟨h, h⟩`.

use nalgebra::DVector;
use serde::{Deserialize, Serialize};

use super::volume::{sphere_area, volume};
use crate::error::{Error, Result};
use crate::profile::DimensionedProfile;
use crate::spectral::{assemble, GalerkinSystem};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Component {
    pub m: usize,
    /// `⟨h, h⟩` on `S^(n-2)`.
    pub h_norm: f64,
    /// Coefficients of `f̄` in the `(n, m)` basis.
    pub coeffs: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TestFunction {
    pub n: usize,
    pub components: Vec<Component>,
}

impl TestFunction {
    pub fn new(n: usize, components: Vec<Component>) -> Result<Self> {
        if let Some(c) = components
            .iter()
            .find(|c| !(c.h_norm > 0.0 && c.h_norm.is_finite()))
        {
            return Err(Error::Parameter(format!(
                "component h_norm must be positive, got {}",
                c.h_norm
            )));
        }
        if components.iter().filter(|c| c.m == 0).count() > 1 {
            return Err(Error::Usage(
                "the zonal space E_0 holds a single component".into(),
            ));
        }
        Ok(Self { n, components })
    }

    pub fn zero(n: usize) -> Self {
        Self {
            n,
            components: Vec::new(),
        }
    }

    /// `c f`.
    pub fn scaled(&self, c: f64) -> Self {
        let mut out = self.clone();
        for comp in &mut out.components {
            comp.coeffs.iter_mut().for_each(|x| *x *= c);
        }
        out
    }

    /// Components of degree `m`.
    pub fn components_of(&self, m: usize) -> impl Iterator<Item = &Component> {
        self.components.iter().filter(move |c| c.m == m)
    }

    /// Whether some component with `m >= 1` has nonzero coefficients.
    pub fn has_nonzonal_part(&self) -> bool {
        self.components
            .iter()
            .any(|c| c.m >= 1 && c.coeffs.iter().any(|&x| x != 0.0))
    }
}

/// A body together with its assembled Galerkin systems for `m <= m_max`.
#[derive(Clone, Debug)]
pub struct BodyContext {
    dprofile: DimensionedProfile,
    basis_size: usize,
    volume: f64,
    sigma: f64,
    systems: Vec<GalerkinSystem>,
    eta: DVector<f64>,
}

impl BodyContext {
    pub fn new(dprofile: DimensionedProfile, m_max: usize, basis_size: usize) -> Result<Self> {
        let volume = volume(&dprofile)?;
        let systems = (0..=m_max)
            .map(|m| assemble(&dprofile, m, basis_size))
            .collect::<Result<Vec<_>>>()?;
        let eta = systems[0].project(|t| dprofile.profile.jet(t).value)?;
        Ok(Self {
            sigma: sphere_area(dprofile.n - 2),
            dprofile,
            basis_size,
            volume,
            systems,
            eta,
        })
    }

    pub fn dprofile(&self) -> &DimensionedProfile {
        &self.dprofile
    }

    pub fn n(&self) -> usize {
        self.dprofile.n
    }

    pub fn basis_size(&self) -> usize {
        self.basis_size
    }

    pub fn m_max(&self) -> usize {
        self.systems.len() - 1
    }

    pub fn volume(&self) -> f64 {
        self.volume
    }

    /// `sigma_{n-2}`, the area of `S^(n-2)`.
    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn system(&self, m: usize) -> Result<&GalerkinSystem> {
        self.systems.get(m).ok_or_else(|| {
            Error::Usage(format!(
                "no system assembled for m = {m} (m_max = {})",
                self.m_max()
            ))
        })
    }

    /// `h_K` as a test function: the zonal component `eta` with
    /// `h_norm = sigma_{n-2}`.
    pub fn support_function(&self) -> TestFunction {
        TestFunction {
            n: self.n(),
            components: vec![Component {
                m: 0,
                h_norm: self.sigma,
                coeffs: self.eta.iter().copied().collect(),
            }],
        }
    }

    /// Coefficient vector of `eta` in the `m = 0` basis.
    pub fn eta_coefficients(&self) -> &DVector<f64> {
        &self.eta
    }

    pub(crate) fn check(&self, f: &TestFunction) -> Result<()> {
        if f.n != self.n() {
            return Err(Error::Usage(format!(
                "test function lives in dimension {}, body in {}",
                f.n,
                self.n()
            )));
        }
        for c in &f.components {
            self.system(c.m)?;
            if c.coeffs.len() != self.basis_size {
                return Err(Error::Usage(format!(
                    "component m = {} has {} coefficients, basis size is {}",
                    c.m,
                    c.coeffs.len(),
                    self.basis_size
                )));
            }
        }
        Ok(())
    }
}

/// `(V(f, K[n-1]), V(f, f, K[n-2]), int f^2 / h_K dS_K)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MixedQuantities {
    pub v_lk: f64,
    pub v_llk: f64,
    pub integral: f64,
}

fn coeffs(c: &Component) -> DVector<f64> {
    DVector::from_column_slice(&c.coeffs)
}

/// Mixed volumes of `f` against `K`. Only the zonal component pairs with
/// `h_K`; the quadratic terms add up over components.
pub fn mixed_quantities(body: &BodyContext, f: &TestFunction) -> Result<MixedQuantities> {
    body.check(f)?;
    let mut out = MixedQuantities {
        v_lk: 0.0,
        v_llk: 0.0,
        integral: 0.0,
    };
    for c in &f.components {
        let system = body.system(c.m)?;
        let x = coeffs(c);
        if c.m == 0 {
            out.v_lk += (c.h_norm * body.sigma).sqrt() * system.mass_inner(&x, &body.eta);
        }
        out.v_llk += c.h_norm * system.quadratic_form(&x);
        out.integral += body.nf() * c.h_norm * system.mass_form(&x);
    }
    Ok(out)
}

/// `int (pi_m f)^2 / h_K dS_K`.
pub fn component_integral(body: &BodyContext, f: &TestFunction, m: usize) -> Result<f64> {
    body.check(f)?;
    let mut total = 0.0;
    for c in f.components_of(m) {
        total += body.nf() * c.h_norm * body.system(m)?.mass_form(&coeffs(c));
    }
    Ok(total)
}

impl BodyContext {
    pub(crate) fn nf(&self) -> f64 {
        self.dprofile.nf()
    }
}

/// Removes the translation directions: the `M`-projection onto `t` of the
/// zonal component and onto the constant of every `m = 1` component.
pub fn center_of_mass_project(body: &BodyContext, f: &TestFunction) -> Result<TestFunction> {
    body.dprofile
        .profile
        .require_symmetric("center-of-mass projection")?;
    body.check(f)?;
    let mut out = f.clone();
    for c in &mut out.components {
        let system = body.system(c.m)?;
        let direction = match c.m {
            0 => system.project(|t| t)?,
            1 => system.project(|_| 1.0)?,
            _ => continue,
        };
        let x = coeffs(c);
        let ratio = system.mass_inner(&x, &direction) / system.mass_form(&direction);
        let projected = x - direction * ratio;
        c.coeffs = projected.iter().copied().collect();
    }
    Ok(out)
}

/// Largest normalized inner product of the translation directions with the
/// corresponding components: `|⟨f̄, g⟩| / (|f̄| |g|)`.
pub fn center_of_mass_residual(body: &BodyContext, f: &TestFunction) -> Result<f64> {
    body.check(f)?;
    let mut worst: f64 = 0.0;
    for c in &f.components {
        let system = body.system(c.m)?;
        let direction = match c.m {
            0 => system.project(|t| t)?,
            1 => system.project(|_| 1.0)?,
            _ => continue,
        };
        let x = coeffs(c);
        let norm = (system.mass_form(&x) * system.mass_form(&direction)).sqrt();
        if norm > 0.0 {
            worst = worst.max(system.mass_inner(&x, &direction).abs() / norm);
        }
    }
    Ok(worst)
}
