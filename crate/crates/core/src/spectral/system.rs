//! Galerkin discretization of the weak form of `L_m`.

use nalgebra::{DMatrix, DVector};

use crate::basis::{BasisContext, Parity};
use crate::error::{Error, Result};
use crate::linalg;
use crate::profile::DimensionedProfile;
use crate::quadrature::{self, gauss_jacobi};

/// Smallest basis size accepted by [`assemble`].
pub const MIN_BASIS_SIZE: usize = 4;

/// Potential `k_m(t) = -(m-1)(n-2) A2 - (m^2-1) A1 - m(m-1) eta''`.
pub fn potential(n: usize, m: usize, a1: f64, a2: f64, d2: f64) -> f64 {
    let (nf, mf) = (n as f64, m as f64);
    -(mf - 1.0) * (nf - 2.0) * a2 - (mf * mf - 1.0) * a1 - mf * (mf - 1.0) * d2
}

/// Quadratic form `Q` of `<L_m f, f>_{m,n}` and mass matrix `M` of
/// `<f, f>_{m,n}` in a Gegenbauer basis, plus optional constraint vectors
/// whose `M`-orthogonal complement is the solution space.
#[derive(Clone, Debug)]
pub struct GalerkinSystem {
    pub n: usize,
    pub m: usize,
    basis: BasisContext,
    q: DMatrix<f64>,
    mass: DMatrix<f64>,
    constraints: Vec<DVector<f64>>,
    /// Basis values at the quadrature nodes, one row per node.
    values: DMatrix<f64>,
    nodes: Vec<f64>,
    /// Quadrature weight times the smooth part of `w_{m,n}` per node.
    mass_weights: DVector<f64>,
}

/// Assembles `Q` and `M` for `L_m` with `size` basis functions and
/// `2 size + 32` Gauss-Jacobi nodes.
pub fn assemble(dprofile: &DimensionedProfile, m: usize, size: usize) -> Result<GalerkinSystem> {
    if size < MIN_BASIS_SIZE {
        return Err(Error::Parameter(format!(
            "basis size must be >= {MIN_BASIS_SIZE}, got {size}"
        )));
    }
    dprofile.ensure_valid()?;
    let n = dprofile.n;
    let basis = BasisContext::for_harmonic(n, m, size, Parity::All)?;
    let rule = gauss_jacobi(quadrature::oversampled_nodes(size), basis.alpha())?;
    let nq = rule.order();
    let scale = 1.0 / (n as f64 * (n as f64 - 1.0));

    let mut values = DMatrix::zeros(nq, size);
    let mut derivs = DMatrix::zeros(nq, size);
    let mut stiff = DVector::zeros(nq);
    let mut pot = DVector::zeros(nq);
    let mut mass_weights = DVector::zeros(nq);
    let mut v = vec![0.0; size];
    let mut d = vec![0.0; size];
    for (row, (t, w)) in rule.iter().enumerate() {
        basis.jets_into(t, &mut v, &mut d);
        for j in 0..size {
            values[(row, j)] = v[j];
            derivs[(row, j)] = d[j];
        }
        let jet = dprofile.profile.jet(t);
        let (a1, a2) = (jet.a1(t), jet.a2(t));
        let a1_pow = a1.powi(n as i32 - 3);
        stiff[row] = -w * scale * a1_pow * a1 * (1.0 - t * t);
        pot[row] = w * scale * a1_pow * potential(n, m, a1, a2, jet.d2);
        mass_weights[row] = w * quadrature::weight_smooth(dprofile, t);
    }

    let mut q = weighted_gram(&derivs, &stiff) + weighted_gram(&values, &pot);
    let mut mass = weighted_gram(&values, &mass_weights);
    linalg::symmetrize(&mut q);
    linalg::symmetrize(&mut mass);
    Ok(GalerkinSystem {
        n,
        m,
        basis,
        q,
        mass,
        constraints: Vec::new(),
        values,
        nodes: rule.nodes().to_vec(),
        mass_weights,
    })
}

/// `P^T diag(w) P`.
fn weighted_gram(p: &DMatrix<f64>, w: &DVector<f64>) -> DMatrix<f64> {
    let mut scaled = p.clone();
    for (mut row, &wi) in scaled.row_iter_mut().zip(w.iter()) {
        row *= wi;
    }
    p.transpose() * scaled
}

impl GalerkinSystem {
    pub fn basis(&self) -> &BasisContext {
        &self.basis
    }

    pub fn q(&self) -> &DMatrix<f64> {
        &self.q
    }

    pub fn mass(&self) -> &DMatrix<f64> {
        &self.mass
    }

    pub fn constraints(&self) -> &[DVector<f64>] {
        &self.constraints
    }

    /// Number of basis functions.
    pub fn len(&self) -> usize {
        self.basis.len()
    }

    pub fn is_empty(&self) -> bool {
        self.basis.is_empty()
    }

    /// Adds a constraint `c`: solutions must satisfy `c^T M x = 0`.
    pub fn add_constraint(&mut self, c: DVector<f64>) -> Result<()> {
        if c.len() != self.len() {
            return Err(Error::Usage(format!(
                "constraint length {} does not match basis size {}",
                c.len(),
                self.len()
            )));
        }
        self.constraints.push(c);
        Ok(())
    }

    /// Adds the constraint `f ⟂ g` for the function `g`.
    pub fn constrain_orthogonal_to<F: Fn(f64) -> f64>(&mut self, g: F) -> Result<()> {
        let c = self.project(g)?;
        self.add_constraint(c)
    }

    /// Subsystem on the basis functions of the given parity. Constraints are
    /// not carried over.
    pub fn restrict(&self, parity: Parity) -> GalerkinSystem {
        let keep: Vec<usize> = self
            .basis
            .degrees()
            .iter()
            .enumerate()
            .filter(|(_, &k)| parity.admits(k))
            .map(|(i, _)| i)
            .collect();
        let r = keep.len();
        GalerkinSystem {
            n: self.n,
            m: self.m,
            basis: self.basis.with_parity(parity),
            q: DMatrix::from_fn(r, r, |i, j| self.q[(keep[i], keep[j])]),
            mass: DMatrix::from_fn(r, r, |i, j| self.mass[(keep[i], keep[j])]),
            constraints: Vec::new(),
            values: self.values.select_columns(&keep),
            nodes: self.nodes.clone(),
            mass_weights: self.mass_weights.clone(),
        }
    }

    /// `M`-orthogonal projection of `g` onto the span of the basis:
    /// solves `M c = b` with `b_i = <g, p_i>_{m,n}`.
    pub fn project<F: Fn(f64) -> f64>(&self, g: F) -> Result<DVector<f64>> {
        let gw = DVector::from_iterator(
            self.nodes.len(),
            self.nodes
                .iter()
                .zip(self.mass_weights.iter())
                .map(|(&t, &w)| w * g(t)),
        );
        let b = self.values.transpose() * gw;
        let chol = self
            .mass
            .clone()
            .cholesky()
            .ok_or_else(|| Error::Conditioning {
                smallest_eigenvalue: self.mass.symmetric_eigenvalues().min(),
            })?;
        Ok(chol.solve(&b))
    }

    /// `x^T Q x`.
    pub fn quadratic_form(&self, x: &DVector<f64>) -> f64 {
        x.dot(&(&self.q * x))
    }

    /// `x^T M x`.
    pub fn mass_form(&self, x: &DVector<f64>) -> f64 {
        x.dot(&(&self.mass * x))
    }

    /// `x^T M y`.
    pub fn mass_inner(&self, x: &DVector<f64>, y: &DVector<f64>) -> f64 {
        x.dot(&(&self.mass * y))
    }

    /// Largest entry of the coupling blocks between even and odd degrees,
    /// relative to the norms of `Q` and `M`.
    pub fn parity_coupling(&self) -> (f64, f64) {
        let degrees = self.basis.degrees();
        let mut cq: f64 = 0.0;
        let mut cm: f64 = 0.0;
        for (i, ki) in degrees.iter().enumerate() {
            for (j, kj) in degrees.iter().enumerate() {
                if (ki + kj) % 2 == 1 {
                    cq = cq.max(self.q[(i, j)].abs());
                    cm = cm.max(self.mass[(i, j)].abs());
                }
            }
        }
        (cq / self.q.norm(), cm / self.mass.norm())
    }
}
