//! Constrained generalized eigenproblems `Q x = lambda M x`.

use nalgebra::{DMatrix, DVector};

use super::system::GalerkinSystem;
use crate::error::Result;
use crate::linalg;

/// Eigenpairs of a Galerkin system on its constrained subspace.
#[derive(Clone, Debug)]
pub struct Spectrum {
    /// Descending.
    pub eigenvalues: Vec<f64>,
    /// Coefficient vectors in the system basis, `M`-orthonormal.
    pub eigenvectors: Vec<DVector<f64>>,
    /// `||Q x - lambda M x||` per pair.
    pub residuals: Vec<f64>,
}

impl Spectrum {
    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    /// Largest eigenvalue, if any.
    pub fn top(&self) -> Option<f64> {
        self.eigenvalues.first().copied()
    }
}

/// Solves `Q x = lambda M x` on `{x : c^T M x = 0}` for every constraint `c`
/// of the system.
pub fn solve(system: &GalerkinSystem) -> Result<Spectrum> {
    let q = system.q();
    let m = system.mass();
    let z = linalg::m_orthogonal_complement(m, system.constraints())?;
    let (qr, mr): (DMatrix<f64>, DMatrix<f64>) = if system.constraints().is_empty() {
        (q.clone(), m.clone())
    } else {
        let mut qr = z.transpose() * q * &z;
        let mut mr = z.transpose() * m * &z;
        linalg::symmetrize(&mut qr);
        linalg::symmetrize(&mut mr);
        (qr, mr)
    };
    let (eigenvalues, y) = linalg::generalized_symmetric_eigen(&qr, &mr)?;
    let mut eigenvectors = Vec::with_capacity(eigenvalues.len());
    let mut residuals = Vec::with_capacity(eigenvalues.len());
    for (k, &lambda) in eigenvalues.iter().enumerate() {
        let mut x = if system.constraints().is_empty() {
            y.column(k).into_owned()
        } else {
            &z * y.column(k)
        };
        linalg::fix_sign(&mut x);
        let r = if system.constraints().is_empty() {
            (q * &x - m * &x * lambda).norm()
        } else {
            // The residual lives in the constrained subspace.
            (z.transpose() * (q * &x - m * &x * lambda)).norm()
        };
        residuals.push(r);
        eigenvectors.push(x);
    }
    Ok(Spectrum {
        eigenvalues,
        eigenvectors,
        residuals,
    })
}
