//! Dense symmetric linear algebra helpers built on `nalgebra`.

use nalgebra::{DMatrix, DVector, SymmetricEigen};

use crate::error::{Error, Result};

/// Eigenpairs of `Q x = lambda M x` for symmetric `Q` and positive definite
/// `M`, eigenvalues descending, eigenvectors `M`-orthonormal.
pub fn generalized_symmetric_eigen(
    q: &DMatrix<f64>,
    m: &DMatrix<f64>,
) -> Result<(Vec<f64>, DMatrix<f64>)> {
    let n = q.nrows();
    if n == 0 {
        return Ok((Vec::new(), DMatrix::zeros(0, 0)));
    }
    let chol = match m.clone().cholesky() {
        Some(c) => c,
        None => {
            let smallest = SymmetricEigen::new(m.clone())
                .eigenvalues
                .iter()
                .copied()
                .fold(f64::INFINITY, f64::min);
            return Err(Error::Conditioning {
                smallest_eigenvalue: smallest,
            });
        }
    };
    let l = chol.l();
    // C = L^{-1} Q L^{-T}
    let mut tmp = q.clone();
    l.solve_lower_triangular_mut(&mut tmp);
    let mut c = tmp.transpose();
    l.solve_lower_triangular_mut(&mut c);
    symmetrize(&mut c);

    let eig = SymmetricEigen::new(c);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].partial_cmp(&eig.eigenvalues[a]).unwrap());

    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let mut vectors = DMatrix::zeros(n, n);
    for (col, &i) in order.iter().enumerate() {
        // x = L^{-T} y
        let mut x = eig.eigenvectors.column(i).into_owned();
        l.tr_solve_lower_triangular_mut(&mut x);
        fix_sign(&mut x);
        vectors.set_column(col, &x);
    }
    Ok((values, vectors))
}

/// Makes the largest-magnitude entry positive.
pub fn fix_sign(x: &mut DVector<f64>) {
    let pivot = x
        .iter()
        .copied()
        .fold(0.0f64, |acc, v| if v.abs() > acc.abs() { v } else { acc });
    if pivot < 0.0 {
        x.neg_mut();
    }
}

pub fn symmetrize(a: &mut DMatrix<f64>) {
    let n = a.nrows();
    for i in 0..n {
        for j in 0..i {
            let v = 0.5 * (a[(i, j)] + a[(j, i)]);
            a[(i, j)] = v;
            a[(j, i)] = v;
        }
    }
}

/// Orthonormal (Euclidean) basis of `{x : c_j^T M x = 0 for all j}`, as the
/// columns of an `N x (N - r)` matrix.
pub fn m_orthogonal_complement(
    m: &DMatrix<f64>,
    constraints: &[DVector<f64>],
) -> Result<DMatrix<f64>> {
    let n = m.nrows();
    if constraints.is_empty() {
        return Ok(DMatrix::identity(n, n));
    }
    let r = constraints.len();
    if r >= n {
        return Err(Error::Parameter(format!(
            "{r} constraints leave no room in a basis of size {n}"
        )));
    }
    let mut b = DMatrix::zeros(n, r);
    for (j, c) in constraints.iter().enumerate() {
        if c.len() != n {
            return Err(Error::Usage(format!(
                "constraint length {} does not match basis size {n}",
                c.len()
            )));
        }
        let mc = m * c;
        let norm = mc.norm();
        if norm == 0.0 {
            return Err(Error::Parameter("zero constraint vector".into()));
        }
        b.set_column(j, &(mc / norm));
    }
    let qr = b.qr();
    let rdiag = qr.r().diagonal();
    if let Some(small) = rdiag.iter().map(|v| v.abs()).find(|v| *v < 1e-10) {
        return Err(Error::Parameter(format!(
            "constraint vectors are linearly dependent (pivot {small:e})"
        )));
    }
    let mut qt = DMatrix::identity(n, n);
    qr.q_tr_mul(&mut qt);
    Ok(qt.transpose().columns(r, n - r).into_owned())
}

/// Angle between the lines spanned by `x` and `y` in the `M` inner product.
pub fn m_angle(x: &DVector<f64>, y: &DVector<f64>, m: &DMatrix<f64>) -> f64 {
    let mx = m * x;
    let my = m * y;
    let nx = x.dot(&mx).sqrt();
    let ny = y.dot(&my).sqrt();
    if nx == 0.0 || ny == 0.0 {
        return std::f64::consts::FRAC_PI_2;
    }
    let sign = if x.dot(&my) < 0.0 { -1.0 } else { 1.0 };
    let diff = x / nx - y * (sign / ny);
    let dist = diff.dot(&(m * &diff)).max(0.0).sqrt();
    2.0 * (0.5 * dist).min(1.0).asin()
}
