//! Indicial data of `L_m` at the regular singular points `t = ±1`.
//!
//! Near `t = 1`, in the variable `x = 1 - t`, the eigenvalue equation has
//! the normalized form `x^2 y'' + x p(x) y' + q(x) y = 0` with
//! `p(0) = m + (n-1)/2` and `q(0) = 0`, so the indicial polynomial is
//! `alpha^2 + (p0 - 1) alpha` with roots `0` and `-(m + (n-3)/2)`.

use num_rational::Rational64;
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FrobeniusReport {
    pub n: usize,
    pub m: usize,
    /// Leading coefficient `p0 = m + (n-1)/2`.
    pub p0: Rational64,
    /// `q0 = 0`.
    pub q0: Rational64,
    /// Roots `(alpha1, alpha2) = (0, -m - (n-3)/2)`.
    pub indices: (Rational64, Rational64),
    /// `alpha1 - alpha2` is a nonnegative integer.
    pub resonant: bool,
    /// `alpha1 == alpha2`; the second solution carries a logarithm.
    pub logarithmic: bool,
}

impl FrobeniusReport {
    /// Indicial polynomial `P(alpha) = alpha^2 + (p0 - 1) alpha + q0`.
    pub fn indicial(&self, alpha: Rational64) -> Rational64 {
        alpha * alpha + (self.p0 - 1) * alpha + self.q0
    }
}

/// Exact Frobenius indices of `L_m` in dimension `n`.
pub fn frobenius(n: usize, m: usize) -> FrobeniusReport {
    let p0 = Rational64::from_integer(m as i64) + Rational64::new(n as i64 - 1, 2);
    let q0 = Rational64::from_integer(0);
    // Roots of alpha^2 + (p0 - 1) alpha.
    let alpha1 = Rational64::from_integer(0);
    let alpha2 = Rational64::from_integer(1) - p0;
    let diff = alpha1 - alpha2;
    FrobeniusReport {
        n,
        m,
        p0,
        q0,
        indices: (alpha1, alpha2),
        resonant: diff.is_integer() && diff >= Rational64::from_integer(0),
        logarithmic: alpha1 == alpha2,
    }
}
