//! Gegenbauer bases for the weights `(1 - t^2)^(lambda - 1/2)`.
//!
//! The radial factor of `E_m` in dimension `n` is expanded in polynomials
//! orthonormal for `(1 - t^2)^(m + (n-3)/2)`, i.e. normalized Gegenbauer
//! polynomials `C_k^(lambda)` with `lambda = m + (n-2)/2`. For `n = 2`,
//! `m = 0` (`lambda = 0`) the family is Chebyshev `T_k`.

use num_rational::Rational64;
use serde::{Deserialize, Serialize};
use statrs::function::gamma::ln_gamma;

use crate::error::{Error, Result};
use crate::quadrature::{self, QuadratureRule};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Parity {
    All,
    Even,
    Odd,
}

impl Parity {
    pub fn admits(self, degree: usize) -> bool {
        match self {
            Parity::All => true,
            Parity::Even => degree.is_multiple_of(2),
            Parity::Odd => degree % 2 == 1,
        }
    }
}

/// Orthonormal polynomial basis of degrees `< size`, filtered by parity.
#[derive(Clone, Debug, PartialEq)]
pub struct BasisContext {
    lambda: f64,
    size: usize,
    parity: Parity,
    degrees: Vec<usize>,
}

impl BasisContext {
    pub fn new(lambda: f64, size: usize, parity: Parity) -> Result<Self> {
        if !(lambda >= 0.0) {
            return Err(Error::Parameter(format!(
                "Gegenbauer parameter must be >= 0, got {lambda}"
            )));
        }
        if size == 0 {
            return Err(Error::Parameter("basis size must be >= 1".into()));
        }
        let degrees = (0..size).filter(|&k| parity.admits(k)).collect();
        Ok(Self {
            lambda,
            size,
            parity,
            degrees,
        })
    }

    /// Basis for the radial factor of `E_m` in dimension `n`.
    pub fn for_harmonic(n: usize, m: usize, size: usize, parity: Parity) -> Result<Self> {
        if n < 2 {
            return Err(Error::Parameter(format!(
                "dimension n must be >= 2, got {n}"
            )));
        }
        Self::new(harmonic_lambda(n, m), size, parity)
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    /// Jacobi exponent `lambda - 1/2` of the orthogonality weight.
    pub fn alpha(&self) -> f64 {
        self.lambda - 0.5
    }

    pub fn parity(&self) -> Parity {
        self.parity
    }

    /// Number of degrees before parity filtering.
    pub fn size(&self) -> usize {
        self.size
    }

    /// Number of basis functions after parity filtering.
    pub fn len(&self) -> usize {
        self.degrees.len()
    }

    pub fn is_empty(&self) -> bool {
        self.degrees.is_empty()
    }

    pub fn degrees(&self) -> &[usize] {
        &self.degrees
    }

    pub fn matches(&self, n: usize, m: usize) -> bool {
        self.lambda == harmonic_lambda(n, m)
    }

    /// Same family restricted to another parity.
    pub fn with_parity(&self, parity: Parity) -> Self {
        Self::new(self.lambda, self.size, parity).expect("parameters already validated")
    }

    /// Basis values at `t`, written into `out` (length [`len`](Self::len)).
    pub fn values_into(&self, t: f64, out: &mut [f64]) {
        let mut all = vec![0.0; self.size];
        quadrature::orthonormal_values(self.alpha(), t, &mut all);
        for (slot, &k) in out.iter_mut().zip(&self.degrees) {
            *slot = all[k];
        }
    }

    /// Basis values and first derivatives at `t`.
    pub fn jets_into(&self, t: f64, values: &mut [f64], derivs: &mut [f64]) {
        let alpha = self.alpha();
        let mut p = vec![0.0; self.size];
        let mut d = vec![0.0; self.size];
        p[0] = 1.0 / quadrature::jacobi_moment(alpha).sqrt();
        let mut sb_prev = 0.0;
        for k in 0..self.size - 1 {
            let sb = quadrature::recurrence_beta(alpha, k + 1).sqrt();
            let (pp, dp) = if k == 0 {
                (0.0, 0.0)
            } else {
                (p[k - 1], d[k - 1])
            };
            p[k + 1] = (t * p[k] - sb_prev * pp) / sb;
            d[k + 1] = (p[k] + t * d[k] - sb_prev * dp) / sb;
            sb_prev = sb;
        }
        for (i, &k) in self.degrees.iter().enumerate() {
            values[i] = p[k];
            derivs[i] = d[k];
        }
    }

    /// Evaluates the expansion with coefficients `coeffs` at `t`.
    pub fn eval_expansion(&self, coeffs: &[f64], t: f64) -> f64 {
        let mut v = vec![0.0; self.len()];
        self.values_into(t, &mut v);
        v.iter().zip(coeffs).map(|(p, c)| p * c).sum()
    }
}

/// `lambda = m + (n - 2) / 2`.
pub fn harmonic_lambda(n: usize, m: usize) -> f64 {
    m as f64 + (n as f64 - 2.0) / 2.0
}

/// Gegenbauer polynomial `C_k^(lambda)(t)` in the standard normalization
/// (`C_0 = 1`, `C_1 = 2 lambda t`). For `lambda = 0` this returns the
/// Chebyshev polynomial `T_k`, the family used in place of the degenerate
/// limit.
pub fn gegenbauer_eval(lambda: f64, k: usize, t: f64) -> f64 {
    if lambda == 0.0 {
        return chebyshev_t(k, t);
    }
    let mut prev = 1.0;
    if k == 0 {
        return prev;
    }
    let mut cur = 2.0 * lambda * t;
    for j in 1..k {
        let j = j as f64;
        let next = (2.0 * (j + lambda) * t * cur - (j + 2.0 * lambda - 1.0) * prev) / (j + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}

fn chebyshev_t(k: usize, t: f64) -> f64 {
    let mut prev = 1.0;
    if k == 0 {
        return prev;
    }
    let mut cur = t;
    for _ in 1..k {
        let next = 2.0 * t * cur - prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// Squared norm `int (1 - t^2)^(lambda - 1/2) C_k^(lambda)(t)^2 dt`.
pub fn gegenbauer_norm_sq(lambda: f64, k: usize) -> f64 {
    use std::f64::consts::PI;
    if lambda == 0.0 {
        return if k == 0 { PI } else { PI / 2.0 };
    }
    let kf = k as f64;
    let log = PI.ln() + (1.0 - 2.0 * lambda) * 2f64.ln() + ln_gamma(kf + 2.0 * lambda)
        - ln_gamma(kf + 1.0)
        - (kf + lambda).ln()
        - 2.0 * ln_gamma(lambda);
    log.exp()
}

/// Normalization data for the Gegenbauer family of a basis context.
#[derive(Clone, Debug, PartialEq)]
pub struct Normalization {
    /// `c_k` with `c_k C_k^(lambda)` orthonormal, one per basis degree.
    pub constants: Vec<f64>,
    /// Largest entry of `|G - I|` for the Gram matrix under `rule`.
    pub gram_error: f64,
}

/// Gram error above which a rule is deemed too coarse for the basis.
pub const GRAM_TOLERANCE: f64 = 1e-12;

/// Closed-form normalization constants, self-checked against `rule`.
pub fn orthonormalize(ctx: &BasisContext, rule: &QuadratureRule) -> Result<Normalization> {
    if (rule.alpha() - ctx.alpha()).abs() > 1e-15 {
        return Err(Error::Usage(format!(
            "rule exponent {} does not match basis exponent {}",
            rule.alpha(),
            ctx.alpha()
        )));
    }
    let constants: Vec<f64> = ctx
        .degrees()
        .iter()
        .map(|&k| 1.0 / gegenbauer_norm_sq(ctx.lambda(), k).sqrt())
        .collect();
    let len = ctx.len();
    let mut gram = vec![0.0; len * len];
    for (t, w) in rule.iter() {
        let vals: Vec<f64> = ctx
            .degrees()
            .iter()
            .zip(&constants)
            .map(|(&k, c)| c * gegenbauer_eval(ctx.lambda(), k, t))
            .collect();
        for i in 0..len {
            for j in 0..len {
                gram[i * len + j] += w * vals[i] * vals[j];
            }
        }
    }
    let gram_error = (0..len * len)
        .map(|idx| {
            let target = if idx / len == idx % len { 1.0 } else { 0.0 };
            (gram[idx] - target).abs()
        })
        .fold(0.0, f64::max);
    if !(gram_error <= 1e3 * GRAM_TOLERANCE) {
        return Err(Error::UnderResolved(format!(
            "Gram matrix deviates from identity by {gram_error:e} with {} nodes",
            rule.order()
        )));
    }
    Ok(Normalization {
        constants,
        gram_error,
    })
}

/// Exact ball eigenvalue `1 - (m+k)(m+k+n-2)/(n-1)` of `L_m`.
pub fn ball_eigenvalue(n: usize, m: usize, k: usize) -> Rational64 {
    let n = n as i64;
    let j = (m + k) as i64;
    Rational64::from_integer(1) - Rational64::new(j * (j + n - 2), n - 1)
}

pub fn rational_to_f64(r: Rational64) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}
