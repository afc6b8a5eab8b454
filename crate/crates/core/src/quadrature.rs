//! Gauss-Jacobi quadrature for the symmetric weights `(1 - t^2)^alpha`.
//!
//! Nodes come from the eigenvalues of the symmetric Jacobi matrix of the
//! weight (Golub-Welsch), polished by Newton steps on the orthonormal
//! three-term recurrence. Weights use the Christoffel formula
//! `w_i = 1 / sum_k p_k(x_i)^2`, which keeps small endpoint weights
//! accurate to full relative precision.

use nalgebra::{DMatrix, SymmetricEigen};
use statrs::function::gamma::{gamma, ln_gamma};

use crate::basis::BasisContext;
use crate::error::{Error, Result};
use crate::profile::DimensionedProfile;

/// Quadrature nodes used for `basis_size` basis functions.
pub fn oversampled_nodes(basis_size: usize) -> usize {
    2 * basis_size + 32
}

/// `int_{-1}^1 (1 - t^2)^alpha dt = B(1/2, alpha + 1)`.
pub fn jacobi_moment(alpha: f64) -> f64 {
    if alpha >= 100.0 {
        return (ln_gamma(0.5) + ln_gamma(alpha + 1.0) - ln_gamma(alpha + 1.5)).exp();
    }
    // Reduce to a base exponent in (-1, 0] and climb with
    // mu(a + 1) = mu(a) (a + 1) / (a + 3/2); integer and half-integer
    // exponents then come out exact to rounding.
    let steps = alpha.ceil().max(0.0) as usize;
    let base = alpha - steps as f64;
    let mut mu = if base == 0.0 {
        2.0
    } else if base == -0.5 {
        std::f64::consts::PI
    } else {
        gamma(0.5) * gamma(base + 1.0) / gamma(base + 1.5)
    };
    for k in 0..steps {
        let a = base + k as f64;
        mu *= (a + 1.0) / (a + 1.5);
    }
    mu
}

/// Monic recurrence coefficient `beta_k`, `k >= 1`, of the weight
/// `(1 - t^2)^alpha`: `p_{k+1} = t p_k - beta_k p_{k-1}`.
pub fn recurrence_beta(alpha: f64, k: usize) -> f64 {
    debug_assert!(k >= 1);
    if k == 1 {
        return 1.0 / (2.0 * alpha + 3.0);
    }
    let k = k as f64;
    k * (k + 2.0 * alpha) / ((2.0 * k + 2.0 * alpha + 1.0) * (2.0 * k + 2.0 * alpha - 1.0))
}

/// Values of the first `count` orthonormal polynomials of the weight
/// `(1 - t^2)^alpha` at `t`, written into `out`.
pub(crate) fn orthonormal_values(alpha: f64, t: f64, out: &mut [f64]) {
    let count = out.len();
    if count == 0 {
        return;
    }
    out[0] = 1.0 / jacobi_moment(alpha).sqrt();
    if count == 1 {
        return;
    }
    let mut sb_prev = 0.0;
    for k in 0..count - 1 {
        let sb = recurrence_beta(alpha, k + 1).sqrt();
        let prev = if k == 0 { 0.0 } else { out[k - 1] };
        out[k + 1] = (t * out[k] - sb_prev * prev) / sb;
        sb_prev = sb;
    }
}

/// Gauss rule for `int_{-1}^1 (1 - t^2)^alpha f(t) dt`.
#[derive(Clone, Debug, PartialEq)]
pub struct QuadratureRule {
    alpha: f64,
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl QuadratureRule {
    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn order(&self) -> usize {
        self.nodes.len()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn total_weight(&self) -> f64 {
        self.weights.iter().sum()
    }

    /// Approximates `int (1 - t^2)^alpha f(t) dt`.
    pub fn integrate<F: FnMut(f64) -> f64>(&self, mut f: F) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&t, &w)| w * f(t))
            .sum()
    }

    /// Nodes and weights paired, node-ascending.
    pub fn iter(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.nodes.iter().copied().zip(self.weights.iter().copied())
    }
}

/// Builds the `order`-point Gauss-Jacobi rule for `(1 - t^2)^alpha`.
pub fn gauss_jacobi(order: usize, alpha: f64) -> Result<QuadratureRule> {
    if order == 0 {
        return Err(Error::Parameter("quadrature order must be >= 1".into()));
    }
    if !(alpha > -1.0) || !alpha.is_finite() {
        return Err(Error::Parameter(format!(
            "Jacobi exponent must be > -1, got {alpha}"
        )));
    }

    let mut jacobi = DMatrix::<f64>::zeros(order, order);
    for k in 1..order {
        let off = recurrence_beta(alpha, k).sqrt();
        jacobi[(k, k - 1)] = off;
        jacobi[(k - 1, k)] = off;
    }
    let mut nodes: Vec<f64> = SymmetricEigen::new(jacobi)
        .eigenvalues
        .iter()
        .copied()
        .collect();
    nodes.sort_by(|a, b| a.partial_cmp(b).unwrap());

    let mut values = vec![0.0; order + 1];
    let mut weights = Vec::with_capacity(order);
    for x in nodes.iter_mut() {
        // Newton polish on p_order.
        for _ in 0..3 {
            let (p, dp) = orthonormal_with_derivative(alpha, *x, order);
            if dp == 0.0 {
                break;
            }
            let step = p / dp;
            *x -= step;
            if step.abs() < 1e-16 {
                break;
            }
        }
        orthonormal_values(alpha, *x, &mut values[..order]);
        let sum: f64 = values[..order].iter().map(|v| v * v).sum();
        weights.push(1.0 / sum);
    }

    // Enforce exact symmetry about the origin.
    for i in 0..order / 2 {
        let j = order - 1 - i;
        let x = 0.5 * (nodes[j] - nodes[i]);
        nodes[i] = -x;
        nodes[j] = x;
        let w = 0.5 * (weights[i] + weights[j]);
        weights[i] = w;
        weights[j] = w;
    }
    if order % 2 == 1 {
        nodes[order / 2] = 0.0;
    }

    Ok(QuadratureRule {
        alpha,
        nodes,
        weights,
    })
}

/// Value and derivative of the degree-`degree` orthonormal polynomial.
fn orthonormal_with_derivative(alpha: f64, t: f64, degree: usize) -> (f64, f64) {
    let mut p_prev = 0.0;
    let mut d_prev = 0.0;
    let mut p = 1.0 / jacobi_moment(alpha).sqrt();
    let mut d = 0.0;
    let mut sb_prev = 0.0;
    for k in 0..degree {
        let sb = recurrence_beta(alpha, k + 1).sqrt();
        let p_next = (t * p - sb_prev * p_prev) / sb;
        let d_next = (p + t * d - sb_prev * d_prev) / sb;
        p_prev = p;
        d_prev = d;
        p = p_next;
        d = d_next;
        sb_prev = sb;
    }
    (p, d)
}

/// Gauss-Legendre integral of `f` over `[a, b]`.
pub fn integrate_interval<F: FnMut(f64) -> f64>(
    rule: &QuadratureRule,
    a: f64,
    b: f64,
    mut f: F,
) -> f64 {
    debug_assert_eq!(rule.alpha(), 0.0);
    let half = 0.5 * (b - a);
    let mid = 0.5 * (b + a);
    half * rule.integrate(|x| f(mid + half * x))
}

/// Exponent `m + (n - 3) / 2` of the singular factor of `w_{m,n}`.
pub fn weight_exponent(n: usize, m: usize) -> f64 {
    m as f64 + (n as f64 - 3.0) / 2.0
}

/// `w_{m,n}(t)` split into its smooth and singular factors.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WeightValue {
    /// `A2 A1^(n-2) / (n eta)`.
    pub smooth: f64,
    /// `(1 - t^2)^exponent`.
    pub singular: f64,
    pub exponent: f64,
}

impl WeightValue {
    pub fn value(&self) -> f64 {
        self.smooth * self.singular
    }
}

/// Smooth factor `A2 A1^(n-2) / (n eta)` of `w_{m,n}`, shared by every `m`.
pub(crate) fn weight_smooth(dprofile: &DimensionedProfile, t: f64) -> f64 {
    let jet = dprofile.profile.jet(t);
    let n = dprofile.n as i32;
    jet.a2(t) * jet.a1(t).powi(n - 2) / (dprofile.nf() * jet.value)
}

/// `w_{m,n}(t) = A2 A1^(n-2) / (n eta) * (1 - t^2)^(m + (n-3)/2)`.
pub fn weight_w(dprofile: &DimensionedProfile, m: usize, t: f64) -> Result<WeightValue> {
    if !(-1.0..=1.0).contains(&t) {
        return Err(Error::Range {
            what: "t",
            value: t,
            domain: "[-1, 1]",
        });
    }
    let exponent = weight_exponent(dprofile.n, m);
    if t.abs() == 1.0 && exponent < 0.0 {
        return Err(Error::SingularPoint { t, exponent });
    }
    Ok(WeightValue {
        smooth: weight_smooth(dprofile, t),
        singular: (1.0 - t * t).powf(exponent),
        exponent,
    })
}

/// `<f1, f2>_{m,n} = int w_{m,n} f1 f2 dt` for coefficient vectors in the
/// basis `ctx`.
pub fn inner_product_mn(
    dprofile: &DimensionedProfile,
    m: usize,
    ctx: &BasisContext,
    coeffs1: &[f64],
    coeffs2: &[f64],
) -> Result<f64> {
    if !ctx.matches(dprofile.n, m) {
        return Err(Error::Usage(format!(
            "basis with lambda = {} does not belong to (n, m) = ({}, {m})",
            ctx.lambda(),
            dprofile.n
        )));
    }
    if coeffs1.len() != ctx.len() || coeffs2.len() != ctx.len() {
        return Err(Error::Usage(format!(
            "coefficient lengths ({}, {}) do not match basis size {}",
            coeffs1.len(),
            coeffs2.len(),
            ctx.len()
        )));
    }
    let rule = gauss_jacobi(oversampled_nodes(ctx.size()), ctx.alpha())?;
    let mut values = vec![0.0; ctx.len()];
    Ok(rule.integrate(|t| {
        ctx.values_into(t, &mut values);
        let f1: f64 = values.iter().zip(coeffs1).map(|(p, c)| p * c).sum();
        let f2: f64 = values.iter().zip(coeffs2).map(|(p, c)| p * c).sum();
        weight_smooth(dprofile, t) * f1 * f2
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::Parity;
    use crate::profile::Profile;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    #[test]
    fn one_point_legendre() {
        let rule = gauss_jacobi(1, 0.0).unwrap();
        assert_eq!(rule.nodes(), &[0.0]);
        assert_relative_eq!(rule.weights()[0], 2.0, epsilon = 1e-15);
    }

    #[test]
    fn total_weights() {
        for order in [1, 2, 5, 17] {
            assert_relative_eq!(
                gauss_jacobi(order, 0.5).unwrap().total_weight(),
                PI / 2.0,
                max_relative = 1e-14
            );
        }
        let cheb = gauss_jacobi(6, -0.5).unwrap();
        assert_relative_eq!(cheb.total_weight(), PI, max_relative = 1e-14);
        assert_relative_eq!(cheb.integrate(|t| t * t), PI / 2.0, max_relative = 1e-14);
    }

    #[test]
    fn invalid_alpha() {
        assert!(matches!(gauss_jacobi(4, -1.0), Err(Error::Parameter(_))));
        assert!(gauss_jacobi(0, 0.0).is_err());
    }

    #[test]
    fn nodes_sorted_and_symmetric() {
        let rule = gauss_jacobi(33, 1.5).unwrap();
        assert!(rule.nodes().windows(2).all(|w| w[0] < w[1]));
        let n = rule.order();
        for i in 0..n {
            assert_eq!(rule.nodes()[i], -rule.nodes()[n - 1 - i]);
            assert_eq!(rule.weights()[i], rule.weights()[n - 1 - i]);
            assert!(rule.weights()[i] > 0.0);
        }
    }

    #[test]
    fn weight_examples() {
        let ball3 = DimensionedProfile::new(Profile::ball(), 3).unwrap();
        assert_relative_eq!(
            weight_w(&ball3, 0, 0.5).unwrap().value(),
            1.0 / 3.0,
            epsilon = 1e-15
        );

        let ball2 = DimensionedProfile::new(Profile::ball(), 2).unwrap();
        let t: f64 = 0.3;
        assert_relative_eq!(
            weight_w(&ball2, 1, t).unwrap().value(),
            (1.0 - t * t).sqrt() / 2.0,
            epsilon = 1e-15
        );
        assert!(matches!(
            weight_w(&ball2, 0, 1.0),
            Err(Error::SingularPoint { .. })
        ));

        let sph = DimensionedProfile::new(Profile::spheroid(1.0, 2.0).unwrap(), 3).unwrap();
        assert_relative_eq!(
            weight_w(&sph, 0, 0.0).unwrap().value(),
            4.0 / 3.0,
            epsilon = 1e-14
        );
    }

    #[test]
    fn inner_product_examples() {
        let ball3 = DimensionedProfile::new(Profile::ball(), 3).unwrap();
        let ctx = BasisContext::for_harmonic(3, 0, 4, Parity::All).unwrap();
        // Coefficients of 1 and t in the orthonormal Legendre basis.
        let one = [2f64.sqrt(), 0.0, 0.0, 0.0];
        let t = [0.0, (2.0f64 / 3.0).sqrt(), 0.0, 0.0];
        assert_relative_eq!(
            inner_product_mn(&ball3, 0, &ctx, &one, &one).unwrap(),
            2.0 / 3.0,
            epsilon = 1e-14
        );
        assert!(inner_product_mn(&ball3, 0, &ctx, &one, &t).unwrap().abs() < 1e-15);
        assert!(matches!(
            inner_product_mn(&ball3, 1, &ctx, &one, &one),
            Err(Error::Usage(_))
        ));
    }
}
