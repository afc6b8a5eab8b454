//! Reproducible random test functions.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use revgap_core::geometry::{center_of_mass_project, BodyContext, Component, TestFunction};

/// Random coefficients drawn per component.
pub const RANDOM_COEFFICIENTS: usize = 12;

/// Components for every `m <= m_max` with the first 12 coefficients i.i.d.
/// uniform on `[-1, 1]`, then projected to the center-of-mass condition.
/// The zonal component carries `h_norm = sigma_{n-2}`, the others 1.
pub fn random_test_function(body: &BodyContext, seed: u64) -> revgap_core::Result<TestFunction> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let size = body.basis_size();
    let components = (0..=body.m_max())
        .map(|m| {
            let mut coeffs = vec![0.0; size];
            for c in coeffs.iter_mut().take(RANDOM_COEFFICIENTS) {
                *c = rng.random_range(-1.0..=1.0);
            }
            Component {
                m,
                h_norm: if m == 0 { body.sigma() } else { 1.0 },
                coeffs,
            }
        })
        .collect();
    let f = TestFunction::new(body.n(), components)?;
    center_of_mass_project(body, &f)
}
