use approx::assert_relative_eq;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use revgap_core::geometry::*;
use revgap_core::{DimensionedProfile, Error, Profile};
use std::f64::consts::PI;

const SIZE: usize = 40;

fn dp(profile: Profile, n: usize) -> DimensionedProfile {
    DimensionedProfile::new(profile, n).unwrap()
}

fn body(profile: Profile, n: usize, m_max: usize) -> BodyContext {
    BodyContext::new(dp(profile, n), m_max, SIZE).unwrap()
}

fn quartic() -> Profile {
    Profile::even_polynomial(vec![1.0, 0.3, 0.1]).unwrap()
}

fn library() -> Vec<Profile> {
    vec![
        Profile::ball(),
        Profile::spheroid(1.0, 2.0).unwrap(),
        Profile::spheroid(1.0, 0.5).unwrap(),
        quartic(),
    ]
}

/// Coefficients of `g` in the `m` basis of `body`.
fn coeffs_of(body: &BodyContext, m: usize, g: impl Fn(f64) -> f64) -> Vec<f64> {
    body.system(m)
        .unwrap()
        .project(g)
        .unwrap()
        .iter()
        .copied()
        .collect()
}

fn component(body: &BodyContext, m: usize, h_norm: f64, g: impl Fn(f64) -> f64) -> Component {
    Component {
        m,
        h_norm,
        coeffs: coeffs_of(body, m, g),
    }
}

fn random_function(body: &BodyContext, rng: &mut ChaCha8Rng) -> TestFunction {
    let components = (0..=body.m_max())
        .map(|m| Component {
            m,
            h_norm: if m == 0 { body.sigma() } else { 1.0 },
            coeffs: (0..SIZE)
                .map(|i| {
                    if i < 12 {
                        rng.random_range(-1.0..1.0)
                    } else {
                        0.0
                    }
                })
                .collect(),
        })
        .collect();
    let f = TestFunction::new(body.n(), components).unwrap();
    center_of_mass_project(body, &f).unwrap()
}

#[test]
fn sphere_areas() {
    assert_relative_eq!(sphere_area(0), 2.0, epsilon = 1e-14);
    assert_relative_eq!(sphere_area(1), 2.0 * PI, epsilon = 1e-14);
    assert_relative_eq!(sphere_area(2), 4.0 * PI, epsilon = 1e-13);
    assert_relative_eq!(sphere_area(3), 2.0 * PI * PI, epsilon = 1e-13);
}

#[test]
fn volume_examples() {
    assert_relative_eq!(
        volume(&dp(Profile::ball(), 3)).unwrap(),
        4.0 * PI / 3.0,
        epsilon = 1e-12
    );
    assert_relative_eq!(
        volume(&dp(Profile::ball(), 2)).unwrap(),
        PI,
        epsilon = 1e-12
    );
    // Ellipsoid with semi-axes (a, a, b): 4/3 pi a^2 b.
    assert_relative_eq!(
        volume(&dp(Profile::spheroid(1.0, 2.0).unwrap(), 3)).unwrap(),
        8.0 * PI / 3.0,
        epsilon = 1e-10
    );
    // Unit 4-ball: pi^2 / 2; ellipse area pi a b.
    assert_relative_eq!(
        volume(&dp(Profile::ball(), 4)).unwrap(),
        PI * PI / 2.0,
        epsilon = 1e-12
    );
    assert_relative_eq!(
        volume(&dp(Profile::spheroid(3.0, 0.5).unwrap(), 2)).unwrap(),
        PI * 1.5,
        max_relative = 1e-10
    );
}

#[test]
fn support_function_normalization() {
    for profile in library() {
        for n in 2..=5 {
            let b = body(profile.clone(), n, 0);
            let q = mixed_quantities(&b, &b.support_function()).unwrap();
            let vol = b.volume();
            assert_relative_eq!(q.v_lk, vol, max_relative = 1e-10);
            assert_relative_eq!(q.v_llk, vol, max_relative = 1e-10);
            assert_relative_eq!(q.integral, n as f64 * vol, max_relative = 1e-10);
        }
    }
}

#[test]
fn nonzonal_components_do_not_pair_with_support_function() {
    let b = body(Profile::spheroid(1.0, 2.0).unwrap(), 3, 2);
    let f = TestFunction::new(3, vec![component(&b, 2, 1.0, |t| 1.0 + t * t)]).unwrap();
    assert_eq!(mixed_quantities(&b, &f).unwrap().v_lk, 0.0);
}

#[test]
fn zonal_linear_function_has_zero_form() {
    let b = body(Profile::ball(), 3, 0);
    let f = TestFunction::new(3, vec![component(&b, 0, b.sigma(), |t| t)]).unwrap();
    let q = mixed_quantities(&b, &f).unwrap();
    assert!(q.v_llk.abs() < 1e-13);
    assert!(q.v_lk.abs() < 1e-13);
    assert!(q.integral > 0.0);
}

#[test]
fn mixed_quantities_reject_mismatched_input() {
    let b = body(Profile::ball(), 3, 1);
    let wrong_dim = TestFunction::new(4, vec![]).unwrap();
    assert!(matches!(
        mixed_quantities(&b, &wrong_dim),
        Err(Error::Usage(_))
    ));
    let short = TestFunction::new(
        3,
        vec![Component {
            m: 0,
            h_norm: 1.0,
            coeffs: vec![1.0],
        }],
    )
    .unwrap();
    assert!(matches!(mixed_quantities(&b, &short), Err(Error::Usage(_))));
    let high_m = TestFunction::new(
        3,
        vec![Component {
            m: 5,
            h_norm: 1.0,
            coeffs: vec![0.0; SIZE],
        }],
    )
    .unwrap();
    assert!(matches!(
        mixed_quantities(&b, &high_m),
        Err(Error::Usage(_))
    ));
    assert!(TestFunction::new(
        3,
        vec![Component {
            m: 1,
            h_norm: 0.0,
            coeffs: vec![]
        }]
    )
    .is_err());
}

#[test]
fn center_of_mass_examples() {
    let b = body(Profile::ball(), 3, 1);
    // Already admissible: returned unchanged.
    let f = TestFunction::new(
        3,
        vec![
            component(&b, 0, b.sigma(), |t| t * t),
            component(&b, 1, 1.0, |t| t),
        ],
    )
    .unwrap();
    let g = center_of_mass_project(&b, &f).unwrap();
    for (a, c) in f.components.iter().zip(&g.components) {
        let diff: f64 = a
            .coeffs
            .iter()
            .zip(&c.coeffs)
            .map(|(x, y)| (x - y).powi(2))
            .sum::<f64>()
            .sqrt();
        assert!(diff <= 1e-14, "{diff:e}");
    }
    // t -> 0.
    let f = TestFunction::new(3, vec![component(&b, 0, b.sigma(), |t| t)]).unwrap();
    let g = center_of_mass_project(&b, &f).unwrap();
    assert!(g.components[0].coeffs.iter().all(|c| c.abs() < 1e-14));
    // t^3 -> t^3 - (3/5) t for the ball weight (int t^4 / int t^2).
    let f = TestFunction::new(3, vec![component(&b, 0, b.sigma(), |t| t * t * t)]).unwrap();
    let g = center_of_mass_project(&b, &f).unwrap();
    let expected = component(&b, 0, b.sigma(), |t| t * t * t - 0.6 * t);
    for (x, y) in g.components[0].coeffs.iter().zip(&expected.coeffs) {
        assert!((x - y).abs() < 1e-14);
    }
    assert!(center_of_mass_residual(&b, &g).unwrap() <= 1e-12);
}

#[test]
fn equality_case() {
    for profile in library() {
        for n in [2, 3, 4] {
            let b = body(profile.clone(), n, 0);
            let hk = b.support_function();
            for p in [-1.0, 0.0, 0.5, 1.0] {
                let r = local_lp_deficit(&b, &hk, p).unwrap();
                assert!(r.deficit.abs() <= 1e-10, "deficit {:e}", r.deficit);
            }
        }
    }
}

#[test]
fn deficit_rejects_large_p() {
    let b = body(Profile::ball(), 3, 0);
    assert!(matches!(
        local_lp_deficit(&b, &b.support_function(), 3.0),
        Err(Error::Parameter(_))
    ));
}

#[test]
fn ball_m2_deficit_margin() {
    let b = body(Profile::ball(), 3, 2);
    let f = TestFunction::new(3, vec![component(&b, 2, 1.0, |t| 1.0 - 0.4 * t * t)]).unwrap();
    let r = local_lp_deficit(&b, &f, 0.0).unwrap();
    let stability = &r.per_m_stability[0];
    assert_eq!(stability.c_m, 1.0);
    assert!(r.deficit <= 0.0);
    assert!(-r.deficit >= stability.term * (1.0 - 1e-10));
}

#[test]
fn scaling_and_additivity() {
    let b = body(Profile::spheroid(1.0, 2.0).unwrap(), 3, 3);
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let f = random_function(&b, &mut rng);
    let base = local_lp_deficit(&b, &f, 0.0).unwrap().deficit;
    for c in [-2.0, 0.5, 3.0] {
        let scaled = local_lp_deficit(&b, &f.scaled(c), 0.0).unwrap().deficit;
        assert!((scaled - c * c * base).abs() <= 1e-10 * (c * c * base.abs()).max(1.0));
    }
    let whole = mixed_quantities(&b, &f).unwrap();
    let (mut integral, mut form) = (0.0, 0.0);
    for comp in &f.components {
        let single = TestFunction::new(3, vec![comp.clone()]).unwrap();
        let q = mixed_quantities(&b, &single).unwrap();
        integral += q.integral;
        form += q.v_llk;
    }
    assert_relative_eq!(whole.integral, integral, max_relative = 1e-12);
    assert_relative_eq!(whole.v_llk, form, max_relative = 1e-12, epsilon = 1e-12);
}

#[test]
fn random_deficits_and_strengthened_bound() {
    for profile in library() {
        for n in [3, 4] {
            let b = body(profile.clone(), n, 4);
            let mut rng = ChaCha8Rng::seed_from_u64(n as u64);
            for _ in 0..25 {
                let f = random_function(&b, &mut rng);
                let r = local_lp_deficit(&b, &f, 0.0).unwrap();
                assert!(r.passed, "{r:?}");
                let s = strengthened_deficit(&b, &f).unwrap();
                assert!(s.passed, "{s:?}");
                assert!(s.per_m_stability.iter().all(|t| t.term >= 0.0));
                // The strengthened bound implies the plain one.
                assert!(s.strengthened.unwrap() >= s.deficit * n as f64 / (n as f64 - 1.0) - 1e-9);
            }
        }
    }
}

#[test]
fn stability_constant_examples() {
    for n in 3..7 {
        let d = dp(Profile::spheroid(1.0, 2.0).unwrap(), n);
        assert_eq!(stability_constant(&d, 2).unwrap(), 1.0);
    }
    assert_relative_eq!(
        stability_constant(&dp(Profile::ball(), 3), 1).unwrap(),
        0.6,
        epsilon = 1e-12
    );
    // n = 4: 1/3 + int t^4 (1-t^2)^(1/2) / int t^2 (1-t^2)^(1/2) = 1/3 + 1/2.
    assert_relative_eq!(
        stability_constant(&dp(Profile::ball(), 4), 1).unwrap(),
        5.0 / 6.0,
        epsilon = 1e-12
    );
    assert_relative_eq!(
        stability_constant(&dp(quartic(), 3), 3).unwrap(),
        3.5,
        epsilon = 1e-15
    );
    assert!(matches!(
        stability_constant(&dp(Profile::ball(), 3), 0),
        Err(Error::Parameter(_))
    ));
    let shifted = Profile::ball().translated(0.2).unwrap();
    assert!(matches!(
        stability_constant(&dp(shifted, 3), 1),
        Err(Error::Unsupported(_))
    ));
    for profile in library() {
        assert!(stability_constant(&dp(profile, 3), 1).unwrap() > 0.0);
    }
}

#[test]
fn strengthened_examples() {
    let b = body(Profile::ball(), 3, 1);
    let zero = TestFunction::zero(3);
    let r = strengthened_deficit(&b, &zero).unwrap();
    assert_eq!(r.strengthened, Some(0.0));
    assert!(r.passed);

    // Zonal, even, orthogonal to eta and t: the stability sum is empty.
    let b = body(Profile::spheroid(1.0, 2.0).unwrap(), 3, 1);
    let mut f = TestFunction::new(3, vec![component(&b, 0, b.sigma(), |t| t * t)]).unwrap();
    let sys = b.system(0).unwrap();
    let x = nalgebra::DVector::from_vec(f.components[0].coeffs.clone());
    let eta = b.eta_coefficients();
    let x = &x - eta * (sys.mass_inner(&x, eta) / sys.mass_form(eta));
    f.components[0].coeffs = x.iter().copied().collect();
    let r = strengthened_deficit(&b, &f).unwrap();
    assert!(r.per_m_stability.is_empty());
    assert_relative_eq!(
        r.strengthened.unwrap(),
        r.deficit * 1.5,
        max_relative = 1e-12
    );
    assert!(r.passed);

    // Ball, m = 1 component orthogonal to constants.
    let b = body(Profile::ball(), 3, 1);
    let f = TestFunction::new(3, vec![component(&b, 1, 1.0, |t| t)]).unwrap();
    let r = strengthened_deficit(&b, &f).unwrap();
    assert_relative_eq!(r.per_m_stability[0].c_m, 0.6, epsilon = 1e-12);
    assert!(r.passed);
    // Eigenvalue -2 for the ball leaves slack (-2 + 1/2 + 3/5 < 0) per unit mass.
    assert!(r.strengthened.unwrap() < 0.0);
}

#[test]
fn kubota_examples() {
    let k = kubota_check(&dp(Profile::ball(), 3)).unwrap();
    assert_relative_eq!(k.lhs, 4.0 / 3.0, epsilon = 1e-13);
    assert_relative_eq!(k.rhs, 4.0 / 3.0, epsilon = 1e-13);
    let k = kubota_check(&dp(Profile::ball(), 2)).unwrap();
    assert_relative_eq!(k.lhs, PI / 2.0, epsilon = 1e-13);
    assert_relative_eq!(k.rhs, PI / 2.0, epsilon = 1e-13);
    for profile in library() {
        for n in 2..=6 {
            assert!(
                kubota_check(&dp(profile.clone(), n))
                    .unwrap()
                    .relative_error
                    <= 1e-10
            );
        }
    }
}

#[test]
fn symmetrization_examples() {
    let b = body(Profile::ball(), 3, 3);
    let zonal = TestFunction::new(3, vec![component(&b, 0, b.sigma(), |t| t * t)]).unwrap();
    let r = symmetrization_bound(&b, &zonal).unwrap();
    assert_eq!(r.lhs, 0.0);
    assert!(r.rhs.abs() < 1e-12);
    assert!(r.holds);
    assert_relative_eq!(r.threshold_p, -1.2, epsilon = 1e-12);

    let f = TestFunction::new(3, vec![component(&b, 3, 1.0, |t| 1.0 + t)]).unwrap();
    let r = symmetrization_bound(&b, &f).unwrap();
    assert!(r.holds && r.lhs > r.rhs);
    assert_relative_eq!(r.lhs / r.rhs, 3.5 / 0.6, max_relative = 1e-12);
}

#[test]
fn report_serializes() {
    let b = body(Profile::ball(), 3, 0);
    let r = local_lp_deficit(&b, &b.support_function(), 0.0).unwrap();
    let json = serde_json::to_value(&r).unwrap();
    for key in [
        "term_v_lk",
        "term_v_llk",
        "term_integral",
        "vol_k",
        "deficit",
        "tolerance",
        "passed",
    ] {
        assert!(json.get(key).is_some(), "{key}");
    }
}
