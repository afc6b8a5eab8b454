//! Support-function profiles of bodies of revolution.
//!
//! A body of revolution about the `x_n` axis has support function
//! `h_K(x) = eta(x_n)` for a profile `eta` on `[-1, 1]`. The two eigenvalue
//! functions of the restricted Hessian of `h_K` are
//!
//! ```text
//! A1(t) = eta(t) - t eta'(t)
//! A2(t) = (1 - t^2) eta''(t) + A1(t)
//! ```
//!
//! and the body is of class `C^2_+` exactly when both are positive.

use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature::{self, QuadratureRule};

/// Nodes of the Gauss-Legendre rule used for cap heights.
pub const CAP_HEIGHT_NODES: usize = 64;
/// Default size of the validation grid.
pub const DEFAULT_VALIDATION_POINTS: usize = 257;
/// Values at or below this threshold count as non-positive.
pub const POSITIVITY_MARGIN: f64 = 1e-12;

/// Value and first two derivatives of a profile at a point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Jet {
    pub value: f64,
    pub d1: f64,
    pub d2: f64,
}

impl Jet {
    pub fn constant(value: f64) -> Self {
        Self {
            value,
            d1: 0.0,
            d2: 0.0,
        }
    }

    fn scale(self, c: f64) -> Self {
        Self {
            value: c * self.value,
            d1: c * self.d1,
            d2: c * self.d2,
        }
    }

    fn add(self, other: Self) -> Self {
        Self {
            value: self.value + other.value,
            d1: self.d1 + other.d1,
            d2: self.d2 + other.d2,
        }
    }

    /// `A1 = eta - t eta'`.
    pub fn a1(&self, t: f64) -> f64 {
        self.value - t * self.d1
    }

    /// `A2 = (1 - t^2) eta'' + A1`.
    pub fn a2(&self, t: f64) -> f64 {
        (1.0 - t * t) * self.d2 + self.a1(t)
    }
}

/// One weighted term of a Minkowski combination.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScaledTerm {
    pub coefficient: f64,
    pub profile: Profile,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ProfileKind {
    /// Unit ball, `eta = 1`.
    Ball,
    /// Ellipsoid of revolution with equatorial semi-axis `a` and polar
    /// semi-axis `b`: `eta(t) = sqrt(a^2 + (b^2 - a^2) t^2)`.
    Spheroid { a: f64, b: f64 },
    /// `eta(t) = sum_k coefficients[k] * t^(2k)`.
    EvenPolynomial { coefficients: Vec<f64> },
    /// `eta_s = 1 - s + s * eta_base`.
    Homotopy { base: Box<Profile>, s: f64 },
    /// Minkowski combination `sum_i c_i eta_i` with `c_i > 0`.
    ScaledSum { terms: Vec<ScaledTerm> },
    /// Translation of the base body along the axis: `eta_base(t) + offset * t`.
    Translated { base: Box<Profile>, offset: f64 },
}

/// Raw serialized form; `symmetric` defaults to the parity implied by the kind.
#[derive(Serialize, Deserialize)]
struct ProfileRepr {
    #[serde(flatten)]
    kind: ProfileKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    symmetric: Option<bool>,
}

/// Profile `eta` of a body of revolution.
///
/// Profiles are immutable once built. The `symmetric` flag records whether
/// the body is origin symmetric (`eta` even); operations that need origin
/// symmetry refuse profiles without it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ProfileRepr", into = "ProfileRepr")]
pub struct Profile {
    kind: ProfileKind,
    symmetric: bool,
}

impl TryFrom<ProfileRepr> for Profile {
    type Error = Error;

    fn try_from(repr: ProfileRepr) -> Result<Self> {
        let profile = Profile::new(repr.kind)?;
        Ok(match repr.symmetric {
            Some(flag) => profile.with_symmetric_flag(flag),
            None => profile,
        })
    }
}

impl From<Profile> for ProfileRepr {
    fn from(p: Profile) -> Self {
        ProfileRepr {
            kind: p.kind,
            symmetric: Some(p.symmetric),
        }
    }
}

impl Profile {
    /// Builds a profile after checking the parameters of its kind.
    pub fn new(kind: ProfileKind) -> Result<Self> {
        let symmetric = match &kind {
            ProfileKind::Ball => true,
            ProfileKind::Spheroid { a, b } => {
                if !(*a > 0.0 && a.is_finite()) || !(*b > 0.0 && b.is_finite()) {
                    return Err(Error::Parameter(format!(
                        "spheroid semi-axes must be positive, got a = {a}, b = {b}"
                    )));
                }
                true
            }
            ProfileKind::EvenPolynomial { coefficients } => {
                if coefficients.is_empty() || coefficients.iter().any(|c| !c.is_finite()) {
                    return Err(Error::Parameter(
                        "even polynomial needs at least one finite coefficient".into(),
                    ));
                }
                true
            }
            ProfileKind::Homotopy { base, s } => {
                if !(0.0..=1.0).contains(s) {
                    return Err(Error::Range {
                        what: "s",
                        value: *s,
                        domain: "[0, 1]",
                    });
                }
                base.symmetric
            }
            ProfileKind::ScaledSum { terms } => {
                if terms.is_empty() {
                    return Err(Error::Parameter(
                        "scaled sum needs at least one term".into(),
                    ));
                }
                if let Some(t) = terms.iter().find(|t| !(t.coefficient > 0.0)) {
                    return Err(Error::Parameter(format!(
                        "scaled sum coefficients must be positive, got {}",
                        t.coefficient
                    )));
                }
                terms.iter().all(|t| t.profile.symmetric)
            }
            ProfileKind::Translated { base, offset } => {
                if !offset.is_finite() {
                    return Err(Error::Parameter("translation offset must be finite".into()));
                }
                base.symmetric && *offset == 0.0
            }
        };
        Ok(Self { kind, symmetric })
    }

    pub fn ball() -> Self {
        Self {
            kind: ProfileKind::Ball,
            symmetric: true,
        }
    }

    pub fn spheroid(a: f64, b: f64) -> Result<Self> {
        Self::new(ProfileKind::Spheroid { a, b })
    }

    pub fn even_polynomial(coefficients: Vec<f64>) -> Result<Self> {
        Self::new(ProfileKind::EvenPolynomial { coefficients })
    }

    /// The homotopy `1 - s + s * eta` towards this profile.
    pub fn homotopy(&self, s: f64) -> Result<Self> {
        Self::new(ProfileKind::Homotopy {
            base: Box::new(self.clone()),
            s,
        })
    }

    pub fn scaled_sum(terms: Vec<(f64, Profile)>) -> Result<Self> {
        Self::new(ProfileKind::ScaledSum {
            terms: terms
                .into_iter()
                .map(|(coefficient, profile)| ScaledTerm {
                    coefficient,
                    profile,
                })
                .collect(),
        })
    }

    pub fn translated(&self, offset: f64) -> Result<Self> {
        Self::new(ProfileKind::Translated {
            base: Box::new(self.clone()),
            offset,
        })
    }

    /// Overrides the symmetry flag. Claiming symmetry for a non-even profile
    /// is reported by [`validate`].
    pub fn with_symmetric_flag(mut self, symmetric: bool) -> Self {
        self.symmetric = symmetric;
        self
    }

    pub fn kind(&self) -> &ProfileKind {
        &self.kind
    }

    pub fn is_symmetric(&self) -> bool {
        self.symmetric
    }

    /// `(eta, eta', eta'')` at `t`.
    pub fn eval(&self, t: f64) -> Result<Jet> {
        check_unit_interval(t)?;
        Ok(self.jet(t))
    }

    pub fn a1(&self, t: f64) -> Result<f64> {
        Ok(self.eval(t)?.a1(t))
    }

    pub fn a2(&self, t: f64) -> Result<f64> {
        Ok(self.eval(t)?.a2(t))
    }

    /// Unchecked evaluation for callers that already hold `t` in `[-1, 1]`.
    pub(crate) fn jet(&self, t: f64) -> Jet {
        match &self.kind {
            ProfileKind::Ball => Jet::constant(1.0),
            ProfileKind::Spheroid { a, b } => {
                let a2 = a * a;
                let d = b * b - a2;
                let eta = (a2 + d * t * t).sqrt();
                Jet {
                    value: eta,
                    d1: d * t / eta,
                    d2: d * a2 / (eta * eta * eta),
                }
            }
            ProfileKind::EvenPolynomial { coefficients } => {
                let mut jet = Jet::constant(0.0);
                for (k, &c) in coefficients.iter().enumerate() {
                    let p = 2 * k as i32;
                    jet.value += c * t.powi(p);
                    if p >= 1 {
                        jet.d1 += c * p as f64 * t.powi(p - 1);
                    }
                    if p >= 2 {
                        jet.d2 += c * (p * (p - 1)) as f64 * t.powi(p - 2);
                    }
                }
                jet
            }
            ProfileKind::Homotopy { base, s } => Jet::constant(1.0 - s).add(base.jet(t).scale(*s)),
            ProfileKind::ScaledSum { terms } => {
                terms.iter().fold(Jet::constant(0.0), |acc, term| {
                    acc.add(term.profile.jet(t).scale(term.coefficient))
                })
            }
            ProfileKind::Translated { base, offset } => {
                let mut jet = base.jet(t);
                jet.value += offset * t;
                jet.d1 += offset;
                jet
            }
        }
    }

    /// Cap height `L_K(t) = t * int_0^t A2(s) ds`, integrated with a fixed
    /// Gauss-Legendre rule.
    pub fn cap_height(&self, t: f64) -> Result<f64> {
        check_unit_interval(t)?;
        Ok(self.cap_height_unchecked(t))
    }

    pub(crate) fn cap_height_unchecked(&self, t: f64) -> f64 {
        if t == 0.0 {
            return 0.0;
        }
        let rule = legendre_64();
        let half = 0.5 * t;
        let integral: f64 = rule
            .nodes()
            .iter()
            .zip(rule.weights())
            .map(|(&x, &w)| {
                let s = half * (x + 1.0);
                w * self.jet(s).a2(s)
            })
            .sum::<f64>()
            * half;
        t * integral
    }

    /// `eta(t) - A1(t) (1 - t^2)`, which equals the cap height when `eta` is
    /// even.
    pub fn rk_hk_gap(&self, t: f64) -> Result<f64> {
        self.require_symmetric("rk_hk_gap")?;
        let jet = self.eval(t)?;
        Ok(jet.value - jet.a1(t) * (1.0 - t * t))
    }

    pub(crate) fn require_symmetric(&self, operation: &str) -> Result<()> {
        if self.symmetric {
            Ok(())
        } else {
            Err(Error::Unsupported(format!(
                "{operation} requires an origin-symmetric profile"
            )))
        }
    }
}

fn legendre_64() -> &'static QuadratureRule {
    static RULE: OnceLock<QuadratureRule> = OnceLock::new();
    RULE.get_or_init(|| {
        quadrature::gauss_jacobi(CAP_HEIGHT_NODES, 0.0).expect("Legendre rule is always valid")
    })
}

fn check_unit_interval(t: f64) -> Result<()> {
    if (-1.0..=1.0).contains(&t) {
        Ok(())
    } else {
        Err(Error::Range {
            what: "t",
            value: t,
            domain: "[-1, 1]",
        })
    }
}

/// A profile together with the ambient dimension `n >= 2`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DimensionedProfile {
    pub profile: Profile,
    pub n: usize,
}

impl DimensionedProfile {
    pub fn new(profile: Profile, n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::Parameter(format!(
                "dimension n must be >= 2, got {n}"
            )));
        }
        Ok(Self { profile, n })
    }

    pub fn nf(&self) -> f64 {
        self.n as f64
    }

    /// Errors with the first violated condition on the default grid.
    pub fn ensure_valid(&self) -> Result<()> {
        let report = validate(self, DEFAULT_VALIDATION_POINTS)?;
        match report.violations.first() {
            None => Ok(()),
            Some(v) => Err(Error::InvalidProfile(format!(
                "{} fails at t = {} (value {:e})",
                v.condition.describe(),
                v.t,
                v.value
            ))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Condition {
    EtaPositive,
    A1Positive,
    A2Positive,
    Even,
}

impl Condition {
    pub fn describe(&self) -> &'static str {
        match self {
            Condition::EtaPositive => "positivity of eta",
            Condition::A1Positive => "positivity of A1",
            Condition::A2Positive => "positivity of A2",
            Condition::Even => "evenness of eta",
        }
    }
}

/// Worst offending point for one violated condition.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub condition: Condition,
    pub t: f64,
    pub value: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub n: usize,
    pub grid_points: usize,
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Chebyshev-Lobatto grid of `points` nodes, including both endpoints.
pub fn chebyshev_grid(points: usize) -> Vec<f64> {
    let last = (points - 1) as f64;
    (0..points)
        .map(|j| match j {
            0 => 1.0,
            j if j == points - 1 => -1.0,
            // sin form keeps the grid exactly symmetric with 0 on odd grids
            j => (std::f64::consts::PI * (last - 2.0 * j as f64) / (2.0 * last)).sin(),
        })
        .collect()
}

/// Checks `eta > 0`, `A1 > 0`, `A2 > 0` and, for symmetric profiles,
/// evenness on a Chebyshev grid.
pub fn validate(dprofile: &DimensionedProfile, grid_points: usize) -> Result<ValidationReport> {
    if grid_points < 3 {
        return Err(Error::Parameter(format!(
            "validation grid needs at least 3 points, got {grid_points}"
        )));
    }
    let profile = &dprofile.profile;
    let mut worst: [Option<Violation>; 4] = Default::default();
    let mut record = |slot: usize, condition: Condition, t: f64, value: f64, bad: bool| {
        if !bad {
            return;
        }
        let replace = match &worst[slot] {
            None => true,
            Some(v) if condition == Condition::Even => value > v.value,
            Some(v) => value < v.value,
        };
        if replace {
            worst[slot] = Some(Violation {
                condition,
                t,
                value,
            });
        }
    };

    for t in chebyshev_grid(grid_points) {
        let jet = profile.jet(t);
        let (a1, a2) = (jet.a1(t), jet.a2(t));
        let finite = jet.value.is_finite() && a1.is_finite() && a2.is_finite();
        record(
            0,
            Condition::EtaPositive,
            t,
            jet.value,
            !finite || jet.value <= POSITIVITY_MARGIN,
        );
        record(
            1,
            Condition::A1Positive,
            t,
            a1,
            !finite || a1 <= POSITIVITY_MARGIN,
        );
        record(
            2,
            Condition::A2Positive,
            t,
            a2,
            !finite || a2 <= POSITIVITY_MARGIN,
        );
        if profile.is_symmetric() {
            let mirrored = profile.jet(-t).value;
            let asym = (jet.value - mirrored).abs();
            record(
                3,
                Condition::Even,
                t,
                asym,
                asym > POSITIVITY_MARGIN * jet.value.abs().max(1.0),
            );
        }
    }

    Ok(ValidationReport {
        n: dprofile.n,
        grid_points,
        violations: worst.into_iter().flatten().collect(),
    })
}
