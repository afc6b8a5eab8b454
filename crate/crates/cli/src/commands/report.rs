//! `report`: every other subcommand plus the identity suite, gathered in
//! `report.json`.

use num_rational::Rational64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use revgap_core::geometry::{kubota_check, KubotaReport};
use revgap_core::spectral::{
    cs_bound_check, frobenius, orthogonal_space_identity, CsBoundReport, FrobeniusReport,
    OrthogonalSpaceIdentity,
};
use revgap_core::{DimensionedProfile, Error};
use serde::Serialize;

use super::{homotopy, inequality, spectrum, validate, Outcome, Run};
use crate::output;
use crate::random::RANDOM_COEFFICIENTS;
use crate::spec::Format;
use crate::CliError;

pub const KUBOTA_TOLERANCE: f64 = 1e-10;
pub const CAP_HEIGHT_TOLERANCE: f64 = 1e-9;
pub const CAP_HEIGHT_POINTS: usize = 1001;
/// Relative to `max(scale, 1)`.
pub const IDENTITY_TOLERANCE: f64 = 1e-8;

#[derive(Debug, Serialize)]
pub struct CapHeightReport {
    pub points: usize,
    /// `max_t |eta - A1 (1 - t^2) - L_K(t)|`.
    pub max_error: f64,
    /// Smallest value of `eta - A1 (1 - t^2)`; nonnegative for convex `K`.
    pub min_gap: f64,
}

#[derive(Debug, Serialize)]
pub struct FrobeniusCheck {
    pub report: FrobeniusReport,
    pub indices_match: bool,
    pub roots_vanish: bool,
    pub logarithmic_expected: bool,
}

#[derive(Debug, Serialize)]
pub struct IdentityCell {
    pub profile_id: String,
    pub n: usize,
    pub kubota: Option<KubotaReport>,
    pub cap_height: Option<CapHeightReport>,
    pub orthogonal_space: Vec<OrthogonalSpaceIdentity>,
    pub cauchy_schwarz: Vec<CsBoundReport>,
    pub frobenius: Vec<FrobeniusCheck>,
    pub errors: Vec<String>,
}

fn cap_height(dp: &DimensionedProfile) -> revgap_core::Result<CapHeightReport> {
    let mut max_error: f64 = 0.0;
    let mut min_gap = f64::INFINITY;
    for i in 0..CAP_HEIGHT_POINTS {
        let t = -1.0 + 2.0 * i as f64 / (CAP_HEIGHT_POINTS - 1) as f64;
        let gap = dp.profile.rk_hk_gap(t)?;
        max_error = max_error.max((gap - dp.profile.cap_height(t)?).abs());
        min_gap = min_gap.min(gap);
    }
    Ok(CapHeightReport {
        points: CAP_HEIGHT_POINTS,
        max_error,
        min_gap,
    })
}

fn frobenius_check(n: usize, m: usize) -> FrobeniusCheck {
    let report = frobenius(n, m);
    let second = Rational64::new(-(2 * m as i64 + n as i64 - 3), 2);
    FrobeniusCheck {
        indices_match: report.indices == (Rational64::from_integer(0), second),
        roots_vanish: report.indicial(report.indices.0) == Rational64::from_integer(0)
            && report.indicial(report.indices.1) == Rational64::from_integer(0),
        logarithmic_expected: (n, m) == (3, 0),
        report,
    }
}

fn random_coefficients(seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..RANDOM_COEFFICIENTS)
        .map(|_| rng.random_range(-1.0..=1.0))
        .collect()
}

fn identities(run: &Run, id: &str, dp: DimensionedProfile) -> IdentityCell {
    let spec = &run.spec;
    let mut cell = IdentityCell {
        profile_id: id.to_string(),
        n: dp.n,
        kubota: None,
        cap_height: None,
        orthogonal_space: Vec::new(),
        cauchy_schwarz: Vec::new(),
        frobenius: (0..=spec.m_max).map(|m| frobenius_check(dp.n, m)).collect(),
        errors: Vec::new(),
    };
    match kubota_check(&dp) {
        Ok(r) => cell.kubota = Some(r),
        Err(e) => cell.errors.push(format!("kubota: {e}")),
    }
    if dp.profile.is_symmetric() {
        match cap_height(&dp) {
            Ok(r) => cell.cap_height = Some(r),
            Err(e) => cell.errors.push(format!("cap height: {e}")),
        }
    }
    for m in 1..=spec.m_max {
        for &seed in &spec.seeds {
            let coeffs = random_coefficients(seed);
            match orthogonal_space_identity(&dp, m, &coeffs) {
                Ok(r) => cell.orthogonal_space.push(r),
                Err(e) => cell.errors.push(format!(
                    "orthogonal-space identity (m = {m}, seed {seed}): {e}"
                )),
            }
            if !dp.profile.is_symmetric() {
                continue;
            }
            match cs_bound_check(&dp, m, &coeffs) {
                Ok(r) => cell.cauchy_schwarz.push(r),
                Err(Error::Unsupported(_)) => {}
                Err(e) => cell
                    .errors
                    .push(format!("Cauchy-Schwarz bound (m = {m}, seed {seed}): {e}")),
            }
        }
    }
    cell
}

pub fn compute_identities(run: &Run) -> Vec<IdentityCell> {
    run.map(run.spec.bodies(), |(entry, n)| {
        identities(run, &entry.id, entry.in_dimension(n))
    })
}

pub fn assess_identities(cells: &[IdentityCell], outcome: &mut Outcome) {
    for c in cells {
        let at = format!("profile {} (n = {})", c.profile_id, c.n);
        for e in &c.errors {
            outcome.fail(format!("{at}: {e}"));
        }
        if let Some(k) = &c.kubota {
            if !(k.relative_error <= KUBOTA_TOLERANCE) {
                outcome.fail(format!(
                    "{at}: Kubota identity off by {:e}",
                    k.relative_error
                ));
            }
        }
        if let Some(h) = &c.cap_height {
            if !(h.max_error <= CAP_HEIGHT_TOLERANCE) {
                outcome.fail(format!(
                    "{at}: cap height identity off by {:e}",
                    h.max_error
                ));
            }
        }
        for r in &c.orthogonal_space {
            if !(r.discrepancy() <= IDENTITY_TOLERANCE * r.scale.max(1.0)) {
                outcome.fail(format!(
                    "{at}: orthogonal-space identity (m = {}) off by {:e}",
                    r.m,
                    r.discrepancy()
                ));
            }
            if r.under_resolved {
                outcome.warn(format!(
                    "{at}: orthogonal-space identity (m = {}) under-resolved",
                    r.m
                ));
            }
        }
        for r in &c.cauchy_schwarz {
            if !r.holds {
                outcome.fail(format!(
                    "{at}: Cauchy-Schwarz bound (m = {}) violated by {:e}",
                    r.m, -r.slack
                ));
            }
        }
        for f in &c.frobenius {
            if !f.indices_match || !f.roots_vanish || f.report.logarithmic != f.logarithmic_expected
            {
                outcome.fail(format!(
                    "{at}: Frobenius indices wrong for m = {}",
                    f.report.m
                ));
            }
        }
    }
}

#[derive(Debug, Serialize)]
struct FullReport<'a> {
    failures: &'a [String],
    warnings: &'a [String],
    validation: &'a [validate::ValidationCell],
    spectrum: &'a spectrum::SpectrumReport,
    inequality: &'a inequality::InequalityReportSet,
    homotopy: &'a [homotopy::HomotopyCell],
    identities: &'a [IdentityCell],
}

pub fn run(run: &Run) -> Result<Outcome, CliError> {
    let mut outcome = Outcome::default();
    let validation = validate::cells(run);
    validate::assess(&validation, &mut outcome);
    let spectra = spectrum::compute(run);
    spectrum::assess(&spectra, &mut outcome);
    let ineq = inequality::compute(run);
    inequality::assess(&ineq, &mut outcome);
    let homotopy_cells = homotopy::compute(run);
    homotopy::assess(&homotopy_cells, &mut outcome);
    let ids = compute_identities(run);
    assess_identities(&ids, &mut outcome);

    spectrum::write(run, &spectra, &mut outcome)?;
    inequality::write(run, &ineq, &mut outcome)?;
    homotopy::write(run, &homotopy_cells, &mut outcome)?;
    if run.spec.wants(Format::Json) {
        let full = FullReport {
            failures: &outcome.failures,
            warnings: &outcome.warnings,
            validation: &validation,
            spectrum: &spectra,
            inequality: &ineq,
            homotopy: &homotopy_cells,
            identities: &ids,
        };
        let path = output::write_json(run.out_dir(), "report.json", &full)?;
        outcome.files.push(path);
    }
    Ok(outcome)
}
