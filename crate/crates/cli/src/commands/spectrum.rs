//! `spectrum`: gap reports for every `(profile, n, m)`, each repeated at
//! twice the basis size to detect under-resolution.

use revgap_core::spectral::{gap_report, refinement_difference, summarize, GapReport, GapSummary};
use serde::Serialize;

use super::{Outcome, Run};
use crate::output::{self, float};
use crate::spec::Format;
use crate::CliError;

/// Largest change of the reported eigenvalues between `N` and `2N` before a
/// convergence warning is recorded.
pub const CONVERGENCE_TOLERANCE: f64 = 1e-6;

#[derive(Debug, Serialize)]
pub struct SpectrumCell {
    pub profile_id: String,
    pub n: usize,
    pub m: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub report: Option<GapReport>,
    /// `max_nontrivial` at twice the basis size.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub refined_max_nontrivial: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub refinement_difference: Option<f64>,
    pub converged: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Debug, Serialize)]
pub struct BodySummary {
    pub profile_id: String,
    #[serde(flatten)]
    pub summary: GapSummary,
}

#[derive(Debug, Serialize)]
pub struct SpectrumReport {
    pub cells: Vec<SpectrumCell>,
    pub summaries: Vec<BodySummary>,
}

pub fn compute(run: &Run) -> SpectrumReport {
    let spec = &run.spec;
    let (size, tol) = (spec.basis_size, spec.tolerance);
    let cells: Vec<_> = spec
        .bodies()
        .into_iter()
        .flat_map(|(entry, n)| (0..=spec.m_max).map(move |m| (entry, n, m)))
        .collect();
    let cells = run.map(cells, |(entry, n, m)| {
        let dp = entry.in_dimension(n);
        let both = gap_report(&dp, m, size, tol)
            .and_then(|coarse| gap_report(&dp, m, 2 * size, tol).map(|fine| (coarse, fine)));
        match both {
            Ok((coarse, fine)) => {
                let diff = refinement_difference(&coarse, &fine);
                SpectrumCell {
                    profile_id: entry.id.clone(),
                    n,
                    m,
                    refined_max_nontrivial: Some(fine.max_nontrivial),
                    refinement_difference: Some(diff),
                    converged: diff <= CONVERGENCE_TOLERANCE,
                    report: Some(coarse),
                    error: None,
                }
            }
            Err(e) => SpectrumCell {
                profile_id: entry.id.clone(),
                n,
                m,
                report: None,
                refined_max_nontrivial: None,
                refinement_difference: None,
                converged: false,
                error: Some(format!("profile {} (n = {n}, m = {m}): {e}", entry.id)),
            },
        }
    });
    let summaries = spec
        .bodies()
        .into_iter()
        .filter_map(|(entry, n)| {
            let reports: Vec<GapReport> = cells
                .iter()
                .filter(|c| c.profile_id == entry.id && c.n == n)
                .map(|c| c.report.clone())
                .collect::<Option<_>>()?;
            Some(BodySummary {
                profile_id: entry.id.clone(),
                summary: summarize(&entry.in_dimension(n), spec.m_max, size, tol, reports),
            })
        })
        .collect();
    SpectrumReport { cells, summaries }
}

pub fn assess(report: &SpectrumReport, outcome: &mut Outcome) {
    for c in &report.cells {
        if let Some(e) = &c.error {
            outcome.fail(e.clone());
            continue;
        }
        let r = c
            .report
            .as_ref()
            .expect("cells without error carry a report");
        if !r.passed {
            outcome.fail(format!(
                "profile {} (n = {}, m = {}): nontrivial eigenvalue {:e} exceeds bound {:e} + {:e}",
                c.profile_id, c.n, c.m, r.max_nontrivial, r.bound, r.tolerance
            ));
        }
        if !c.converged {
            outcome.warn(format!(
                "profile {} (n = {}, m = {}): eigenvalues change by {:e} from N = {} to N = {}",
                c.profile_id,
                c.n,
                c.m,
                c.refinement_difference.unwrap_or(f64::NAN),
                r.basis_size,
                2 * r.basis_size
            ));
        }
    }
}

/// Eigenvalue table: one row per reported eigenvalue.
pub const TABLE_HEADER: [&str; 7] = [
    "profile_id",
    "n",
    "m",
    "index",
    "eigenvalue",
    "trivial",
    "angle",
];

/// One row per `(profile, n, m)`.
pub const SUMMARY_HEADER: [&str; 10] = [
    "profile_id",
    "n",
    "m",
    "basis_size",
    "max_nontrivial",
    "bound",
    "gap_margin",
    "refinement_difference",
    "converged",
    "passed",
];

fn table_rows(report: &SpectrumReport) -> Vec<Vec<String>> {
    let mut rows = Vec::new();
    for c in &report.cells {
        let Some(r) = &c.report else { continue };
        for (i, &lambda) in r.eigenvalues.iter().enumerate() {
            let trivial = r.trivial.iter().find(|t| t.index == i);
            rows.push(vec![
                c.profile_id.clone(),
                c.n.to_string(),
                c.m.to_string(),
                i.to_string(),
                float(lambda),
                trivial
                    .map(|t| t.target.label().to_string())
                    .unwrap_or_default(),
                output::opt_float(trivial.map(|t| t.angle)),
            ]);
        }
    }
    rows
}

fn summary_rows(report: &SpectrumReport) -> Vec<Vec<String>> {
    report
        .cells
        .iter()
        .filter_map(|c| {
            let r = c.report.as_ref()?;
            Some(vec![
                c.profile_id.clone(),
                c.n.to_string(),
                c.m.to_string(),
                r.basis_size.to_string(),
                float(r.max_nontrivial),
                float(r.bound),
                float(r.gap_margin),
                output::opt_float(c.refinement_difference),
                c.converged.to_string(),
                r.passed.to_string(),
            ])
        })
        .collect()
}

fn header(h: &[&str]) -> Vec<String> {
    h.iter().map(|s| s.to_string()).collect()
}

pub fn run(run: &Run) -> Result<Outcome, CliError> {
    let report = compute(run);
    let mut outcome = Outcome::default();
    assess(&report, &mut outcome);
    write(run, &report, &mut outcome)?;
    Ok(outcome)
}

pub fn write(run: &Run, report: &SpectrumReport, outcome: &mut Outcome) -> Result<(), CliError> {
    let dir = run.out_dir();
    if run.spec.wants(Format::Json) {
        outcome
            .files
            .push(output::write_json(dir, "spectrum.json", report)?);
    }
    if run.spec.wants(Format::Csv) {
        outcome.files.push(output::write_csv(
            dir,
            "spectrum.csv",
            &header(&TABLE_HEADER),
            &table_rows(report),
        )?);
        outcome.files.push(output::write_csv(
            dir,
            "spectrum_summary.csv",
            &header(&SUMMARY_HEADER),
            &summary_rows(report),
        )?);
    }
    Ok(())
}
