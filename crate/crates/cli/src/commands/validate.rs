//! `validate`: checks every profile in every requested dimension.

use revgap_core::profile::{validate, ValidationReport, DEFAULT_VALIDATION_POINTS};
use serde::Serialize;

use super::{Outcome, Run};
use crate::output;
use crate::spec::Format;
use crate::CliError;

#[derive(Debug, Serialize)]
pub struct ValidationCell {
    pub profile_id: String,
    pub n: usize,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub report: Option<ValidationReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

pub fn cells(run: &Run) -> Vec<ValidationCell> {
    run.map(run.spec.bodies(), |(entry, n)| {
        match validate(&entry.in_dimension(n), DEFAULT_VALIDATION_POINTS) {
            Ok(report) => ValidationCell {
                profile_id: entry.id.clone(),
                n,
                passed: report.passed(),
                report: Some(report),
                error: None,
            },
            Err(e) => ValidationCell {
                profile_id: entry.id.clone(),
                n,
                passed: false,
                report: None,
                error: Some(e.to_string()),
            },
        }
    })
}

pub fn assess(cells: &[ValidationCell], outcome: &mut Outcome) {
    for c in cells {
        if let Some(e) = &c.error {
            outcome.fail(format!("profile {} (n = {}): {e}", c.profile_id, c.n));
        }
        for v in c.report.iter().flat_map(|r| &r.violations) {
            outcome.fail(format!(
                "profile {} (n = {}): {} fails at t = {} (value {:e})",
                c.profile_id,
                c.n,
                v.condition.describe(),
                v.t,
                v.value
            ));
        }
    }
}

pub fn run(run: &Run) -> Result<Outcome, CliError> {
    let cells = cells(run);
    let mut outcome = Outcome::default();
    assess(&cells, &mut outcome);
    if run.spec.wants(Format::Json) {
        outcome
            .files
            .push(output::write_json(run.out_dir(), "validate.json", &cells)?);
    }
    Ok(outcome)
}
