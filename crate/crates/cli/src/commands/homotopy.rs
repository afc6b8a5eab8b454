//! `homotopy`: the parity-split suprema along `eta_s = 1 - s + s eta`.
//!
//! CSV columns: `profile_id, n, m, s, sup_a, sup_b, f, both_above_bound`.

use revgap_core::spectral::{ball_f0, homotopy_scan, HomotopyScan};
use serde::Serialize;

use super::{Outcome, Run};
use crate::output::{self, float};
use crate::spec::Format;
use crate::CliError;

/// Agreement required between `F(0)` and its closed form.
pub const F0_TOLERANCE: f64 = 1e-8;

#[derive(Debug, Serialize)]
pub struct HomotopyCell {
    pub profile_id: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub scan: Option<HomotopyScan>,
    /// Closed-form value of `F(0)`.
    pub f0_expected: f64,
    /// Sign of `F` at the first and last grid points.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub endpoint_signs: Option<(i8, i8)>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    pub n: usize,
    pub m: usize,
}

fn sign(x: f64) -> i8 {
    if x > 0.0 {
        1
    } else if x < 0.0 {
        -1
    } else {
        0
    }
}

pub fn compute(run: &Run) -> Vec<HomotopyCell> {
    let spec = &run.spec;
    let cells: Vec<_> = spec
        .bodies()
        .into_iter()
        .flat_map(|(entry, n)| (0..=spec.m_max).map(move |m| (entry, n, m)))
        .collect();
    run.map(cells, |(entry, n, m)| {
        let scan = homotopy_scan(
            &entry.in_dimension(n),
            m,
            &spec.s_grid,
            spec.basis_size,
            spec.tolerance,
        );
        let (scan, error) = match scan {
            Ok(s) => (Some(s), None),
            Err(e) => (None, Some(e.to_string())),
        };
        let endpoint_signs = scan.as_ref().and_then(|s| {
            let first = s.points.first()?;
            let last = s.points.last()?;
            Some((sign(first.f), sign(last.f)))
        });
        HomotopyCell {
            profile_id: entry.id.clone(),
            n,
            m,
            f0_expected: ball_f0(n, m),
            endpoint_signs,
            scan,
            error,
        }
    })
}

pub fn assess(cells: &[HomotopyCell], outcome: &mut Outcome) {
    for c in cells {
        let at = format!("profile {} (n = {}, m = {})", c.profile_id, c.n, c.m);
        let Some(scan) = &c.scan else {
            outcome.fail(format!("{at}: {}", c.error.as_deref().unwrap_or("no scan")));
            continue;
        };
        for p in &scan.points {
            if !(p.f.is_finite() && p.sup_a.is_finite() && p.sup_b.is_finite()) {
                outcome.fail(format!("{at}: non-finite suprema at s = {}", p.s));
            }
            if p.both_above_bound {
                outcome.fail(format!(
                    "{at}: both suprema {:e}, {:e} exceed {:e} at s = {}",
                    p.sup_a, p.sup_b, scan.bound, p.s
                ));
            }
            if p.s == 0.0 && (p.f - c.f0_expected).abs() > F0_TOLERANCE {
                outcome.fail(format!(
                    "{at}: F(0) = {:e}, expected {:e}",
                    p.f, c.f0_expected
                ));
            }
            if p.s == 1.0 {
                let limit = scan.bound + scan.tolerance;
                if p.sup_a > limit || p.sup_b > limit {
                    outcome.fail(format!(
                        "{at}: endpoint suprema {:e}, {:e} exceed {:e}",
                        p.sup_a, p.sup_b, limit
                    ));
                }
            }
        }
    }
}

pub const CSV_HEADER: [&str; 8] = [
    "profile_id",
    "n",
    "m",
    "s",
    "sup_a",
    "sup_b",
    "f",
    "both_above_bound",
];

fn csv_rows(cells: &[HomotopyCell]) -> Vec<Vec<String>> {
    cells
        .iter()
        .filter_map(|c| c.scan.as_ref().map(|s| (c, s)))
        .flat_map(|(c, scan)| {
            scan.points.iter().map(move |p| {
                vec![
                    c.profile_id.clone(),
                    c.n.to_string(),
                    c.m.to_string(),
                    float(p.s),
                    float(p.sup_a),
                    float(p.sup_b),
                    float(p.f),
                    p.both_above_bound.to_string(),
                ]
            })
        })
        .collect()
}

pub fn write(run: &Run, cells: &[HomotopyCell], outcome: &mut Outcome) -> Result<(), CliError> {
    let dir = run.out_dir();
    if run.spec.wants(Format::Json) {
        outcome
            .files
            .push(output::write_json(dir, "homotopy.json", &cells)?);
    }
    if run.spec.wants(Format::Csv) {
        let header: Vec<String> = CSV_HEADER.iter().map(|s| s.to_string()).collect();
        outcome.files.push(output::write_csv(
            dir,
            "homotopy.csv",
            &header,
            &csv_rows(cells),
        )?);
    }
    Ok(())
}

pub fn run(run: &Run) -> Result<Outcome, CliError> {
    let cells = compute(run);
    let mut outcome = Outcome::default();
    assess(&cells, &mut outcome);
    write(run, &cells, &mut outcome)?;
    Ok(outcome)
}
