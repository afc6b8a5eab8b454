//! `inequality`: local `L^p` deficits of `h_K` and of seeded random test
//! functions, plus the strengthened logarithmic form at `p = 0`.
//!
//! CSV columns: `profile_id, n, function, seed, p, deficit, margin,
//! tolerance, certified, passed, strengthened, strengthened_margin,
//! stab_m1 .. stab_m{m_max}`. The `stab_m*` columns hold the stability terms
//! `c_m/n int (pi_m f)^2/h_K dS_K`; they are empty when the constants are
//! not defined (non-symmetric profile or `n = 2`).

use revgap_core::geometry::{
    local_lp_deficit, strengthened_deficit, BodyContext, InequalityReport, TestFunction,
};
use serde::Serialize;

use super::{Outcome, Run};
use crate::output::{self, float, opt_float};
use crate::random::random_test_function;
use crate::spec::Format;
use crate::CliError;

/// Whether the local `L^p` inequality is asserted at `p`. It is established
/// for `p in [0, 1]`; other exponents are reported without assertion.
pub fn certified(p: f64) -> bool {
    (0.0..=1.0).contains(&p)
}

#[derive(Clone, Debug, Serialize)]
pub struct InequalityRow {
    pub profile_id: String,
    pub n: usize,
    /// `"h_K"` or `"random"`.
    pub function: String,
    pub seed: Option<u64>,
    pub p: f64,
    pub certified: bool,
    pub report: InequalityReport,
    /// Strengthened form, evaluated on the `p = 0` rows when defined.
    pub strengthened: Option<InequalityReport>,
}

#[derive(Debug, Serialize)]
pub struct CellError {
    pub profile_id: String,
    pub n: usize,
    pub seed: Option<u64>,
    pub error: String,
}

#[derive(Debug, Default, Serialize)]
pub struct InequalityReportSet {
    pub rows: Vec<InequalityRow>,
    pub errors: Vec<CellError>,
}

enum Function {
    Support,
    Random(u64),
}

fn evaluate(
    run: &Run,
    id: &str,
    body: &BodyContext,
    which: &Function,
) -> revgap_core::Result<Vec<InequalityRow>> {
    let (f, name, seed): (TestFunction, &str, Option<u64>) = match *which {
        Function::Support => (body.support_function(), "h_K", None),
        Function::Random(seed) => (random_test_function(body, seed)?, "random", Some(seed)),
    };
    let with_strengthened = body.dprofile().profile.is_symmetric() && body.n() >= 3;
    run.spec
        .p_list
        .iter()
        .map(|&p| {
            let report = local_lp_deficit(body, &f, p)?;
            let strengthened = if p == 0.0 && with_strengthened {
                Some(strengthened_deficit(body, &f)?)
            } else {
                None
            };
            Ok(InequalityRow {
                profile_id: id.to_string(),
                n: body.n(),
                function: name.to_string(),
                seed,
                p,
                certified: certified(p),
                report,
                strengthened,
            })
        })
        .collect()
}

pub fn compute(run: &Run) -> InequalityReportSet {
    let spec = &run.spec;
    let bodies = run.map(spec.bodies(), |(entry, n)| {
        (
            entry.id.clone(),
            n,
            BodyContext::new(entry.in_dimension(n), spec.m_max, spec.basis_size),
        )
    });
    let mut set = InequalityReportSet::default();
    let mut cells = Vec::new();
    for (id, n, body) in &bodies {
        match body {
            Ok(body) => {
                cells.push((id.as_str(), body, Function::Support));
                for &seed in &spec.seeds {
                    cells.push((id.as_str(), body, Function::Random(seed)));
                }
            }
            Err(e) => set.errors.push(CellError {
                profile_id: id.clone(),
                n: *n,
                seed: None,
                error: e.to_string(),
            }),
        }
    }
    let results = run.map(cells, |(id, body, which)| {
        evaluate(run, id, body, &which).map_err(|e| CellError {
            profile_id: id.to_string(),
            n: body.n(),
            seed: match which {
                Function::Support => None,
                Function::Random(s) => Some(s),
            },
            error: e.to_string(),
        })
    });
    for r in results {
        match r {
            Ok(rows) => set.rows.extend(rows),
            Err(e) => set.errors.push(e),
        }
    }
    set
}

fn describe(row: &InequalityRow) -> String {
    match row.seed {
        Some(seed) => format!(
            "profile {} (n = {}, seed {seed}, p = {})",
            row.profile_id, row.n, row.p
        ),
        None => format!(
            "profile {} (n = {}, {}, p = {})",
            row.profile_id, row.n, row.function, row.p
        ),
    }
}

pub fn assess(set: &InequalityReportSet, outcome: &mut Outcome) {
    for e in &set.errors {
        let seed = e.seed.map(|s| format!(", seed {s}")).unwrap_or_default();
        outcome.fail(format!(
            "profile {} (n = {}{seed}): {}",
            e.profile_id, e.n, e.error
        ));
    }
    for row in &set.rows {
        let r = &row.report;
        if row.certified && !r.passed {
            outcome.fail(format!(
                "{}: deficit {:e} exceeds tolerance {:e}",
                describe(row),
                r.deficit,
                r.tolerance
            ));
        }
        if row.function == "h_K" && r.deficit.abs() > r.tolerance {
            outcome.fail(format!(
                "{}: equality case has deficit {:e}",
                describe(row),
                r.deficit
            ));
        }
        if let Some(s) = &row.strengthened {
            if !s.passed {
                outcome.fail(format!(
                    "{}: strengthened form {:e} exceeds tolerance {:e}",
                    describe(row),
                    s.strengthened.unwrap_or(f64::NAN),
                    s.tolerance
                ));
            }
        }
        if r.suspicious {
            outcome.warn(format!(
                "{}: equality reached by a non-zonal function",
                describe(row)
            ));
        }
    }
}

pub fn csv_header(m_max: usize) -> Vec<String> {
    let mut h: Vec<String> = [
        "profile_id",
        "n",
        "function",
        "seed",
        "p",
        "deficit",
        "margin",
        "tolerance",
        "certified",
        "passed",
        "strengthened",
        "strengthened_margin",
    ]
    .iter()
    .map(|s| s.to_string())
    .collect();
    h.extend((1..=m_max).map(|m| format!("stab_m{m}")));
    h
}

pub fn csv_rows(set: &InequalityReportSet, m_max: usize) -> Vec<Vec<String>> {
    set.rows
        .iter()
        .map(|row| {
            let r = &row.report;
            let mut out = vec![
                row.profile_id.clone(),
                row.n.to_string(),
                row.function.clone(),
                row.seed.map(|s| s.to_string()).unwrap_or_default(),
                float(row.p),
                float(r.deficit),
                float(r.margin),
                float(r.tolerance),
                row.certified.to_string(),
                r.passed.to_string(),
                opt_float(row.strengthened.as_ref().and_then(|s| s.strengthened)),
                opt_float(row.strengthened.as_ref().map(|s| s.margin)),
            ];
            out.extend(
                (1..=m_max).map(|m| {
                    opt_float(r.per_m_stability.iter().find(|s| s.m == m).map(|s| s.term))
                }),
            );
            out
        })
        .collect()
}

pub fn write(run: &Run, set: &InequalityReportSet, outcome: &mut Outcome) -> Result<(), CliError> {
    let dir = run.out_dir();
    let m_max = run.spec.m_max;
    if run.spec.wants(Format::Json) {
        outcome
            .files
            .push(output::write_json(dir, "inequality.json", set)?);
    }
    if run.spec.wants(Format::Csv) {
        outcome.files.push(output::write_csv(
            dir,
            "inequality.csv",
            &csv_header(m_max),
            &csv_rows(set, m_max),
        )?);
    }
    Ok(())
}

pub fn run(run: &Run) -> Result<Outcome, CliError> {
    let set = compute(run);
    let mut outcome = Outcome::default();
    assess(&set, &mut outcome);
    write(run, &set, &mut outcome)?;
    Ok(outcome)
}
