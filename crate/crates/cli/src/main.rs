use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use revgap_cli::{Command, ExperimentSpec, Overrides, Run, EXIT_INPUT};

/// Spectral-gap and local Brunn-Minkowski checks for bodies of revolution.
#[derive(Parser, Debug)]
#[command(name = "revgap", version)]
struct Args {
    #[arg(value_enum)]
    command: Command,
    /// Experiment spec (JSON).
    #[arg(long)]
    spec: PathBuf,
    /// Output directory; overrides `outputs.dir` of the spec.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Single dimension replacing `n_list`.
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    m_max: Option<usize>,
    #[arg(long)]
    basis_size: Option<usize>,
    #[arg(long)]
    tol: Option<f64>,
    /// Single seed replacing `seeds`.
    #[arg(long)]
    seed: Option<u64>,
    /// Worker threads; 0 uses all cores.
    #[arg(long, default_value_t = 0)]
    jobs: usize,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("REVGAP_LOG", "warn")).init();
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) => {
            let _ = e.print();
            let code = if e.use_stderr() { EXIT_INPUT } else { 0 };
            return ExitCode::from(code as u8);
        }
    };
    let overrides = Overrides {
        n: args.n,
        m_max: args.m_max,
        basis_size: args.basis_size,
        tol: args.tol,
        seed: args.seed,
    };
    let result = ExperimentSpec::load(&args.spec).and_then(|mut spec| {
        spec.apply(&overrides);
        Run::new(spec, args.out.clone(), args.jobs)?.execute(args.command)
    });
    match result {
        Ok(outcome) => {
            for f in &outcome.failures {
                eprintln!("FAIL {f}");
            }
            for w in &outcome.warnings {
                eprintln!("warning: {w}");
            }
            for p in &outcome.files {
                log::info!("wrote {}", p.display());
            }
            let code = outcome.exit_code();
            println!(
                "{:?}: {} failure(s), {} warning(s)",
                args.command,
                outcome.failures.len(),
                outcome.warnings.len()
            );
            ExitCode::from(code as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
