//! Command-line front end: single-point evaluation, parameter sweeps and the
//! config property suite.
//!
//! Exit codes: 0 success, 2 configuration validation, 3 numerical
//! non-convergence, 4 internal invariant violation.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use stargraph_transport::config::{parse_config, RunConfig};
use stargraph_transport::run::{config_digest, run_check, run_point};
use stargraph_transport::sweep::run_sweep;
use stargraph_transport::Error;

const EXIT_VALIDATION: u8 = 2;
const EXIT_NON_CONVERGED: u8 = 3;
const EXIT_INVARIANT: u8 = 4;

#[derive(Parser)]
#[command(
    name = "stargraph",
    version,
    about = "Steady-state transport observables for quantum wire junctions on star graphs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct CommonArgs {
    /// Path to the TOML configuration.
    #[arg(long)]
    config: PathBuf,

    /// Output path; standard output when omitted.
    #[arg(long)]
    out: Option<PathBuf>,

    /// Worker threads for sweep grids (default: available parallelism).
    #[arg(long)]
    workers: Option<usize>,

    /// Allow density observables on couplings with bound-state channels.
    #[arg(long)]
    override_bound_states: bool,

    /// Override the quadrature relative tolerance.
    #[arg(long)]
    tol: Option<f64>,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate every requested observable at the configured parameters.
    Point(CommonArgs),
    /// Evaluate the configured sweep grid.
    Sweep(CommonArgs),
    /// Run the property suite (S-matrix laws, conservation sums, gauge
    /// invariance) against the configuration.
    Check(CommonArgs),
}

fn load(args: &CommonArgs) -> Result<(RunConfig, String), u8> {
    let text = std::fs::read_to_string(&args.config).map_err(|e| {
        eprintln!("error: cannot read {}: {e}", args.config.display());
        EXIT_VALIDATION
    })?;
    let digest = config_digest(&text);
    let mut cfg = parse_config(&text).map_err(|e| {
        eprint!("{e}");
        EXIT_VALIDATION
    })?;
    cfg.override_bound_states = args.override_bound_states;
    if let Some(tol) = args.tol {
        if !(tol > 0.0) {
            eprintln!("error: --tol must be positive, got {tol}");
            return Err(EXIT_VALIDATION);
        }
        cfg.quadrature.rel_tol = tol;
    }
    Ok((cfg, digest))
}

fn emit(args: &CommonArgs, text: &str) -> Result<(), u8> {
    match &args.out {
        None => {
            print!("{text}");
            Ok(())
        }
        Some(path) => std::fs::write(path, text).map_err(|e| {
            eprintln!("error: cannot write {}: {e}", path.display());
            EXIT_VALIDATION
        }),
    }
}

fn classify(err: &Error) -> u8 {
    match err {
        Error::Validation(_) | Error::Domain(_) => EXIT_VALIDATION,
        Error::NonConverged { .. } | Error::NonFiniteIntegrand { .. } => EXIT_NON_CONVERGED,
        Error::Internal(_) => EXIT_INVARIANT,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match &cli.command {
        Command::Point(args) => {
            match load(args) {
                Err(code) => code,
                Ok((cfg, digest)) => match run_point(&cfg, &digest) {
                    Err(e) => {
                        eprintln!("error: {e}");
                        classify(&e)
                    }
                    Ok(report) => {
                        if emit(args, &report.table.render()).is_err() {
                            EXIT_VALIDATION
                        } else if !report.invariants_ok {
                            eprintln!("error: an internal invariant (conservation sum) exceeded tolerance");
                            EXIT_INVARIANT
                        } else if !report.converged {
                            eprintln!("warning: at least one quadrature did not converge");
                            EXIT_NON_CONVERGED
                        } else {
                            0
                        }
                    }
                },
            }
        }
        Command::Sweep(args) => match load(args) {
            Err(code) => code,
            Ok((cfg, digest)) => match run_sweep(&cfg, &digest, args.workers) {
                Err(e) => {
                    eprintln!("error: {e}");
                    classify(&e)
                }
                Ok(report) => {
                    if emit(args, &report.table.render()).is_err() {
                        EXIT_VALIDATION
                    } else if report.failures > 0 || !report.converged {
                        eprintln!(
                            "warning: {} grid point(s) failed or did not converge",
                            report.failures
                        );
                        EXIT_NON_CONVERGED
                    } else {
                        0
                    }
                }
            },
        },
        Command::Check(args) => match load(args) {
            Err(code) => code,
            Ok((cfg, digest)) => match run_check(&cfg, &digest) {
                Err(e) => {
                    eprintln!("error: {e}");
                    classify(&e)
                }
                Ok(report) => {
                    if emit(args, &report.table.render()).is_err() {
                        EXIT_VALIDATION
                    } else if !report.all_passed {
                        eprintln!("error: property checks failed");
                        EXIT_INVARIANT
                    } else {
                        0
                    }
                }
            },
        },
    };
    ExitCode::from(code)
}
