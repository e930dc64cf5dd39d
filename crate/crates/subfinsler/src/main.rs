use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Parser, Subcommand};
use serde::Serialize;
use subfinsler::commands::{self, IntegrateOptions};
use subfinsler::problem::{Problem, ProblemFile};
use subfinsler::{CliError, Result};
use subfinsler_core::catalog::{AlgebraFamily, Family};

/// Abnormal extremals of left-invariant sub-Finsler quasimetrics on
/// four-dimensional Lie groups.
#[derive(Parser)]
#[command(name = "subfinsler", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Print the report as JSON.
    #[arg(long, global = true)]
    json: bool,
    /// Tolerance of the support-function equalities.
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Seed of the random census.
    #[arg(long, global = true, default_value_t = 1)]
    seed: u64,
}

#[derive(Subcommand)]
enum Command {
    /// Check the algebra and the subspace, print q ∩ N(q) and the frame.
    Validate { file: PathBuf },
    /// Decide whether the abnormal extremals are strongly abnormal.
    Classify { file: PathBuf },
    /// Integrate the adjoint system along an abnormal extremal.
    Integrate {
        file: PathBuf,
        #[arg(long, default_value_t = 1.0)]
        t_end: f64,
        #[arg(long, default_value_t = 1e-3)]
        step: f64,
        /// ψ(0) in the adapted frame, comma separated.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, default_value = "0,0,0,1")]
        psi0: Vec<f64>,
        /// Sign s of the extremal.
        #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
        sign: f64,
    },
    /// Count equivalence classes of generating subspaces by sampling.
    Survey {
        /// Catalog family; all representatives when omitted.
        #[arg(long)]
        family: Option<String>,
        #[arg(long, num_args = 0.., allow_negative_numbers = true)]
        params: Vec<f64>,
        #[arg(long, default_value_t = 2000)]
        n: usize,
    },
    /// List the catalog at its representative parameters.
    Catalog,
}

fn load(file: &Path, tol: Option<f64>) -> Result<Problem> {
    let mut problem = ProblemFile::read(file)?.resolve()?;
    if let Some(t) = tol {
        if !(t > 0.0 && t.is_finite()) {
            return Err(CliError::Parse("--tol must be positive".into()));
        }
        problem.support_tol = t;
    }
    Ok(problem)
}

fn emit<T: Serialize + std::fmt::Display>(report: &T, json: bool) -> Result<()> {
    let text = if json { serde_json::to_string_pretty(report)? + "\n" } else { report.to_string() };
    let mut out = std::io::stdout().lock();
    // a closed pipe is not an error of the computation
    let _ = out.write_all(text.as_bytes());
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Validate { file } => emit(&commands::validate(&load(&file, cli.tol)?)?, cli.json),
        Command::Classify { file } => emit(&commands::classify(&load(&file, cli.tol)?)?, cli.json),
        Command::Integrate { file, t_end, step, psi0, sign } => {
            let psi0: [f64; 4] =
                psi0.try_into().map_err(|_| CliError::Parse("--psi0 needs four comma-separated values".into()))?;
            let opts = IntegrateOptions { t_end, step, psi0, s: sign };
            emit(&commands::integrate(&load(&file, cli.tol)?, &opts)?, cli.json)
        }
        Command::Survey { family, params, n } => {
            let targets = match family {
                Some(name) => {
                    let f = Family::from_str(&name).map_err(|_| CliError::Parse(format!("unknown family {name:?}")))?;
                    vec![AlgebraFamily::new(f, &params)?]
                }
                None => AlgebraFamily::representatives(),
            };
            let report = commands::survey(&targets, n, cli.seed);
            emit(&report, cli.json)?;
            if report.ok() {
                Ok(())
            } else {
                let bad: Vec<String> =
                    report.families.iter().filter(|f| !f.ok()).map(|f| f.summary()).collect();
                Err(CliError::CensusMismatch(bad.join("; ")))
            }
        }
        Command::Catalog => emit(&commands::catalog(), cli.json),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
