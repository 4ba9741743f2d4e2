//! `expnet`: generate instances, build and check the closed-form weights, run
//! `expm`/`logm` on matrix files, and run the two-layer descent experiment.
//!
//! Exit codes: 0 success, 1 verification ran but a residual exceeded the
//! tolerance, 2 usage, 3 instance rejected, 4 I/O, 5 numerical failure.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use expnet::experiment::{Activation, GradientMode, Objective};
use expnet::Sampling;

mod commands;
mod exit;

use exit::Failure;

#[derive(Parser)]
#[command(
    name = "expnet",
    version,
    about = "Closed-form memorization with matrix-exponential networks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sample an admitted instance and write x1/x2/y1/y2 plus instance.json.
    Gen(GenArgs),
    /// Build the three-layer weights for an instance, verify them and write weights.json and report.json.
    Solve(SolveArgs),
    /// Evaluate W3 exp(W2 exp(W1 X)) for one input matrix.
    Eval(EvalArgs),
    /// Re-check stored weights against an instance and write report.json.
    Verify(VerifyArgs),
    /// Matrix exponential of a matrix file.
    Expm(MatfunArgs),
    /// Matrix logarithm of a matrix file; prints the expm roundtrip residual.
    Logm(LogmArgs),
    /// Gradient descent on the two-layer score; writes trace.csv and config.json.
    Experiment(ExperimentArgs),
}

fn positive_dim(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(0) => Err("dim must be at least 1".into()),
        Ok(d) => Ok(d),
        Err(e) => Err(e.to_string()),
    }
}

fn alpha_value(s: &str) -> Result<f64, String> {
    let a: f64 = s.parse().map_err(|e| format!("{e}"))?;
    expnet::solver::validate_alpha(a).map_err(|e| e.to_string())?;
    Ok(a)
}

fn positive_real(s: &str) -> Result<f64, String> {
    let x: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if x > 0.0 && x.is_finite() {
        Ok(x)
    } else {
        Err(format!("expected a positive number, got {s}"))
    }
}

fn unit_interval(s: &str) -> Result<f64, String> {
    let x = positive_real(s)?;
    if x < 1.0 {
        Ok(x)
    } else {
        Err(format!("expected a value in (0, 1), got {s}"))
    }
}

#[derive(Clone, Debug)]
struct Seeds(Vec<u64>);

/// `7`, `1,4,9` or an inclusive range `1..10`.
fn seed_list(s: &str) -> Result<Seeds, String> {
    let bad = |e: std::num::ParseIntError| format!("bad seed list `{s}`: {e}");
    if let Some((lo, hi)) = s.split_once("..") {
        let lo: u64 = lo.trim().parse().map_err(bad)?;
        let hi: u64 = hi.trim().trim_start_matches('=').parse().map_err(bad)?;
        if hi < lo {
            return Err(format!("empty seed range `{s}`"));
        }
        return Ok(Seeds((lo..=hi).collect()));
    }
    s.split(',')
        .map(|t| t.trim().parse().map_err(bad))
        .collect::<Result<_, _>>()
        .map(Seeds)
}

#[derive(Args)]
struct GenArgs {
    /// Matrix dimension d.
    #[arg(long, value_parser = positive_dim)]
    dim: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Entry distribution: complex-gaussian or real-gaussian. The construction
    /// is complex throughout, so complex entries are the default.
    #[arg(long, default_value = "complex-gaussian")]
    sampling: Sampling,
    /// Every matrix the construction inverts must have rcond above this;
    /// stands in for exact invertibility.
    #[arg(long, default_value_t = expnet::solver::DEFAULT_ADMISSION, value_parser = unit_interval)]
    admission: f64,
    /// Output directory.
    #[arg(long, default_value = ".")]
    out: PathBuf,
}

#[derive(Args)]
struct SolveArgs {
    /// Directory holding x1.json, x2.json, y1.json, y2.json.
    #[arg(long)]
    instance: PathBuf,
    /// Any positive alpha != 1 works; e makes ln(alpha) = 1.
    #[arg(long, default_value_t = expnet::solver::DEFAULT_ALPHA, value_parser = alpha_value)]
    alpha: f64,
    /// Relative residual each label must be reproduced to.
    #[arg(long, default_value_t = expnet::solver::DEFAULT_TOL, value_parser = positive_real)]
    tol: f64,
    /// Logarithm sheet for Z: 0 is principal, k adds 2 pi i k I.
    #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
    branch_offset: i64,
    #[arg(long, default_value_t = expnet::solver::DEFAULT_ADMISSION, value_parser = unit_interval)]
    admission: f64,
    /// Output directory for weights.json and report.json (defaults to the instance directory).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct EvalArgs {
    #[arg(long)]
    weights: PathBuf,
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long)]
    weights: PathBuf,
    #[arg(long)]
    instance: PathBuf,
    #[arg(long, default_value_t = expnet::solver::DEFAULT_TOL, value_parser = positive_real)]
    tol: f64,
    /// Report path (defaults to report.json beside the weights).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct MatfunArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct LogmArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    out: PathBuf,
    #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
    branch_offset: i64,
}

#[derive(Args)]
struct ExperimentArgs {
    #[arg(long, value_parser = positive_dim)]
    dim: usize,
    /// Seeds: `7`, `1,4,9` or inclusive range `1..10`.
    #[arg(long, value_parser = seed_list, default_value = "1..10")]
    seeds: Seeds,
    /// relu, sigmoid or identity.
    #[arg(long, default_value = "sigmoid")]
    activation: Activation,
    #[arg(long, default_value_t = expnet::experiment::DEFAULT_STEPS)]
    steps: usize,
    /// Learning rate. Unpublished in the source; defaults to 0.1 d on the
    /// score and 1e-3 d on the numerator.
    #[arg(long, value_parser = positive_real)]
    lr: Option<f64>,
    /// score (descend on s) or numerator (descend on the raw loss).
    #[arg(long, default_value = "score")]
    objective: Objective,
    /// analytic or finite-difference.
    #[arg(long, default_value = "analytic")]
    gradient: GradientMode,
    /// Instances with rcond(X2) and weights with rcond(s(W1 X2)) at or below
    /// this are redrawn; the source does not say how singular activations are handled.
    #[arg(long, default_value_t = expnet::experiment::DEFAULT_EXPERIMENT_RCOND, value_parser = unit_interval)]
    rcond_floor: f64,
    /// Output directory for trace.csv and config.json.
    #[arg(long, default_value = ".")]
    out: PathBuf,
}

fn run(cli: Cli) -> Result<ExitCode, Failure> {
    match cli.command {
        Command::Gen(a) => commands::gen(a),
        Command::Solve(a) => commands::solve(a),
        Command::Eval(a) => commands::eval(a),
        Command::Verify(a) => commands::verify(a),
        Command::Expm(a) => commands::expm(a),
        Command::Logm(a) => commands::logm(a),
        Command::Experiment(a) => commands::experiment(a),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
