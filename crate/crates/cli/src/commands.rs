use std::path::Path;
use std::process::ExitCode;

use expnet::experiment::{default_learning_rate, run_experiment, ExperimentConfig};
use expnet::json::{self, InstanceManifest};
use expnet::matfun::logm_with_report;
use expnet::solver::{eval_three_layer, solve_three_layer_with, ProblemInstance, SolveReport};
use expnet::{BranchSpec, Error};

use crate::exit::{Failure, VERIFY_FAILED};
use crate::{EvalArgs, ExperimentArgs, GenArgs, LogmArgs, MatfunArgs, SolveArgs, VerifyArgs};

fn write_json<S: serde::Serialize>(path: &Path, value: &S) -> Result<(), Failure> {
    let text = serde_json::to_string_pretty(value).map_err(|e| Error::Io(e.to_string()))?;
    Ok(json::write_text(path, &text)?)
}

fn create_dir(dir: &Path) -> Result<(), Failure> {
    std::fs::create_dir_all(dir).map_err(|e| Error::Io(format!("{}: {e}", dir.display())))?;
    Ok(())
}

fn print_report(rep: &SolveReport) {
    println!("residual1 {:e}", rep.residual1);
    println!("residual2 {:e}", rep.residual2);
    for (name, r) in &rep.identity_checks {
        println!("{name} {r:e}");
    }
    println!("{}", if rep.pass { "pass" } else { "FAIL" });
}

fn verdict(rep: &SolveReport) -> ExitCode {
    if rep.pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(VERIFY_FAILED)
    }
}

pub fn gen(a: GenArgs) -> Result<ExitCode, Failure> {
    let (inst, attempts) = ProblemInstance::<f64>::sample(a.dim, a.seed, a.sampling, a.admission)?;
    let manifest = InstanceManifest {
        dim: a.dim,
        seed: a.seed,
        sampling: a.sampling,
        attempts,
        admission: a.admission,
        admitted: inst.is_admitted(a.admission),
        rconds: inst.rconds,
    };
    json::write_instance(&a.out, &inst, &manifest)?;
    println!(
        "wrote d={} instance to {} after {attempts} draw(s)",
        a.dim,
        a.out.display()
    );
    Ok(ExitCode::SUCCESS)
}

pub fn solve(a: SolveArgs) -> Result<ExitCode, Failure> {
    let inst = json::read_instance(&a.instance)?;
    let w = solve_three_layer_with(
        &inst,
        a.alpha,
        BranchSpec::new(a.branch_offset),
        a.admission,
    )?;
    let rep = expnet::verify(&w, &inst, a.tol)?;
    let out = a.out.unwrap_or_else(|| a.instance.clone());
    create_dir(&out)?;
    json::write_text(
        &out.join("weights.json"),
        &json::weights_to_json(&w, a.branch_offset)?,
    )?;
    write_json(&out.join("report.json"), &rep)?;
    print_report(&rep);
    Ok(verdict(&rep))
}

pub fn eval(a: EvalArgs) -> Result<ExitCode, Failure> {
    let (w, _) = json::weights_from_json(&json::read_text(&a.weights)?)?;
    let x = json::read_matrix(&a.input)?;
    let y = eval_three_layer(&w, &x)?;
    json::write_matrix(&a.out, &y)?;
    Ok(ExitCode::SUCCESS)
}

pub fn verify(a: VerifyArgs) -> Result<ExitCode, Failure> {
    let (w, _) = json::weights_from_json(&json::read_text(&a.weights)?)?;
    let inst = json::read_instance(&a.instance)?;
    let rep = expnet::verify(&w, &inst, a.tol)?;
    let out = a
        .out
        .unwrap_or_else(|| a.weights.with_file_name("report.json"));
    write_json(&out, &rep)?;
    print_report(&rep);
    Ok(verdict(&rep))
}

pub fn expm(a: MatfunArgs) -> Result<ExitCode, Failure> {
    let m = json::read_matrix(&a.input)?;
    json::write_matrix(&a.out, &expnet::expm(&m)?)?;
    Ok(ExitCode::SUCCESS)
}

pub fn logm(a: LogmArgs) -> Result<ExitCode, Failure> {
    let m = json::read_matrix(&a.input)?;
    let rep = logm_with_report(&m, BranchSpec::new(a.branch_offset))?;
    json::write_matrix(&a.out, &rep.log)?;
    println!("roundtrip residual {:e}", rep.roundtrip_residual);
    println!("tolerance {:e}", rep.tolerance);
    Ok(ExitCode::SUCCESS)
}

pub fn experiment(a: ExperimentArgs) -> Result<ExitCode, Failure> {
    let mut cfg = ExperimentConfig::new(a.dim, a.seeds.0, a.activation);
    cfg.steps = a.steps;
    cfg.objective = a.objective;
    cfg.learning_rate =
        a.lr.unwrap_or_else(|| default_learning_rate(a.dim, a.objective));
    cfg.gradient_mode = a.gradient;
    cfg.rcond_floor = a.rcond_floor;
    cfg.validate()?;

    let trace = run_experiment(&cfg)?;
    create_dir(&a.out)?;
    let csv_path = a.out.join("trace.csv");
    let file = std::fs::File::create(&csv_path)
        .map_err(|e| Error::Io(format!("{}: {e}", csv_path.display())))?;
    trace.write_csv(std::io::BufWriter::new(file))?;
    write_json(&a.out.join("config.json"), &cfg)?;

    println!("median initial s {}", trace.median_initial());
    println!("median final s {}", trace.median_final());
    println!(
        "divergent runs {}/{}",
        trace.divergent_count(),
        trace.runs.len()
    );
    println!("resamples {}", trace.resample_count());
    Ok(ExitCode::SUCCESS)
}
