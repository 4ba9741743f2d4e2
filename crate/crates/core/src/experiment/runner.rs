use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::experiment::objective::{
    baseline_denominator, finite_difference_gradient, loss_and_gradient, two_layer_loss, Activation,
};
use crate::matrix::Matrix;
use crate::random::{GaussianStream, Sampling};
use crate::solver::{ProblemInstance, MAX_RESAMPLES};

/// Default step count.
pub const DEFAULT_STEPS: usize = 2000;
/// Default floor on rcond of `X2` and of `s(W1 X2)`.
pub const DEFAULT_EXPERIMENT_RCOND: f64 = 1e-6;
/// Central-difference step for [`GradientMode::FiniteDifference`].
pub const FD_STEP: f64 = 1e-6;
/// A run whose final score exceeds this multiple of its initial score is divergent.
pub const DIVERGENCE_FACTOR: f64 = 10.0;

/// Quantity gradient descent is run on.
///
/// Both have the same minimizers; they differ only by the instance-dependent
/// constant `|| Y1 - Y2 X2^-1 X1 ||_F^2`, so a fixed learning rate means a
/// different step size per instance. The baseline grows quickly with `dim`
/// (10^3 to 10^5 at `dim = 16`), and with `Numerator` a rate that works at
/// small `dim` drives sigmoid units into saturation at larger `dim`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Objective {
    /// The score `s = loss / baseline`.
    Score,
    /// The raw loss `|| Y1 - Y2 s(W1 X2)^-1 s(W1 X1) ||_F^2`.
    Numerator,
}

impl std::str::FromStr for Objective {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "score" => Ok(Self::Score),
            "numerator" => Ok(Self::Numerator),
            other => Err(format!("unknown objective `{other}` (score, numerator)")),
        }
    }
}

/// Default learning rate: `0.1 * dim` on the score, `1e-3 * dim` on the numerator.
pub fn default_learning_rate(dim: usize, objective: Objective) -> f64 {
    match objective {
        Objective::Score => 0.1 * dim as f64,
        Objective::Numerator => 1e-3 * dim as f64,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GradientMode {
    Analytic,
    FiniteDifference,
}

impl std::str::FromStr for GradientMode {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "analytic" => Ok(Self::Analytic),
            "finite-difference" => Ok(Self::FiniteDifference),
            other => Err(format!(
                "unknown gradient mode `{other}` (analytic, finite-difference)"
            )),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub dim: usize,
    pub seeds: Vec<u64>,
    pub activation: Activation,
    pub steps: usize,
    pub learning_rate: f64,
    pub objective: Objective,
    pub gradient_mode: GradientMode,
    pub rcond_floor: f64,
}

impl ExperimentConfig {
    /// Config with the documented defaults for everything but `dim`, `seeds`
    /// and `activation`.
    pub fn new(dim: usize, seeds: Vec<u64>, activation: Activation) -> Self {
        Self {
            dim,
            seeds,
            activation,
            steps: DEFAULT_STEPS,
            learning_rate: default_learning_rate(dim, Objective::Score),
            objective: Objective::Score,
            gradient_mode: GradientMode::Analytic,
            rcond_floor: DEFAULT_EXPERIMENT_RCOND,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.dim == 0 {
            return Err(Error::InvalidParameter("dim must be positive".into()));
        }
        if self.seeds.is_empty() {
            return Err(Error::InvalidParameter(
                "at least one seed is required".into(),
            ));
        }
        if !(self.learning_rate > 0.0 && self.learning_rate.is_finite()) {
            return Err(Error::InvalidParameter(
                "learning rate must be positive".into(),
            ));
        }
        if !(self.rcond_floor > 0.0 && self.rcond_floor < 1.0) {
            return Err(Error::InvalidParameter(
                "rcond floor must lie in (0, 1)".into(),
            ));
        }
        Ok(())
    }
}

/// Score series of one seed. `scores[k]` is the score after `k` updates.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SeedRun {
    pub seed: u64,
    pub scores: Vec<f64>,
    /// `|| Y1 - Y2 X2^-1 X1 ||_F^2` of this seed's instance.
    pub baseline_denominator: f64,
    /// Rejected draws (instances or weights) before and during descent.
    pub resamples: usize,
    pub divergent: bool,
}

impl SeedRun {
    pub fn initial(&self) -> f64 {
        self.scores[0]
    }

    pub fn last(&self) -> f64 {
        *self.scores.last().expect("at least the initial score")
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentTrace {
    pub config: ExperimentConfig,
    /// One entry per seed, in the order of `config.seeds`.
    pub runs: Vec<SeedRun>,
}

pub fn median(values: &[f64]) -> f64 {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n == 0 {
        f64::NAN
    } else if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

impl ExperimentTrace {
    pub fn final_s(&self) -> Vec<f64> {
        self.runs.iter().map(SeedRun::last).collect()
    }

    pub fn initial_s(&self) -> Vec<f64> {
        self.runs.iter().map(SeedRun::initial).collect()
    }

    pub fn median_initial(&self) -> f64 {
        median(&self.initial_s())
    }

    pub fn median_final(&self) -> f64 {
        median(&self.final_s())
    }

    pub fn mean_at(&self, step: usize) -> f64 {
        self.runs.iter().map(|r| r.scores[step]).sum::<f64>() / self.runs.len() as f64
    }

    pub fn divergent_count(&self) -> usize {
        self.runs.iter().filter(|r| r.divergent).count()
    }

    pub fn resample_count(&self) -> usize {
        self.runs.iter().map(|r| r.resamples).sum()
    }

    /// Writes `seed,step,s` rows, seeds in config order.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let io = |e: csv::Error| Error::Io(e.to_string());
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["seed", "step", "s"]).map_err(io)?;
        for run in &self.runs {
            for (step, s) in run.scores.iter().enumerate() {
                w.write_record([run.seed.to_string(), step.to_string(), s.to_string()])
                    .map_err(io)?;
            }
        }
        w.flush().map_err(|e| io(e.into()))?;
        Ok(())
    }
}

struct Start {
    inst: ProblemInstance<f64>,
    w1: Matrix<f64>,
    denominator: f64,
}

fn draw_w1(stream: &mut GaussianStream, dim: usize) -> Matrix<f64> {
    stream.matrix_scaled(dim, Sampling::RealGaussian, 1.0 / (dim as f64).sqrt())
}

/// Draws an instance and an initial `W1` until both are usable.
fn draw_start(
    stream: &mut GaussianStream,
    cfg: &ExperimentConfig,
    resamples: &mut usize,
) -> Result<Start> {
    let d = cfg.dim;
    let mut consecutive = 0;
    loop {
        if consecutive == MAX_RESAMPLES {
            return Err(Error::MaxResample {
                attempts: MAX_RESAMPLES,
            });
        }
        let x1 = stream.matrix(d, Sampling::RealGaussian);
        let x2 = stream.matrix(d, Sampling::RealGaussian);
        let y1 = stream.matrix(d, Sampling::RealGaussian);
        let y2 = stream.matrix(d, Sampling::RealGaussian);
        let inst = ProblemInstance::new(x1, x2, y1, y2)?;
        let denominator = match baseline_denominator(&inst, cfg.rcond_floor) {
            Ok(den) => den,
            Err(Error::NearSingular { .. } | Error::DegenerateBaseline) => {
                consecutive += 1;
                *resamples += 1;
                continue;
            }
            Err(e) => return Err(e),
        };
        loop {
            if consecutive == MAX_RESAMPLES {
                return Err(Error::MaxResample {
                    attempts: MAX_RESAMPLES,
                });
            }
            let w1 = draw_w1(stream, d);
            match two_layer_loss(&w1, &inst, cfg.activation, cfg.rcond_floor) {
                Ok(loss) if loss.is_finite() => {
                    return Ok(Start {
                        inst,
                        w1,
                        denominator,
                    })
                }
                Ok(_) | Err(Error::ActivationSingular { .. }) => {
                    consecutive += 1;
                    *resamples += 1;
                }
                Err(e) => return Err(e),
            }
        }
    }
}

fn step_gradient(
    w1: &Matrix<f64>,
    inst: &ProblemInstance<f64>,
    cfg: &ExperimentConfig,
) -> Result<(f64, Matrix<f64>)> {
    match cfg.gradient_mode {
        GradientMode::Analytic => loss_and_gradient(w1, inst, cfg.activation, cfg.rcond_floor),
        GradientMode::FiniteDifference => Ok((
            two_layer_loss(w1, inst, cfg.activation, cfg.rcond_floor)?,
            finite_difference_gradient(w1, inst, cfg.activation, cfg.rcond_floor, FD_STEP)?,
        )),
    }
}

/// Plain full-batch gradient descent on one seed's instance.
///
/// If an update makes `s(W1 X2)` singular (or the loss non-finite), `W1` is
/// redrawn from the seed's stream and the resample is counted.
pub fn run_seed(cfg: &ExperimentConfig, seed: u64) -> Result<SeedRun> {
    let mut stream = GaussianStream::new(seed);
    let mut resamples = 0;
    let Start {
        inst,
        mut w1,
        denominator,
    } = draw_start(&mut stream, cfg, &mut resamples)?;

    let lr = match cfg.objective {
        Objective::Score => cfg.learning_rate / denominator,
        Objective::Numerator => cfg.learning_rate,
    };
    let (mut loss, mut grad) = step_gradient(&w1, &inst, cfg)?;
    let mut scores = Vec::with_capacity(cfg.steps + 1);
    scores.push(loss / denominator);

    let mut consecutive = 0;
    while scores.len() <= cfg.steps {
        let candidate = &w1 - &grad.scale_real(lr);
        match step_gradient(&candidate, &inst, cfg) {
            Ok((l, g)) if l.is_finite() && g.is_finite() => {
                w1 = candidate;
                loss = l;
                grad = g;
                consecutive = 0;
            }
            Ok(_) | Err(Error::ActivationSingular { .. }) => {
                resamples += 1;
                consecutive += 1;
                if consecutive == MAX_RESAMPLES {
                    return Err(Error::MaxResample {
                        attempts: MAX_RESAMPLES,
                    });
                }
                let fresh = draw_w1(&mut stream, cfg.dim);
                match step_gradient(&fresh, &inst, cfg) {
                    Ok((l, g)) if l.is_finite() && g.is_finite() => {
                        w1 = fresh;
                        loss = l;
                        grad = g;
                    }
                    Ok(_) | Err(Error::ActivationSingular { .. }) => continue,
                    Err(e) => return Err(e),
                }
            }
            Err(e) => return Err(e),
        }
        scores.push(loss / denominator);
    }

    let divergent = scores[scores.len() - 1] > DIVERGENCE_FACTOR * scores[0];
    Ok(SeedRun {
        seed,
        scores,
        baseline_denominator: denominator,
        resamples,
        divergent,
    })
}

/// Runs every seed (in parallel) and assembles the trace in seed order.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentTrace> {
    cfg.validate()?;
    let runs = cfg
        .seeds
        .par_iter()
        .map(|&seed| run_seed(cfg, seed))
        .collect::<Result<Vec<_>>>()?;
    Ok(ExperimentTrace {
        config: cfg.clone(),
        runs,
    })
}
