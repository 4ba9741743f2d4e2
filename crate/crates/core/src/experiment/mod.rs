//! Gradient descent on the two-layer element-wise network.
//!
//! Data and labels are real Gaussian; the kernels run on complex matrices
//! whose imaginary parts are zero. Progress is measured by the score
//! `s = loss(W1) / || Y1 - Y2 X2^-1 X1 ||_F^2`.

mod objective;
mod runner;

pub use self::objective::{
    apply_activation, baseline_denominator, finite_difference_gradient, two_layer_gradient,
    two_layer_loss, two_layer_s_score, Activation, REAL_TOL,
};
pub use self::runner::{
    default_learning_rate, median, run_experiment, run_seed, ExperimentConfig, ExperimentTrace,
    GradientMode, Objective, SeedRun, DEFAULT_EXPERIMENT_RCOND, DEFAULT_STEPS, DIVERGENCE_FACTOR,
    FD_STEP,
};
