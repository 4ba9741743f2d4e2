mod common;

use expnet::experiment::{
    finite_difference_gradient, run_experiment, run_seed, two_layer_gradient, two_layer_loss,
    two_layer_s_score, Activation, ExperimentConfig, GradientMode, DEFAULT_EXPERIMENT_RCOND,
};
use expnet::solver::ProblemInstance;
use expnet::{CMatrix, Error, GaussianStream, Instance, Sampling};
use proptest::prelude::*;

use common::config;

fn point(dim: usize, seed: u64) -> (Instance, CMatrix) {
    let mut s = GaussianStream::new(seed);
    let mut draw = || s.matrix::<f64>(dim, Sampling::RealGaussian);
    let inst = ProblemInstance::new(draw(), draw(), draw(), draw()).unwrap();
    let w1 = draw().scale_real(1.0 / (dim as f64).sqrt());
    (inst, w1)
}

#[test]
fn sigmoid_gradient_on_fifty_points() {
    let mut checked = 0;
    for seed in 0..60u64 {
        let dim = 2 + (seed % 3) as usize;
        let (inst, w1) = point(dim, 900 + seed);
        let Ok(g) = two_layer_gradient(&w1, &inst, Activation::Sigmoid, DEFAULT_EXPERIMENT_RCOND)
        else {
            continue;
        };
        let fd = finite_difference_gradient(
            &w1,
            &inst,
            Activation::Sigmoid,
            DEFAULT_EXPERIMENT_RCOND,
            1e-6,
        )
        .unwrap();
        assert!(
            fd.rel_diff(&g) <= 1e-5,
            "seed {seed}: {:e}",
            fd.rel_diff(&g)
        );
        checked += 1;
    }
    assert!(checked >= 50);
}

#[test]
fn complex_weights_are_rejected() {
    let (inst, w1) = point(3, 1);
    let w1 = w1.add_scalar(num_complex::Complex::new(0.0, 1e-6));
    assert!(matches!(
        two_layer_loss(&w1, &inst, Activation::Sigmoid, DEFAULT_EXPERIMENT_RCOND),
        Err(Error::ComplexInput { .. })
    ));
}

#[test]
fn identity_score_is_one_for_any_weights() {
    for seed in 0..20 {
        let (inst, w1) = point(4, seed);
        let s =
            two_layer_s_score(&w1, &inst, Activation::Identity, DEFAULT_EXPERIMENT_RCOND).unwrap();
        assert!((s - 1.0).abs() <= 1e-10, "seed {seed}: {s}");
    }
}

#[test]
fn descent_lowers_mean_score_without_divergence() {
    for act in [Activation::Sigmoid, Activation::Relu] {
        let trace = run_experiment(&ExperimentConfig::new(4, (1..=10).collect(), act)).unwrap();
        let steps = trace.config.steps;
        assert!(trace.mean_at(steps) <= trace.mean_at(0), "{act}");
        assert!(trace.divergent_count() * 5 < trace.runs.len(), "{act}");
    }
}

#[test]
fn parallel_run_matches_sequential_seeds() {
    let mut cfg = ExperimentConfig::new(3, vec![4, 1, 8, 2], Activation::Relu);
    cfg.steps = 40;
    let trace = run_experiment(&cfg).unwrap();
    for (run, &seed) in trace.runs.iter().zip(&cfg.seeds) {
        assert_eq!(run, &run_seed(&cfg, seed).unwrap());
    }
}

#[test]
fn finite_difference_mode_tracks_analytic() {
    let mut cfg = ExperimentConfig::new(3, vec![3], Activation::Sigmoid);
    cfg.steps = 20;
    let analytic = run_experiment(&cfg).unwrap();
    cfg.gradient_mode = GradientMode::FiniteDifference;
    let fd = run_experiment(&cfg).unwrap();
    let (a, b) = (&analytic.runs[0].scores, &fd.runs[0].scores);
    for (x, y) in a.iter().zip(b) {
        assert!((x - y).abs() <= 1e-6 * x.abs().max(1.0));
    }
}

#[test]
fn csv_has_one_row_per_recorded_step() {
    let mut cfg = ExperimentConfig::new(2, vec![1, 2], Activation::Sigmoid);
    cfg.steps = 5;
    let trace = run_experiment(&cfg).unwrap();
    let mut buf = Vec::new();
    trace.write_csv(&mut buf).unwrap();
    let mut reader = csv::Reader::from_reader(buf.as_slice());
    assert_eq!(reader.headers().unwrap(), vec!["seed", "step", "s"]);
    let rows: Vec<(u64, usize, f64)> = reader.deserialize().map(|r| r.unwrap()).collect();
    assert_eq!(rows.len(), 12);
    for (k, (seed, step, s)) in rows.iter().enumerate() {
        assert_eq!(*seed, [1, 2][k / 6]);
        assert_eq!(*step, k % 6);
        assert_eq!(*s, trace.runs[k / 6].scores[k % 6]);
    }
}

proptest! {
    #![proptest_config(config(32))]

    #[test]
    fn relu_gradient_matches_differences(seed in any::<u64>(), dim in 2usize..5) {
        let (inst, w1) = point(dim, seed);
        let g = two_layer_gradient(&w1, &inst, Activation::Relu, DEFAULT_EXPERIMENT_RCOND);
        prop_assume!(g.is_ok());
        // Stay clear of the kink: every pre-activation at least 1e-3 from zero.
        let pre = [&w1 * &inst.x1, &w1 * &inst.x2];
        prop_assume!(pre.iter().all(|m| m.as_slice().iter().all(|z| z.re.abs() > 1e-3)));
        let g = g.unwrap();
        let h = 1e-6;
        let fd = finite_difference_gradient(&w1, &inst, Activation::Relu, DEFAULT_EXPERIMENT_RCOND, h).unwrap();
        // With every pre-activation positive the loss is flat and g = 0; the
        // absolute term covers the differencing noise eps * loss / h.
        let loss = two_layer_loss(&w1, &inst, Activation::Relu, DEFAULT_EXPERIMENT_RCOND).unwrap();
        let err = (&fd - &g).frobenius_norm();
        prop_assert!(err <= 1e-5 * g.frobenius_norm() + 1e2 * f64::EPSILON * loss / h, "{:e}", err);
    }

    #[test]
    fn score_is_scale_free_in_labels(seed in any::<u64>(), dim in 2usize..5, c in 0.1f64..10.0) {
        let (inst, w1) = point(dim, seed);
        let scaled = ProblemInstance::new(inst.x1.clone(), inst.x2.clone(), inst.y1.scale_real(c), inst.y2.scale_real(c)).unwrap();
        let a = two_layer_s_score(&w1, &inst, Activation::Sigmoid, DEFAULT_EXPERIMENT_RCOND);
        prop_assume!(a.is_ok());
        let b = two_layer_s_score(&w1, &scaled, Activation::Sigmoid, DEFAULT_EXPERIMENT_RCOND).unwrap();
        prop_assert!((a.unwrap() - b).abs() <= 1e-10 * b.max(1.0));
    }
}
