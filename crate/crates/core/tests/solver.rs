mod common;

use expnet::lu::rcond;
use expnet::solver::{
    block_diagonal_residual, eval_three_layer, solve_block_diagonal, solve_single_layer,
    solve_three_layer, solve_three_layer_with, validate_alpha, verify, ProblemInstance,
    DEFAULT_ADMISSION, DEFAULT_TOL, IDENTITY_TOL,
};
use expnet::{expm, BranchSpec, CMatrix, Complex64, Error, Instance, Sampling};
use proptest::prelude::*;

use common::{config, rel};

fn instance(d: usize, seed: u64) -> Instance {
    ProblemInstance::sample(d, seed, Sampling::ComplexGaussian, DEFAULT_ADMISSION)
        .unwrap()
        .0
}

/// Away from 1: `W2` carries a factor `1 / (1 - alpha)`, and as alpha -> 1 the
/// outer exponentials `exp(+-W2 exp(W1 X))` become too large to cancel in f64.
fn alpha_strategy() -> impl Strategy<Value = f64> {
    prop_oneof![0.2f64..0.75, 1.5f64..6.0]
}

#[test]
fn equal_inputs_rejected() {
    let inst = instance(3, 1);
    let same = ProblemInstance::new(inst.x1.clone(), inst.x1.clone(), inst.y1, inst.y2).unwrap();
    match solve_three_layer(&same, 2.0, BranchSpec::PRINCIPAL) {
        Err(Error::InstanceRejected { name, .. }) => assert_eq!(name, "x1 - x2"),
        other => panic!("expected rejection, got {other:?}"),
    }
}

#[test]
fn singular_label_rejected() {
    let inst = instance(3, 2);
    let y1 = CMatrix::from_fn(3, |i, j| inst.y1[(i.min(1), j)]);
    let bad = ProblemInstance::new(inst.x1, inst.x2, y1, inst.y2).unwrap();
    assert!(matches!(
        solve_three_layer(&bad, 2.0, BranchSpec::PRINCIPAL),
        Err(Error::InstanceRejected { name: "y1", .. })
    ));
}

#[test]
fn alpha_validation() {
    for bad in [1.0, 1.0005, 0.0, -2.0, f64::NAN, f64::INFINITY] {
        assert!(validate_alpha(bad).is_err(), "{bad}");
    }
    for good in [0.5, 2.0, std::f64::consts::E, 1.01] {
        assert!(validate_alpha(good).is_ok(), "{good}");
    }
}

#[test]
fn relaxed_admission_still_checks_invertibility() {
    let inst = instance(4, 3);
    let w = solve_three_layer_with(&inst, 3.0, BranchSpec::PRINCIPAL, 1e-12).unwrap();
    assert!(verify(&w, &inst, DEFAULT_TOL).unwrap().pass);
}

#[test]
fn block_diagonal_baseline_is_exact() {
    for seed in 0..10 {
        let inst = instance(5, seed);
        let (w1, w2) = solve_block_diagonal(&inst).unwrap();
        assert!(block_diagonal_residual(&inst, &w1, &w2) <= 1e-12);
    }
}

#[test]
fn real_instances_fail_only_when_exp_w1_x2_is_ill_conditioned() {
    // Admission does not bound the spread of W1 X2's eigenvalues; when
    // exp(W1 X2) is nearly singular the weights cannot be represented in f64.
    let mut passed = 0;
    for seed in 0..100 {
        let (inst, _) =
            ProblemInstance::<f64>::sample(6, seed, Sampling::RealGaussian, DEFAULT_ADMISSION)
                .unwrap();
        let rc = rcond(
            &expm(
                &(&solve_single_layer(&(&inst.x1 - &inst.x2), &CMatrix::identity(6)).unwrap()
                    * &inst.x2),
            )
            .unwrap(),
        );
        let ok = solve_three_layer(&inst, std::f64::consts::E, BranchSpec::PRINCIPAL)
            .map(|w| verify(&w, &inst, DEFAULT_TOL).unwrap().pass)
            .unwrap_or(false);
        if ok {
            passed += 1;
        } else {
            assert!(
                rc <= 1e-8,
                "seed {seed} failed with rcond(exp(W1 X2)) = {rc:e}"
            );
        }
    }
    assert!(passed >= 95, "{passed}/100");
}

#[test]
fn network_is_not_a_lookup_table() {
    // A third input gets some other output; nothing forces it to Y1 or Y2.
    let inst = instance(3, 8);
    let w = solve_three_layer(&inst, 2.0, BranchSpec::PRINCIPAL).unwrap();
    let mid = (&inst.x1 + &inst.x2).scale_real(0.5);
    let f = eval_three_layer(&w, &mid).unwrap();
    assert!(rel(&f, &inst.y1) > 1e-3 && rel(&f, &inst.y2) > 1e-3);
}

#[test]
fn single_precision_solver() {
    let (inst, _) = ProblemInstance::<f32>::sample(3, 4, Sampling::ComplexGaussian, 1e-2).unwrap();
    let w = solve_three_layer(&inst, 2.0f32, BranchSpec::PRINCIPAL).unwrap();
    let rep = verify(&w, &inst, 1e-3).unwrap();
    assert!(rep.pass, "{rep:?}");
}

proptest! {
    #![proptest_config(config(48))]

    #[test]
    fn construction_reproduces_labels(seed in any::<u64>(), d in 1usize..7, alpha in alpha_strategy()) {
        let inst = instance(d, seed);
        let w = solve_three_layer(&inst, alpha, BranchSpec::PRINCIPAL).unwrap();
        let rep = verify(&w, &inst, DEFAULT_TOL).unwrap();
        prop_assert!(rep.pass, "{:?}", rep);
        prop_assert!(rep.admitted);
    }

    #[test]
    fn identities_behind_the_construction(seed in any::<u64>(), d in 1usize..6) {
        let inst = instance(d, seed);
        let w = solve_three_layer(&inst, 2.0, BranchSpec::PRINCIPAL).unwrap();
        let rep = verify(&w, &inst, DEFAULT_TOL).unwrap();
        prop_assert!(rep.max_identity_residual() <= IDENTITY_TOL, "{:?}", rep.identity_checks);
        // W1 X1 - W1 X2 = ln(alpha) I exactly in exact arithmetic.
        let gap = &(&w.w1 * &inst.x1) - &(&w.w1 * &inst.x2);
        prop_assert!(rel(&gap, &CMatrix::scalar(d, Complex64::new(2f64.ln(), 0.0))) <= 1e-10);
    }

    #[test]
    fn other_branches_also_interpolate(seed in any::<u64>(), d in 1usize..5, k in -2i64..3) {
        let inst = instance(d, seed);
        let w = solve_three_layer(&inst, std::f64::consts::E, BranchSpec::new(k)).unwrap();
        let ez = expm(&w.z).unwrap();
        let z0 = solve_three_layer(&inst, std::f64::consts::E, BranchSpec::PRINCIPAL).unwrap().z;
        prop_assert!(rel(&ez, &expm(&z0).unwrap()) <= 1e-10);
        prop_assert!(verify(&w, &inst, DEFAULT_TOL).unwrap().pass);
    }

    #[test]
    fn swapping_the_pairs_still_solves(seed in any::<u64>(), d in 1usize..6) {
        let inst = instance(d, seed);
        let swapped = ProblemInstance::new(inst.x2.clone(), inst.x1.clone(), inst.y2.clone(), inst.y1.clone()).unwrap();
        let w = solve_three_layer(&swapped, 0.5, BranchSpec::PRINCIPAL).unwrap();
        prop_assert!(verify(&w, &swapped, DEFAULT_TOL).unwrap().pass);
    }
}
