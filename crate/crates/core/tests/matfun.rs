mod common;

use expnet::lu::{determinant, inverse};
use expnet::matfun::{
    check_commuting_product, jordan_block_log, logm_with_report, squarings, THETA_13,
};
use expnet::schur::schur_decompose;
use expnet::{expm, logm, BranchSpec, CMatrix, CMatrix32, Complex64, Error};
use proptest::prelude::*;

use common::{config, gaussian, near_identity, rel, with_norm};

fn jordan(lambda: Complex64, m: usize) -> CMatrix {
    CMatrix::from_fn(m, |i, j| {
        if i == j {
            lambda
        } else if j == i + 1 {
            Complex64::new(1.0, 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    })
}

#[test]
fn squaring_count_follows_theta() {
    assert_eq!(squarings(0.0), 0);
    assert_eq!(squarings(THETA_13), 0);
    assert_eq!(squarings(THETA_13 * 1.5), 1);
    assert_eq!(squarings(THETA_13 * 1000.0), 10);
}

#[test]
fn expm_of_jordan_block() {
    // exp(lambda I + N) = e^lambda (I + N + N^2/2).
    let lambda = Complex64::new(0.3, -1.2);
    let got = expm(&jordan(lambda, 3)).unwrap();
    let e = lambda.exp();
    let want = CMatrix::from_fn(3, |i, j| match j as i64 - i as i64 {
        0 => e,
        1 => e,
        2 => e * 0.5,
        _ => Complex64::new(0.0, 0.0),
    });
    assert!(rel(&got, &want) <= 1e-14);
}

#[test]
fn logm_of_jordan_blocks_matches_series() {
    for (lambda, m) in [
        (Complex64::new(2.0, 0.0), 4),
        (Complex64::new(-1.5, 0.5), 3),
        (Complex64::new(0.1, -0.1), 2),
        (Complex64::new(-3.0, -1e-3), 3),
    ] {
        let got = logm(&jordan(lambda, m), BranchSpec::PRINCIPAL).unwrap();
        let want = jordan_block_log(lambda, m).unwrap();
        assert!(rel(&got, &want) <= 1e-13, "lambda {lambda}, m {m}");
    }
}

#[test]
fn logm_of_conjugated_jordan_forms() {
    let eigen = [
        Complex64::new(1.5, 0.0),
        Complex64::new(-0.7, 0.9),
        Complex64::new(0.4, -2.0),
    ];
    for seed in 0..40u64 {
        let sizes = [
            1 + seed as usize % 3,
            1 + (seed as usize / 3) % 3,
            1 + (seed as usize / 9) % 2,
        ];
        let blocks: Vec<CMatrix> = eigen
            .iter()
            .zip(sizes)
            .map(|(&l, m)| jordan(l, m))
            .collect();
        let logs: Vec<CMatrix> = eigen
            .iter()
            .zip(sizes)
            .map(|(&l, m)| jordan_block_log(l, m).unwrap())
            .collect();
        let j = CMatrix::block_diagonal(&blocks);
        let d = j.dim();
        let v = near_identity(d, seed, 0.5);
        let vi = inverse(&v, 1e-10).unwrap();
        let a = &(&v * &j) * &vi;
        let want = &(&v * &CMatrix::block_diagonal(&logs)) * &vi;
        let got = logm(&a, BranchSpec::PRINCIPAL).unwrap();
        assert!(
            rel(&got, &want) <= 1e-7,
            "seed {seed}: {:e}",
            rel(&got, &want)
        );
    }
}

#[test]
fn logm_rejects_singular_and_reports_it() {
    let a = CMatrix::from_real_rows(&[vec![1.0, 1.0], vec![1.0, 1.0]]).unwrap();
    let err = logm(&a, BranchSpec::PRINCIPAL).unwrap_err();
    assert!(matches!(err, Error::SingularInput { .. }));
    assert!(err.to_string().contains("singular"));
}

#[test]
fn logm_negative_real_axis_is_principal() {
    // Eigenvalue -2 on the cut: principal log has imaginary part +pi.
    let a = CMatrix::from_real_rows(&[vec![-2.0, 0.0], vec![0.0, 3.0]]).unwrap();
    let l = logm(&a, BranchSpec::PRINCIPAL).unwrap();
    assert!((l[(0, 0)] - Complex64::new(2f64.ln(), std::f64::consts::PI)).norm() < 1e-14);
    assert!((l[(1, 1)] - Complex64::new(3f64.ln(), 0.0)).norm() < 1e-14);
}

#[test]
fn expm_overflow_is_reported() {
    let a = CMatrix::scalar(2, Complex64::new(2e8, 0.0));
    assert!(matches!(expm(&a), Err(Error::Overflow { .. })));
    let big = CMatrix::scalar(2, Complex64::new(800.0, 0.0));
    assert!(expm(&big).is_err());
}

#[test]
fn single_precision_tracks_double() {
    for seed in 0..10 {
        let a = with_norm(4, seed, 2.0);
        let e64 = expm(&a).unwrap();
        let e32 = expm(&a.cast::<f32>()).unwrap().cast::<f64>();
        assert!(rel(&e32, &e64) <= 1e-5);
        let l32 = logm(
            &near_identity(4, seed, 0.5).cast::<f32>(),
            BranchSpec::PRINCIPAL,
        )
        .unwrap();
        let back: CMatrix32 = expm(&l32).unwrap();
        assert!(rel(&back.cast(), &near_identity(4, seed, 0.5)) <= 1e-5);
    }
}

proptest! {
    #![proptest_config(config(64))]

    #[test]
    fn expm_inverse_pair(seed in any::<u64>(), d in 1usize..9, norm in 0.0f64..8.0) {
        let a = with_norm(d, seed, norm);
        let prod = &expm(&a).unwrap() * &expm(&-&a).unwrap();
        prop_assert!(rel(&prod, &CMatrix::identity(d)) <= 1e-12 * (1.0 + norm).exp());
    }

    #[test]
    fn det_of_expm_is_exp_of_trace(seed in any::<u64>(), d in 1usize..9, norm in 0.0f64..4.0) {
        let a = with_norm(d, seed, norm);
        let det = determinant(&expm(&a).unwrap());
        let want = a.trace().exp();
        prop_assert!((det - want).norm() <= 1e-9 * want.norm());
    }

    #[test]
    fn commuting_pairs(seed in any::<u64>(), d in 1usize..8, p in -1.0f64..1.0, q in -1.0f64..1.0) {
        let a = with_norm(d, seed, 1.5);
        let b = &a.scale_real(p) + &(&a * &a).scale_real(q);
        prop_assert!(check_commuting_product(&a, &b).unwrap() <= 1e-9);
    }

    #[test]
    fn expm_is_similarity_covariant(seed in any::<u64>(), d in 1usize..8) {
        let a = with_norm(d, seed, 2.0);
        let v = near_identity(d, !seed, 0.5);
        let vi = inverse(&v, 1e-10).unwrap();
        let lhs = expm(&(&(&v * &a) * &vi)).unwrap();
        let rhs = &(&v * &expm(&a).unwrap()) * &vi;
        prop_assert!(rel(&lhs, &rhs) <= 1e-12);
    }

    #[test]
    fn logm_roundtrip_within_reported_tolerance(seed in any::<u64>(), d in 1usize..12) {
        let a = gaussian(d, seed);
        prop_assume!(expnet::lu::rcond(&a) > 1e-6);
        let rep = logm_with_report(&a, BranchSpec::PRINCIPAL).unwrap();
        prop_assert!(rep.roundtrip_residual <= rep.tolerance);
        prop_assert!(rep.roundtrip_residual <= 1e-8);
    }

    #[test]
    fn logm_inverts_expm_on_small_arguments(seed in any::<u64>(), d in 1usize..8, norm in 0.0f64..1.0) {
        // Spectral radius < pi keeps the principal branch.
        let a = with_norm(d, seed, norm);
        let l = logm(&expm(&a).unwrap(), BranchSpec::PRINCIPAL).unwrap();
        prop_assert!((&l - &a).frobenius_norm() <= 1e-13);
    }

    #[test]
    fn logm_eigenvalues_are_principal_logs(seed in any::<u64>(), d in 1usize..8) {
        let a = gaussian(d, seed);
        prop_assume!(expnet::lu::rcond(&a) > 1e-6);
        let l = logm(&a, BranchSpec::PRINCIPAL).unwrap();
        let s = schur_decompose(&l).unwrap();
        for z in &s.eigenvalues {
            prop_assert!(z.im > -std::f64::consts::PI - 1e-9 && z.im <= std::f64::consts::PI + 1e-9);
        }
    }

    #[test]
    fn branch_offset_adds_2_pi_i(seed in any::<u64>(), d in 1usize..6, k in -3i64..4) {
        let a = near_identity(d, seed, 1.0);
        let l0 = logm(&a, BranchSpec::PRINCIPAL).unwrap();
        let lk = logm(&a, BranchSpec::new(k)).unwrap();
        let shift = CMatrix::scalar(d, Complex64::new(0.0, 2.0 * std::f64::consts::PI * k as f64));
        prop_assert!((&(&lk - &l0) - &shift).frobenius_norm() <= 1e-12 * (1.0 + k.abs() as f64));
        prop_assert!(rel(&expm(&lk).unwrap(), &a) <= 1e-10);
    }
}
