use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lu::rcond;
use crate::matfun::expm;
use crate::matrix::Matrix;
use crate::scalar::{real, Real};
use crate::solver::instance::{ProblemInstance, DEFAULT_ADMISSION};
use crate::solver::three_layer::{eval_three_layer, ThreeLayerWeights};

/// Default relative residual a solution must meet.
pub const DEFAULT_TOL: f64 = 1e-6;
/// Bound on the internal identity residuals for admitted instances.
pub const IDENTITY_TOL: f64 = 1e-7;

/// Outcome of [`verify`].
///
/// `identity_checks` holds relative residuals of the identities the
/// construction relies on:
///
/// * `scale_identity`: `exp(W1 X1) = alpha exp(W1 X2)`
/// * `commutation`: `C Z = Z C` with `C = W2 exp(W1 X1)`
/// * `commutation_closed_form`: `C = alpha / (1 - alpha) (Z - ln(alpha) I)`
/// * `difference_identity`: `exp(W1 X2) - exp(W1 X1) = (1 - alpha) exp(W1 X2)`
/// * `w3_consistency`: `W3 = Y1 exp(-W2 exp(W1 X1))`
/// * `z_definition`: `exp(Z) = alpha Y1^-1 Y2`
///
/// Non-finite intermediate results are recorded as infinity.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolveReport {
    pub residual1: f64,
    pub residual2: f64,
    pub identity_checks: BTreeMap<String, f64>,
    /// rcond of `exp(W1 X2) - exp(W1 X1)`; positive when invertible.
    pub difference_rcond: f64,
    pub admitted: bool,
    pub tol: f64,
    pub pass: bool,
}

impl SolveReport {
    pub fn max_identity_residual(&self) -> f64 {
        self.identity_checks.values().copied().fold(0.0, f64::max)
    }
}

fn rel<T: Real>(num: &Matrix<T>, den: &Matrix<T>) -> f64 {
    let d = den.frobenius_norm();
    let n = num.frobenius_norm();
    let r = if d > T::zero() { n / d } else { n };
    finite_or_inf(r.as_f64())
}

fn finite_or_inf(x: f64) -> f64 {
    if x.is_finite() {
        x
    } else {
        f64::INFINITY
    }
}

fn identity_checks<T: Real>(
    w: &ThreeLayerWeights<T>,
    inst: &ProblemInstance<T>,
    checks: &mut BTreeMap<String, f64>,
) -> Result<f64> {
    let n = inst.dim();
    let alpha = w.alpha;
    let ln_alpha = alpha.ln();
    let e1 = expm(&(&w.w1 * &inst.x1))?;
    let e2 = expm(&(&w.w1 * &inst.x2))?;

    checks.insert(
        "scale_identity".into(),
        rel(&(&e1 - &e2.scale_real(alpha)), &e1),
    );

    let c = &w.w2 * &e1;
    let comm = &(&c * &w.z) - &(&w.z * &c);
    let cz = c.frobenius_norm() * w.z.frobenius_norm();
    let commutation = if cz > T::zero() {
        finite_or_inf((comm.frobenius_norm() / cz).as_f64())
    } else {
        0.0
    };
    checks.insert("commutation".into(), commutation);

    let shifted = &w.z - &Matrix::scalar(n, real(ln_alpha));
    let closed = shifted.scale_real(alpha / (T::one() - alpha));
    checks.insert("commutation_closed_form".into(), rel(&(&c - &closed), &c));

    let diff = &e2 - &e1;
    let expected = e2.scale_real(T::one() - alpha);
    checks.insert(
        "difference_identity".into(),
        rel(&(&diff - &expected), &expected),
    );

    let w3 = &inst.y1 * &expm(&-&c)?;
    checks.insert("w3_consistency".into(), rel(&(&w.w3 - &w3), &w.w3));

    let ratio = crate::lu::solve(&inst.y1, &inst.y2, T::zero())?.scale_real(alpha);
    let ez = expm(&w.z)?;
    checks.insert("z_definition".into(), rel(&(&ez - &ratio), &ez));

    Ok(rcond(&diff).as_f64())
}

/// Evaluates `w` on both data points and records residuals and identity checks.
///
/// Only a dimension mismatch is an error; numerical failures show up as
/// infinite residuals and `pass == false`.
pub fn verify<T: Real>(
    w: &ThreeLayerWeights<T>,
    inst: &ProblemInstance<T>,
    tol: f64,
) -> Result<SolveReport> {
    let n = inst.dim();
    for m in [&w.w1, &w.w2, &w.w3, &w.z] {
        if m.dim() != n {
            return Err(Error::Dimension {
                expected: n,
                found: m.dim(),
            });
        }
    }
    let residual = |x: &Matrix<T>, y: &Matrix<T>| match eval_three_layer(w, x) {
        Ok(fx) => rel(&(&fx - y), y),
        Err(_) => f64::INFINITY,
    };
    let residual1 = residual(&inst.x1, &inst.y1);
    let residual2 = residual(&inst.x2, &inst.y2);

    let mut checks = BTreeMap::new();
    let difference_rcond = match identity_checks(w, inst, &mut checks) {
        Ok(r) => r,
        Err(_) => {
            for name in [
                "scale_identity",
                "commutation",
                "commutation_closed_form",
                "difference_identity",
                "w3_consistency",
                "z_definition",
            ] {
                checks.entry(name.to_string()).or_insert(f64::INFINITY);
            }
            0.0
        }
    };

    Ok(SolveReport {
        residual1,
        residual2,
        identity_checks: checks,
        difference_rcond,
        admitted: inst.is_admitted(DEFAULT_ADMISSION),
        tol,
        pass: residual1 <= tol && residual2 <= tol,
    })
}
