use crate::error::{Error, Result};
use crate::lu::{inverse_named, solve, DEFAULT_RCOND_FLOOR};
use crate::matfun::{expm, logm, BranchSpec};
use crate::matrix::Matrix;
use crate::scalar::{real, Real};
use crate::solver::instance::{ProblemInstance, DEFAULT_ADMISSION};

/// `ln(alpha) = 1`.
pub const DEFAULT_ALPHA: f64 = std::f64::consts::E;
/// Smallest accepted `|alpha - 1|`.
pub const MIN_ALPHA_GAP: f64 = 1e-3;

/// Weights of `f(X) = W3 exp(W2 exp(W1 X))` plus the logarithm `Z` used to build `W2`.
#[derive(Clone, Debug)]
pub struct ThreeLayerWeights<T> {
    pub w1: Matrix<T>,
    pub w2: Matrix<T>,
    pub w3: Matrix<T>,
    pub alpha: T,
    /// Satisfies `exp(Z) = alpha Y1^-1 Y2`.
    pub z: Matrix<T>,
}

/// Accepts finite `alpha > 0` with `|alpha - 1| >= MIN_ALPHA_GAP`.
pub fn validate_alpha(alpha: f64) -> Result<()> {
    if !alpha.is_finite() || alpha <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "alpha must be positive, got {alpha}"
        )));
    }
    if (alpha - 1.0).abs() < MIN_ALPHA_GAP {
        return Err(Error::InvalidParameter(format!(
            "alpha must differ from 1 by at least {MIN_ALPHA_GAP}, got {alpha}"
        )));
    }
    Ok(())
}

/// `Z = log(alpha Y1^-1 Y2)` on the given branch.
pub fn compute_z<T: Real>(
    y1: &Matrix<T>,
    y2: &Matrix<T>,
    alpha: T,
    branch: BranchSpec,
) -> Result<Matrix<T>> {
    validate_alpha(alpha.as_f64())?;
    let ratio = solve(y1, y2, T::lit(DEFAULT_RCOND_FLOOR))?;
    logm(&ratio.scale_real(alpha), branch)
}

/// Three-layer weights with the default admission threshold.
pub fn solve_three_layer<T: Real>(
    inst: &ProblemInstance<T>,
    alpha: T,
    branch: BranchSpec,
) -> Result<ThreeLayerWeights<T>> {
    solve_three_layer_with(inst, alpha, branch, DEFAULT_ADMISSION)
}

/// Builds
///
/// ```text
/// W1 = ln(alpha) (X1 - X2)^-1
/// W2 = (Z - ln(alpha) I) exp(-W1 X2) / (1 - alpha)
/// W3 = Y1 exp(-W2 exp(W1 X1))
/// ```
///
/// with `exp(Z) = alpha Y1^-1 Y2`. Because `W1 X1 = W1 X2 + ln(alpha) I`,
/// `exp(W1 X1) = alpha exp(W1 X2)`, so `W2 exp(W1 X1)` and `W2 exp(W1 X2)`
/// differ by exactly `Z - ln(alpha) I`; this commutes with `Z` and makes the
/// two outer exponentials differ by the factor `Y1^-1 Y2`.
pub fn solve_three_layer_with<T: Real>(
    inst: &ProblemInstance<T>,
    alpha: T,
    branch: BranchSpec,
    admission: f64,
) -> Result<ThreeLayerWeights<T>> {
    validate_alpha(alpha.as_f64())?;
    inst.admit(admission)?;
    let n = inst.dim();
    let ln_alpha = alpha.ln();

    let diff_inv = inverse_named(
        &(&inst.x1 - &inst.x2),
        T::lit(DEFAULT_RCOND_FLOOR),
        "inverse(x1 - x2)",
    )?;
    let w1 = diff_inv.scale_real(ln_alpha);
    let z = compute_z(&inst.y1, &inst.y2, alpha, branch)?;

    let shifted = &z - &Matrix::scalar(n, real(ln_alpha));
    let w2 = (&shifted * &expm(&-&(&w1 * &inst.x2))?).scale_real(T::one() / (T::one() - alpha));
    let inner1 = expm(&(&w1 * &inst.x1))?;
    let w3 = &inst.y1 * &expm(&-&(&w2 * &inner1))?;

    if !(w1.is_finite() && w2.is_finite() && w3.is_finite() && z.is_finite()) {
        return Err(Error::NonFinite("solve_three_layer"));
    }
    Ok(ThreeLayerWeights {
        w1,
        w2,
        w3,
        alpha,
        z,
    })
}

/// `W3 exp(W2 exp(W1 X))`.
pub fn eval_three_layer<T: Real>(w: &ThreeLayerWeights<T>, x: &Matrix<T>) -> Result<Matrix<T>> {
    let inner = expm(&w.w1.matmul(x)?)?;
    let outer = expm(&w.w2.matmul(&inner)?)?;
    w.w3.matmul(&outer)
}
