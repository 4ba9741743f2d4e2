//! Elimination objective of the two-layer element-wise network.
//!
//! From `Y1 = W2 s(W1 X1)` and `Y2 = W2 s(W1 X2)`, eliminating
//! `W2 = Y2 s(W1 X2)^-1` leaves one equation in `W1`:
//!
//! ```text
//! loss(W1) = || Y1 - Y2 s(W1 X2)^-1 s(W1 X1) ||_F^2
//! ```
//!
//! The score divides this by the identity-activation value
//! `|| Y1 - Y2 X2^-1 X1 ||_F^2`, which does not depend on `W1`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lu::lu_factor;
use crate::matrix::Matrix;
use crate::scalar::{real, Real};
use crate::solver::ProblemInstance;

/// Largest imaginary part tolerated on the real-valued experiment path.
pub const REAL_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Activation {
    Relu,
    Sigmoid,
    Identity,
}

impl Activation {
    pub fn apply<T: Real>(self, x: T) -> T {
        match self {
            Self::Relu => x.max(T::zero()),
            Self::Sigmoid => T::one() / (T::one() + (-x).exp()),
            Self::Identity => x,
        }
    }

    /// Derivative; ReLU uses 0 at the kink.
    pub fn derivative<T: Real>(self, x: T) -> T {
        match self {
            Self::Relu => {
                if x > T::zero() {
                    T::one()
                } else {
                    T::zero()
                }
            }
            Self::Sigmoid => {
                let s = self.apply(x);
                s * (T::one() - s)
            }
            Self::Identity => T::one(),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Self::Relu => "relu",
            Self::Sigmoid => "sigmoid",
            Self::Identity => "identity",
        }
    }
}

impl std::str::FromStr for Activation {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "relu" => Ok(Self::Relu),
            "sigmoid" => Ok(Self::Sigmoid),
            "identity" => Ok(Self::Identity),
            other => Err(format!(
                "unknown activation `{other}` (relu, sigmoid, identity)"
            )),
        }
    }
}

impl std::fmt::Display for Activation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

fn check_real<T: Real>(a: &Matrix<T>) -> Result<()> {
    let m = a.max_imag().as_f64();
    if m > REAL_TOL {
        return Err(Error::ComplexInput { magnitude: m });
    }
    Ok(())
}

/// Applies `act` to the real part of every entry; the output is real.
pub fn apply_activation<T: Real>(a: &Matrix<T>, act: Activation) -> Result<Matrix<T>> {
    check_real(a)?;
    Ok(a.map(|z| real(act.apply(z.re))))
}

fn derivative_matrix<T: Real>(a: &Matrix<T>, act: Activation) -> Matrix<T> {
    a.map(|z| real(act.derivative(z.re)))
}

/// `|| Y1 - Y2 X2^-1 X1 ||_F^2`, the identity-activation loss.
pub fn baseline_denominator<T: Real>(inst: &ProblemInstance<T>, rcond_floor: T) -> Result<T> {
    let lu = lu_factor(&inst.x2);
    if lu.rcond() <= rcond_floor {
        return Err(Error::NearSingular {
            kernel: "baseline_denominator",
            rcond: lu.rcond().as_f64(),
            floor: rcond_floor.as_f64(),
        });
    }
    let r = &inst.y1 - &(&inst.y2 * &lu.solve(&inst.x1)?);
    let den = r.frobenius_norm().powi(2);
    if den <= T::zero() {
        return Err(Error::DegenerateBaseline);
    }
    Ok(den)
}

struct Forward<T> {
    pre1: Matrix<T>,
    pre2: Matrix<T>,
    a_inv: Matrix<T>,
    s: Matrix<T>,
    residual: Matrix<T>,
}

fn forward<T: Real>(
    w1: &Matrix<T>,
    inst: &ProblemInstance<T>,
    act: Activation,
    rcond_floor: T,
) -> Result<Forward<T>> {
    check_real(w1)?;
    let pre1 = w1.matmul(&inst.x1)?;
    let pre2 = w1.matmul(&inst.x2)?;
    let a = apply_activation(&pre2, act)?;
    let b = apply_activation(&pre1, act)?;
    let lu = lu_factor(&a);
    if !(lu.rcond() > rcond_floor) {
        return Err(Error::ActivationSingular {
            rcond: lu.rcond().as_f64(),
        });
    }
    let a_inv = lu.solve(&Matrix::identity(a.dim()))?;
    let s = &a_inv * &b;
    let residual = &inst.y1 - &(&inst.y2 * &s);
    Ok(Forward {
        pre1,
        pre2,
        a_inv,
        s,
        residual,
    })
}

/// `|| Y1 - Y2 s(W1 X2)^-1 s(W1 X1) ||_F^2`.
pub fn two_layer_loss<T: Real>(
    w1: &Matrix<T>,
    inst: &ProblemInstance<T>,
    act: Activation,
    rcond_floor: T,
) -> Result<T> {
    Ok(forward(w1, inst, act, rcond_floor)?
        .residual
        .frobenius_norm()
        .powi(2))
}

/// Loss divided by the identity baseline; 1 means no gain over a linear network.
pub fn two_layer_s_score<T: Real>(
    w1: &Matrix<T>,
    inst: &ProblemInstance<T>,
    act: Activation,
    rcond_floor: T,
) -> Result<T> {
    let den = baseline_denominator(inst, rcond_floor)?;
    Ok(two_layer_loss(w1, inst, act, rcond_floor)? / den)
}

/// Analytic gradient of [`two_layer_loss`] with respect to `W1`.
///
/// With `A = s(W1 X2)`, `B = s(W1 X1)`, `R = Y1 - Y2 A^-1 B` and
/// `M = A^-T Y2^T R`:
///
/// ```text
/// dL/dA = 2 M (A^-1 B)^T      dL/dB = -2 M
/// dL/dW1 = (dL/dA o s'(W1 X2)) X2^T + (dL/dB o s'(W1 X1)) X1^T
/// ```
pub fn two_layer_gradient<T: Real>(
    w1: &Matrix<T>,
    inst: &ProblemInstance<T>,
    act: Activation,
    rcond_floor: T,
) -> Result<Matrix<T>> {
    Ok(loss_and_gradient(w1, inst, act, rcond_floor)?.1)
}

pub(crate) fn loss_and_gradient<T: Real>(
    w1: &Matrix<T>,
    inst: &ProblemInstance<T>,
    act: Activation,
    rcond_floor: T,
) -> Result<(T, Matrix<T>)> {
    let f = forward(w1, inst, act, rcond_floor)?;
    let two = T::lit(2.0);
    let m = &(&f.a_inv.transpose() * &inst.y2.transpose()) * &f.residual;
    let g_a = (&m * &f.s.transpose()).scale_real(two);
    let g_b = m.scale_real(-two);
    let d2 = derivative_matrix(&f.pre2, act);
    let d1 = derivative_matrix(&f.pre1, act);
    let grad =
        &(&g_a.hadamard(&d2) * &inst.x2.transpose()) + &(&g_b.hadamard(&d1) * &inst.x1.transpose());
    Ok((f.residual.frobenius_norm().powi(2), grad))
}

/// Central differences of [`two_layer_loss`], one entry of `W1` at a time.
pub fn finite_difference_gradient<T: Real>(
    w1: &Matrix<T>,
    inst: &ProblemInstance<T>,
    act: Activation,
    rcond_floor: T,
    h: T,
) -> Result<Matrix<T>> {
    let n = w1.dim();
    let mut grad = Matrix::zeros(n);
    for i in 0..n {
        for j in 0..n {
            let bump = |delta: T| {
                let mut w = w1.clone();
                w.set(i, j, w1[(i, j)] + real(delta));
                two_layer_loss(&w, inst, act, rcond_floor)
            };
            let g = (bump(h)? - bump(-h)?) / (h + h);
            grad.set(i, j, real(g));
        }
    }
    Ok(grad)
}
