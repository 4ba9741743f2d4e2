//! Matrix logarithm over the complex Schur form.
//!
//! `A = Q T Q^H`; `log T` is computed by inverse scaling and squaring:
//! take `k` principal square roots of `T` (Björck–Hammarling recurrence) until
//! `||T^(1/2^k) - I||_1 <= 0.25`, sum the Mercator series
//! `log(I + K) = K - K^2/2 + K^3/3 - ...` and multiply by `2^k`. The diagonal
//! is then overwritten with the scalar logarithms of the eigenvalues and the
//! first superdiagonal with the exact divided-difference formula, which
//! removes the error the square roots introduce there. A branch offset `k`
//! adds `2 pi i k I`, shifting every eigenvalue's logarithm to the same sheet.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::lu::{lu_factor, DEFAULT_RCOND_FLOOR};
use crate::matfun::{expm, BranchSpec};
use crate::matrix::Matrix;
use crate::scalar::{cplx, principal_ln, principal_sqrt, real, Real};
use crate::schur::{schur_decompose, SchurForm};

/// Square roots stop once `||R - I||_1` is at most this.
pub const MERCATOR_RADIUS: f64 = 0.25;
pub const MAX_SQUARE_ROOTS: usize = 64;
const MAX_SERIES_TERMS: usize = 200;
/// Relative size of `r_ii + r_jj` below which a square-root step is refused.
const CUT_GAP: f64 = 1e-6;

/// Result of [`logm_with_report`].
#[derive(Clone, Debug)]
pub struct LogReport<T> {
    pub log: Matrix<T>,
    /// `||expm(log) - A||_F / ||A||_F`.
    pub roundtrip_residual: T,
    /// `1 + ||N||_F / min |lambda|` with `N` the strictly-upper part of `T`.
    pub conditioning: T,
    /// `1e-8 * max(1, conditioning)`, the relative bound the residual meets.
    pub tolerance: T,
    pub square_roots: usize,
}

/// Departure-from-normality conditioning estimate taken from the Schur form:
/// `1 + ||strict_upper(T)||_F / min_i |T_ii|`.
pub fn schur_conditioning<T: Real>(schur: &SchurForm<T>) -> T {
    let n = schur.t.dim();
    let mut off = T::zero();
    for i in 0..n {
        for j in i + 1..n {
            off += schur.t[(i, j)].norm_sqr();
        }
    }
    let min_mod = schur
        .eigenvalues
        .iter()
        .fold(T::infinity(), |m, z| m.min(z.norm()));
    T::one() + off.sqrt() / min_mod
}

fn sqrt_upper<T: Real>(t: &Matrix<T>) -> Result<Matrix<T>> {
    let n = t.dim();
    let eps = T::epsilon();
    let scale = t.frobenius_norm();
    let mut r = Matrix::zeros(n);
    for i in 0..n {
        r.set(i, i, principal_sqrt(t[(i, i)]));
    }
    for j in 1..n {
        for i in (0..j).rev() {
            let mut num = t[(i, j)];
            for k in i + 1..j {
                num -= r[(i, k)] * r[(k, j)];
            }
            let den = r[(i, i)] + r[(j, j)];
            let size = r[(i, i)].norm() + r[(j, j)].norm();
            if den.norm() <= T::lit(CUT_GAP) * size && num.norm() > eps * scale {
                return Err(Error::IllConditioned(format!(
                    "eigenvalues {} and {} straddle the branch cut with nontrivial coupling",
                    t[(i, i)],
                    t[(j, j)]
                )));
            }
            if den.norm() == T::zero() {
                r.set(i, j, real(T::zero()));
            } else {
                r.set(i, j, num / den);
            }
        }
    }
    Ok(r)
}

fn unwinding<T: Real>(z: Complex<T>) -> T {
    ((z.im - T::PI()) / (T::lit(2.0) * T::PI())).ceil()
}

/// `t * (log l2 - log l1) / (l2 - l1)`, stable when `l1` is close to `l2`.
fn log_divided_difference<T: Real>(
    l1: Complex<T>,
    l2: Complex<T>,
    t: Complex<T>,
) -> Result<Complex<T>> {
    if l1 == l2 {
        return Ok(t / l1);
    }
    let (log1, log2) = (principal_ln(l1), principal_ln(l2));
    let diff = l2 - l1;
    if diff.norm() > l1.norm().max(l2.norm()) * T::lit(0.5) {
        return Ok(t * (log2 - log1) / diff);
    }
    let z = diff / (l2 + l1);
    let u = unwinding(log2 - log1);
    if u == T::zero() {
        return Ok(t * z.atanh() * T::lit(2.0) / diff);
    }
    if diff.norm() <= T::lit(CUT_GAP) * l1.norm().max(l2.norm()) && t != real(T::zero()) {
        return Err(Error::IllConditioned(format!(
            "coupled eigenvalues {l1} and {l2} coalesce across the branch cut"
        )));
    }
    let winding = Complex::new(T::zero(), T::lit(2.0) * T::PI() * u);
    Ok(t * (z.atanh() * T::lit(2.0) + winding) / diff)
}

/// Principal logarithm of an upper-triangular matrix.
fn log_upper<T: Real>(t: &Matrix<T>) -> Result<(Matrix<T>, usize)> {
    let n = t.dim();
    let id = Matrix::<T>::identity(n);
    let radius = T::lit(MERCATOR_RADIUS);
    let mut r = t.clone();
    let mut roots = 0;
    while (&r - &id).one_norm() > radius {
        if roots == MAX_SQUARE_ROOTS {
            return Err(Error::IllConditioned(format!(
                "no convergence to the Mercator region after {MAX_SQUARE_ROOTS} square roots"
            )));
        }
        r = sqrt_upper(&r)?;
        roots += 1;
    }

    let k = &r - &id;
    let mut sum = k.clone();
    let mut power = k.clone();
    for j in 2..=MAX_SERIES_TERMS {
        power = &power * &k;
        let sign = if j % 2 == 0 { -T::one() } else { T::one() };
        let term = power.scale_real(sign / T::lit(j as f64));
        let tn = term.frobenius_norm();
        sum = &sum + &term;
        if tn == T::zero() || tn <= T::epsilon() * sum.frobenius_norm() {
            break;
        }
    }
    let mut log = sum.scale_real(T::lit(2f64.powi(roots as i32)));

    for i in 0..n {
        log.set(i, i, principal_ln(t[(i, i)]));
    }
    for i in 0..n.saturating_sub(1) {
        let v = log_divided_difference(t[(i, i)], t[(i + 1, i + 1)], t[(i, i + 1)])?;
        log.set(i, i + 1, v);
    }
    Ok((log, roots))
}

fn logm_inner<T: Real>(
    a: &Matrix<T>,
    branch: BranchSpec,
) -> Result<(Matrix<T>, SchurForm<T>, usize)> {
    let schur = schur_decompose(a)?;
    let min_mod = schur
        .eigenvalues
        .iter()
        .fold(T::infinity(), |m, z| m.min(z.norm()));
    let rc = lu_factor(a).rcond();
    if min_mod == T::zero() || rc <= T::lit(DEFAULT_RCOND_FLOOR) {
        return Err(Error::SingularInput {
            kernel: "logm",
            modulus: min_mod.as_f64(),
        });
    }
    let (mut log_t, roots) = log_upper(&schur.t)?;
    if branch.branch_offset != 0 {
        let shift = cplx(
            T::zero(),
            T::lit(2.0 * std::f64::consts::PI * branch.branch_offset as f64),
        );
        log_t = log_t.add_scalar(shift);
    }
    let log = schur.conjugate(&log_t);
    if !log.is_finite() {
        return Err(Error::NonFinite("logm"));
    }
    Ok((log, schur, roots))
}

/// A logarithm of `a` on the requested branch.
pub fn logm<T: Real>(a: &Matrix<T>, branch: BranchSpec) -> Result<Matrix<T>> {
    logm_inner(a, branch).map(|(log, _, _)| log)
}

/// [`logm`] plus the `expm` round-trip residual and the tolerance it is held to.
pub fn logm_with_report<T: Real>(a: &Matrix<T>, branch: BranchSpec) -> Result<LogReport<T>> {
    let (log, schur, square_roots) = logm_inner(a, branch)?;
    let roundtrip_residual = expm(&log)?.rel_diff(a);
    let conditioning = schur_conditioning(&schur);
    Ok(LogReport {
        log,
        roundtrip_residual,
        conditioning,
        tolerance: T::lit(1e-8) * conditioning.max(T::one()),
        square_roots,
    })
}
