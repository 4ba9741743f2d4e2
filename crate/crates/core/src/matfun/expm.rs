//! Matrix exponential by scaling and squaring with a degree-13 Padé core.
//!
//! `s` is the smallest non-negative integer with `||A||_1 / 2^s <= THETA_13`;
//! the [13/13] Padé approximant `r(A / 2^s) = (V - U)^-1 (V + U)` is then
//! squared `s` times. With this `THETA_13` the backward error of the core is
//! below `2^-53` (Higham, SIAM J. Matrix Anal. Appl. 26, 2005).

use crate::error::{Error, Result};
use crate::lu::lu_factor;
use crate::matrix::Matrix;
use crate::scalar::{real, Real};

pub const THETA_13: f64 = 5.371_920_351_148_152;

/// Inputs with a larger 1-norm are rejected instead of overflowing.
pub const OVERFLOW_NORM: f64 = 1e8;

const PADE_13: [f64; 14] = [
    64_764_752_532_480_000.0,
    32_382_376_266_240_000.0,
    7_771_770_303_897_600.0,
    1_187_353_796_428_800.0,
    129_060_195_264_000.0,
    10_559_470_521_600.0,
    670_442_572_800.0,
    33_522_128_640.0,
    1_323_241_920.0,
    40_840_800.0,
    960_960.0,
    16_380.0,
    182.0,
    1.0,
];

/// Number of squarings used for an input of the given 1-norm.
pub fn squarings(norm1: f64) -> u32 {
    if norm1 <= THETA_13 {
        0
    } else {
        (norm1 / THETA_13).log2().ceil() as u32
    }
}

fn pade13<T: Real>(a: &Matrix<T>) -> Matrix<T> {
    let n = a.dim();
    let b: Vec<T> = PADE_13.iter().map(|&x| T::lit(x)).collect();
    let id = Matrix::<T>::identity(n);
    let a2 = a * a;
    let a4 = &a2 * &a2;
    let a6 = &a2 * &a4;

    let lin = |c6: T, c4: T, c2: T, c0: T| -> Matrix<T> {
        let mut m = &(&a6.scale_real(c6) + &a4.scale_real(c4)) + &a2.scale_real(c2);
        if c0 != T::zero() {
            m = &m + &id.scale_real(c0);
        }
        m
    };

    let u_inner = &(&a6 * &lin(b[13], b[11], b[9], T::zero())) + &lin(b[7], b[5], b[3], b[1]);
    let u = a * &u_inner;
    let v = &(&a6 * &lin(b[12], b[10], b[8], T::zero())) + &lin(b[6], b[4], b[2], b[0]);

    let p = &v + &u;
    let q = &v - &u;
    // q is well conditioned for ||a||_1 <= THETA_13.
    lu_factor(&q)
        .solve(&p)
        .expect("Padé denominator is nonsingular")
}

/// `exp(a)`.
pub fn expm<T: Real>(a: &Matrix<T>) -> Result<Matrix<T>> {
    let norm = a.one_norm().as_f64();
    if !(norm <= OVERFLOW_NORM) {
        return Err(Error::Overflow {
            norm,
            limit: OVERFLOW_NORM,
        });
    }
    let s = squarings(norm);
    let scaled = if s == 0 {
        a.clone()
    } else {
        a.scale(real(T::lit(0.5f64.powi(s as i32))))
    };
    let mut r = pade13(&scaled);
    for _ in 0..s {
        r = &r * &r;
    }
    if !r.is_finite() {
        return Err(Error::Overflow {
            norm,
            limit: OVERFLOW_NORM,
        });
    }
    Ok(r)
}
