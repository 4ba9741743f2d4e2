//! Complex Schur decomposition `A = Q T Q^H`.
//!
//! Householder reduction to upper Hessenberg form followed by single-shift
//! QR iteration (Wilkinson shifts, Givens rotations) with deflation of
//! negligible subdiagonal entries.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::scalar::{real, Real};

/// QR sweeps allowed per unit of dimension.
pub const SWEEPS_PER_DIM: usize = 30;

#[derive(Clone, Debug)]
pub struct SchurForm<T> {
    /// Unitary factor.
    pub q: Matrix<T>,
    /// Upper-triangular factor; the strictly-lower part is exactly zero.
    pub t: Matrix<T>,
    /// `diag(T)` in order.
    pub eigenvalues: Vec<Complex<T>>,
}

impl<T: Real> SchurForm<T> {
    pub fn reconstruct(&self) -> Matrix<T> {
        &(&self.q * &self.t) * &self.q.adjoint()
    }

    /// Applies `Q M Q^H`, mapping a function of `T` back to the input basis.
    pub fn conjugate(&self, m: &Matrix<T>) -> Matrix<T> {
        &(&self.q * m) * &self.q.adjoint()
    }
}

fn zero<T: Real>() -> Complex<T> {
    Complex::new(T::zero(), T::zero())
}

/// Reduces `h` to Hessenberg form in place, accumulating into `q`.
fn hessenberg<T: Real>(h: &mut [Complex<T>], q: &mut [Complex<T>], n: usize) {
    if n < 3 {
        return;
    }
    for k in 0..n - 2 {
        let mut v: Vec<Complex<T>> = (k + 1..n).map(|i| h[i * n + k]).collect();
        let xnorm = v.iter().fold(T::zero(), |acc, z| acc + z.norm_sqr()).sqrt();
        let tail = v[1..].iter().fold(T::zero(), |acc, z| acc + z.norm_sqr());
        if xnorm == T::zero() || tail == T::zero() {
            continue;
        }
        let x0 = v[0];
        let phase = if x0.norm() == T::zero() {
            real(T::one())
        } else {
            x0 / x0.norm()
        };
        // v = x + phase*||x|| e1 avoids cancellation; H x = -phase*||x|| e1.
        v[0] = x0 + phase * xnorm;
        let vnorm = v.iter().fold(T::zero(), |acc, z| acc + z.norm_sqr()).sqrt();
        for z in v.iter_mut() {
            *z /= vnorm;
        }
        let m = v.len();
        let two = T::lit(2.0);

        // h <- (I - 2 v v^H) h on rows k+1..n
        for j in 0..n {
            let mut s = zero::<T>();
            for (r, vr) in v.iter().enumerate() {
                s += vr.conj() * h[(k + 1 + r) * n + j];
            }
            s *= two;
            for (r, vr) in v.iter().enumerate() {
                h[(k + 1 + r) * n + j] -= *vr * s;
            }
        }
        // h <- h (I - 2 v v^H) and q <- q (I - 2 v v^H) on columns k+1..n
        for mat in [&mut *h, &mut *q] {
            for i in 0..n {
                let mut s = zero::<T>();
                for r in 0..m {
                    s += mat[i * n + k + 1 + r] * v[r];
                }
                s *= two;
                for r in 0..m {
                    mat[i * n + k + 1 + r] -= s * v[r].conj();
                }
            }
        }
        for i in k + 2..n {
            h[i * n + k] = zero();
        }
    }
}

/// Rotation `[[c, s], [-conj(s), c]]` with real `c` mapping `(a, b)` to `(r, 0)`.
fn givens<T: Real>(a: Complex<T>, b: Complex<T>) -> (T, Complex<T>) {
    let an = a.norm();
    let bn = b.norm();
    if bn == T::zero() {
        return (T::one(), zero());
    }
    if an == T::zero() {
        return (T::zero(), b.conj() / bn);
    }
    let norm = an.hypot(bn);
    let phase = a / an;
    (an / norm, phase * b.conj() / norm)
}

fn wilkinson_shift<T: Real>(
    a: Complex<T>,
    b: Complex<T>,
    c: Complex<T>,
    d: Complex<T>,
) -> Complex<T> {
    let p = (a - d) * T::lit(0.5);
    let bc = b * c;
    let disc = (p * p + bc).sqrt();
    let den1 = p + disc;
    let den2 = p - disc;
    let den = if den1.norm() >= den2.norm() {
        den1
    } else {
        den2
    };
    if den.norm() == T::zero() {
        d
    } else {
        d - bc / den
    }
}

/// Computes the complex Schur form of `a`.
pub fn schur_decompose<T: Real>(a: &Matrix<T>) -> Result<SchurForm<T>> {
    let n = a.dim();
    let mut h: Vec<Complex<T>> = a.as_slice().to_vec();
    let mut q: Vec<Complex<T>> = Matrix::<T>::identity(n).as_slice().to_vec();
    hessenberg(&mut h, &mut q, n);

    let eps = T::epsilon();
    let max_iter = SWEEPS_PER_DIM * n;
    let mut total = 0;
    let mut since_deflation = 0;
    let mut hi = n - 1;

    while hi > 0 {
        // Locate the start of the active unreduced block.
        let mut lo = hi;
        while lo > 0 {
            let sub = h[lo * n + lo - 1].norm();
            let scale = h[lo * n + lo].norm() + h[(lo - 1) * n + lo - 1].norm();
            let scale = if scale == T::zero() { T::one() } else { scale };
            if sub <= eps * scale {
                h[lo * n + lo - 1] = zero();
                break;
            }
            lo -= 1;
        }
        if lo == hi {
            hi -= 1;
            since_deflation = 0;
            continue;
        }
        if total >= max_iter {
            return Err(Error::Convergence { iterations: total });
        }
        total += 1;
        since_deflation += 1;

        let mu = if since_deflation % 11 == 10 {
            // Exceptional shift breaks cycling.
            h[hi * n + hi] + real(h[hi * n + hi - 1].norm() * T::lit(0.75))
        } else {
            wilkinson_shift(
                h[(hi - 1) * n + hi - 1],
                h[(hi - 1) * n + hi],
                h[hi * n + hi - 1],
                h[hi * n + hi],
            )
        };

        for i in lo..=hi {
            h[i * n + i] -= mu;
        }
        let mut rots = Vec::with_capacity(hi - lo);
        for k in lo..hi {
            let (c, s) = givens(h[k * n + k], h[(k + 1) * n + k]);
            for j in k..n {
                let x = h[k * n + j];
                let y = h[(k + 1) * n + j];
                h[k * n + j] = x * c + s * y;
                h[(k + 1) * n + j] = -s.conj() * x + y * c;
            }
            h[(k + 1) * n + k] = zero();
            rots.push((k, c, s));
        }
        for &(k, c, s) in &rots {
            // Right-multiply by G^H on columns k, k+1.
            let rows = (k + 2).min(hi + 1);
            for i in 0..rows {
                let x = h[i * n + k];
                let y = h[i * n + k + 1];
                h[i * n + k] = x * c + y * s.conj();
                h[i * n + k + 1] = -x * s + y * c;
            }
            for i in 0..n {
                let x = q[i * n + k];
                let y = q[i * n + k + 1];
                q[i * n + k] = x * c + y * s.conj();
                q[i * n + k + 1] = -x * s + y * c;
            }
        }
        for i in lo..=hi {
            h[i * n + i] += mu;
        }
    }

    for i in 1..n {
        for j in 0..i {
            h[i * n + j] = zero();
        }
    }
    let t = Matrix::from_vec(n, h).map_err(|_| Error::NonFinite("schur_decompose"))?;
    let q = Matrix::from_vec(n, q).map_err(|_| Error::NonFinite("schur_decompose"))?;
    let eigenvalues = t.diag();
    Ok(SchurForm { q, t, eigenvalues })
}
