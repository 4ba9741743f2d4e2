//! Partial-pivoted LU factorization with a 1-norm reciprocal condition number.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::scalar::Real;

/// Default floor below which plumbing inverses refuse to proceed.
pub const DEFAULT_RCOND_FLOOR: f64 = 1e-10;

/// `P A = L U` with unit-lower `L` and upper `U` packed in one array.
///
/// `perm[i]` is the row of `A` that ended up in row `i`. `rcond` is
/// `1 / (||A||_1 ||A^-1||_1)` with `A^-1` formed from the factors, and is
/// exactly zero when a zero pivot was met.
#[derive(Clone, Debug)]
pub struct LuFactors<T> {
    packed: Vec<Complex<T>>,
    dim: usize,
    perm: Vec<usize>,
    swaps: usize,
    rcond: T,
}

impl<T: Real> LuFactors<T> {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn permutation(&self) -> &[usize] {
        &self.perm
    }

    pub fn rcond(&self) -> T {
        self.rcond
    }

    pub fn is_singular(&self) -> bool {
        self.rcond == T::zero()
    }

    pub fn lower(&self) -> Matrix<T> {
        let n = self.dim;
        Matrix::from_fn(n, |i, j| match i.cmp(&j) {
            std::cmp::Ordering::Greater => self.packed[i * n + j],
            std::cmp::Ordering::Equal => Complex::new(T::one(), T::zero()),
            std::cmp::Ordering::Less => Complex::new(T::zero(), T::zero()),
        })
    }

    pub fn upper(&self) -> Matrix<T> {
        let n = self.dim;
        Matrix::from_fn(n, |i, j| {
            if i <= j {
                self.packed[i * n + j]
            } else {
                Complex::new(T::zero(), T::zero())
            }
        })
    }

    /// `P A`, the row-permuted input that `L U` reproduces.
    pub fn permute_rows(&self, a: &Matrix<T>) -> Matrix<T> {
        Matrix::from_fn(self.dim, |i, j| a[(self.perm[i], j)])
    }

    pub fn determinant(&self) -> Complex<T> {
        let n = self.dim;
        let mut det = Complex::new(T::one(), T::zero());
        for i in 0..n {
            det *= self.packed[i * n + i];
        }
        if self.swaps % 2 == 1 {
            -det
        } else {
            det
        }
    }

    /// Solves `A x = b` in place. Assumes the factorization is nonsingular.
    fn solve_vec(&self, b: &mut [Complex<T>]) {
        let n = self.dim;
        let permuted: Vec<Complex<T>> = self.perm.iter().map(|&p| b[p]).collect();
        b.copy_from_slice(&permuted);
        for i in 0..n {
            let mut acc = b[i];
            for k in 0..i {
                acc -= self.packed[i * n + k] * b[k];
            }
            b[i] = acc;
        }
        for i in (0..n).rev() {
            let mut acc = b[i];
            for k in i + 1..n {
                acc -= self.packed[i * n + k] * b[k];
            }
            b[i] = acc / self.packed[i * n + i];
        }
    }

    /// Solves `A X = B` column by column.
    pub fn solve(&self, b: &Matrix<T>) -> Result<Matrix<T>> {
        if b.dim() != self.dim {
            return Err(Error::Dimension {
                expected: self.dim,
                found: b.dim(),
            });
        }
        if self.is_singular() {
            return Err(Error::NearSingular {
                kernel: "lu_solve",
                rcond: 0.0,
                floor: 0.0,
            });
        }
        Ok(self.solve_unchecked(b))
    }

    fn solve_unchecked(&self, b: &Matrix<T>) -> Matrix<T> {
        let n = self.dim;
        let mut out = Matrix::zeros(n);
        let mut col = vec![Complex::new(T::zero(), T::zero()); n];
        for j in 0..n {
            for (i, c) in col.iter_mut().enumerate() {
                *c = b[(i, j)];
            }
            self.solve_vec(&mut col);
            for (i, &c) in col.iter().enumerate() {
                out.set(i, j, c);
            }
        }
        out
    }
}

/// Factors `a`. Never fails: singularity is reported through `rcond == 0`.
pub fn lu_factor<T: Real>(a: &Matrix<T>) -> LuFactors<T> {
    let n = a.dim();
    let mut lu: Vec<Complex<T>> = a.as_slice().to_vec();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut swaps = 0;
    let mut singular = false;

    for k in 0..n {
        let (p, pmax) =
            (k..n)
                .map(|i| (i, lu[i * n + k].norm()))
                .fold((k, T::neg_infinity()), |best, cur| {
                    if cur.1 > best.1 {
                        cur
                    } else {
                        best
                    }
                });
        if p != k {
            for j in 0..n {
                lu.swap(k * n + j, p * n + j);
            }
            perm.swap(k, p);
            swaps += 1;
        }
        if pmax == T::zero() {
            singular = true;
            continue;
        }
        let pivot = lu[k * n + k];
        for i in k + 1..n {
            let l = lu[i * n + k] / pivot;
            lu[i * n + k] = l;
            for j in k + 1..n {
                let u = lu[k * n + j];
                lu[i * n + j] -= l * u;
            }
        }
    }

    let mut factors = LuFactors {
        packed: lu,
        dim: n,
        perm,
        swaps,
        rcond: T::zero(),
    };
    if !singular {
        let inv = factors.solve_unchecked(&Matrix::identity(n));
        let kappa = a.one_norm() * inv.one_norm();
        factors.rcond = if kappa.is_finite() && kappa > T::zero() {
            (T::one() / kappa).min(T::one())
        } else {
            T::zero()
        };
    }
    factors
}

/// Reciprocal 1-norm condition number of `a`.
pub fn rcond<T: Real>(a: &Matrix<T>) -> T {
    lu_factor(a).rcond()
}

/// Inverse of `a`, refused when `rcond(a) <= rcond_floor`.
pub fn inverse<T: Real>(a: &Matrix<T>, rcond_floor: T) -> Result<Matrix<T>> {
    inverse_named(a, rcond_floor, "inverse")
}

pub(crate) fn inverse_named<T: Real>(
    a: &Matrix<T>,
    rcond_floor: T,
    kernel: &'static str,
) -> Result<Matrix<T>> {
    let lu = lu_factor(a);
    if lu.rcond() <= rcond_floor {
        return Err(Error::NearSingular {
            kernel,
            rcond: lu.rcond().as_f64(),
            floor: rcond_floor.as_f64(),
        });
    }
    Ok(lu.solve_unchecked(&Matrix::identity(a.dim())))
}

/// Solves `a X = b`, refused when `rcond(a) <= rcond_floor`.
pub fn solve<T: Real>(a: &Matrix<T>, b: &Matrix<T>, rcond_floor: T) -> Result<Matrix<T>> {
    let lu = lu_factor(a);
    if lu.rcond() <= rcond_floor {
        return Err(Error::NearSingular {
            kernel: "solve",
            rcond: lu.rcond().as_f64(),
            floor: rcond_floor.as_f64(),
        });
    }
    lu.solve(b)
}

pub fn determinant<T: Real>(a: &Matrix<T>) -> Complex<T> {
    lu_factor(a).determinant()
}
