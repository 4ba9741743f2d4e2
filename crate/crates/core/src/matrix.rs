//! Dense square complex matrices.

use std::ops::{Add, Index, Mul, Neg, Sub};

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::{real, Real};

/// A dense `dim x dim` complex matrix stored row-major.
///
/// Entries are checked finite on construction. Values are immutable once
/// built; arithmetic returns new matrices.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix<T> {
    dim: usize,
    data: Vec<Complex<T>>,
}

impl<T: Real> Matrix<T> {
    /// Builds a matrix from row-major entries.
    pub fn from_vec(dim: usize, data: Vec<Complex<T>>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidMatrix("dimension must be positive".into()));
        }
        if data.len() != dim * dim {
            return Err(Error::InvalidMatrix(format!(
                "expected {} entries for dim {dim}, found {}",
                dim * dim,
                data.len()
            )));
        }
        if data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidMatrix("entries must be finite".into()));
        }
        Ok(Self { dim, data })
    }

    pub fn from_rows(rows: &[Vec<Complex<T>>]) -> Result<Self> {
        let dim = rows.len();
        if rows.iter().any(|r| r.len() != dim) {
            return Err(Error::InvalidMatrix("rows must have length dim".into()));
        }
        Self::from_vec(dim, rows.iter().flatten().copied().collect())
    }

    /// Builds a matrix with zero imaginary parts from real rows.
    pub fn from_real_rows(rows: &[Vec<T>]) -> Result<Self> {
        let rows: Vec<Vec<Complex<T>>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| real(x)).collect())
            .collect();
        Self::from_rows(&rows)
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> Complex<T>) -> Self {
        assert!(dim > 0, "dimension must be positive");
        let mut data = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                data.push(f(i, j));
            }
        }
        Self { dim, data }
    }

    pub fn zeros(dim: usize) -> Self {
        Self::from_fn(dim, |_, _| Complex::new(T::zero(), T::zero()))
    }

    pub fn identity(dim: usize) -> Self {
        Self::scalar(dim, Complex::new(T::one(), T::zero()))
    }

    /// `value * I`.
    pub fn scalar(dim: usize, value: Complex<T>) -> Self {
        Self::from_fn(dim, |i, j| {
            if i == j {
                value
            } else {
                Complex::new(T::zero(), T::zero())
            }
        })
    }

    pub fn diagonal(values: &[Complex<T>]) -> Self {
        Self::from_fn(values.len(), |i, j| {
            if i == j {
                values[i]
            } else {
                Complex::new(T::zero(), T::zero())
            }
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn as_slice(&self) -> &[Complex<T>] {
        &self.data
    }

    pub(crate) fn set(&mut self, i: usize, j: usize, value: Complex<T>) {
        self.data[i * self.dim + j] = value;
    }

    pub fn row(&self, i: usize) -> &[Complex<T>] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }

    pub fn diag(&self) -> Vec<Complex<T>> {
        (0..self.dim).map(|i| self[(i, i)]).collect()
    }

    pub fn trace(&self) -> Complex<T> {
        self.diag()
            .into_iter()
            .fold(Complex::new(T::zero(), T::zero()), |acc, z| acc + z)
    }

    pub fn is_finite(&self) -> bool {
        self.data
            .iter()
            .all(|z| z.re.is_finite() && z.im.is_finite())
    }

    /// Largest absolute imaginary part.
    pub fn max_imag(&self) -> T {
        self.data.iter().fold(T::zero(), |m, z| m.max(z.im.abs()))
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self[(j, i)])
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self[(j, i)].conj())
    }

    pub fn map(&self, f: impl Fn(Complex<T>) -> Complex<T>) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|&z| f(z)).collect(),
        }
    }

    /// Entry-wise (Hadamard) product.
    pub fn hadamard(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim, "hadamard: dimension mismatch");
        Self {
            dim: self.dim,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(&a, &b)| a * b)
                .collect(),
        }
    }

    pub fn scale(&self, s: Complex<T>) -> Self {
        self.map(|z| z * s)
    }

    pub fn scale_real(&self, s: T) -> Self {
        self.map(|z| z * s)
    }

    /// `self + value * I`.
    pub fn add_scalar(&self, value: Complex<T>) -> Self {
        let mut out = self.clone();
        for i in 0..self.dim {
            out.data[i * self.dim + i] += value;
        }
        out
    }

    pub fn frobenius_norm(&self) -> T {
        self.data
            .iter()
            .fold(T::zero(), |acc, z| acc + z.norm_sqr())
            .sqrt()
    }

    /// Maximum absolute column sum.
    pub fn one_norm(&self) -> T {
        (0..self.dim)
            .map(|j| (0..self.dim).fold(T::zero(), |acc, i| acc + self[(i, j)].norm()))
            .fold(T::zero(), T::max)
    }

    /// Checked product; fails when the dimensions differ.
    pub fn matmul(&self, other: &Self) -> Result<Self> {
        if self.dim != other.dim {
            return Err(Error::Dimension {
                expected: self.dim,
                found: other.dim,
            });
        }
        Ok(self.mul_unchecked(other))
    }

    fn mul_unchecked(&self, other: &Self) -> Self {
        let n = self.dim;
        let zero = Complex::new(T::zero(), T::zero());
        let mut data = vec![zero; n * n];
        // i-k-j order: accumulation order over k is fixed for every entry.
        for i in 0..n {
            let out = &mut data[i * n..(i + 1) * n];
            for k in 0..n {
                let a = self.data[i * n + k];
                if a == zero {
                    continue;
                }
                let brow = &other.data[k * n..(k + 1) * n];
                for (o, &b) in out.iter_mut().zip(brow) {
                    *o += a * b;
                }
            }
        }
        Self { dim: n, data }
    }

    /// Relative Frobenius distance `||self - other|| / ||other||`, falling
    /// back to the absolute distance when `other` is zero.
    pub fn rel_diff(&self, other: &Self) -> T {
        let num = (self - other).frobenius_norm();
        let den = other.frobenius_norm();
        if den > T::zero() {
            num / den
        } else {
            num
        }
    }

    /// Copy with the strictly-lower triangle zeroed.
    pub fn upper_triangle(&self) -> Self {
        Self::from_fn(self.dim, |i, j| {
            if i > j {
                Complex::new(T::zero(), T::zero())
            } else {
                self[(i, j)]
            }
        })
    }

    /// Casts every entry to another real type.
    pub fn cast<U: Real>(&self) -> Matrix<U> {
        Matrix {
            dim: self.dim,
            data: self
                .data
                .iter()
                .map(|z| Complex::new(U::lit(z.re.as_f64()), U::lit(z.im.as_f64())))
                .collect(),
        }
    }

    /// Block-diagonal assembly `diag(blocks[0], blocks[1], ...)`.
    pub fn block_diagonal(blocks: &[Self]) -> Self {
        let n: usize = blocks.iter().map(Self::dim).sum();
        let mut out = Self::zeros(n);
        let mut offset = 0;
        for b in blocks {
            for i in 0..b.dim {
                for j in 0..b.dim {
                    out.set(offset + i, offset + j, b[(i, j)]);
                }
            }
            offset += b.dim;
        }
        out
    }
}

impl<T> Index<(usize, usize)> for Matrix<T> {
    type Output = Complex<T>;

    fn index(&self, (i, j): (usize, usize)) -> &Complex<T> {
        &self.data[i * self.dim + j]
    }
}

impl<T: Real> Mul for &Matrix<T> {
    type Output = Matrix<T>;

    /// Panics on dimension mismatch; use [`Matrix::matmul`] for a checked product.
    fn mul(self, rhs: Self) -> Matrix<T> {
        assert_eq!(self.dim, rhs.dim, "matmul: dimension mismatch");
        self.mul_unchecked(rhs)
    }
}

impl<T: Real> Add for &Matrix<T> {
    type Output = Matrix<T>;

    fn add(self, rhs: Self) -> Matrix<T> {
        assert_eq!(self.dim, rhs.dim, "add: dimension mismatch");
        Matrix {
            dim: self.dim,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(&a, &b)| a + b)
                .collect(),
        }
    }
}

impl<T: Real> Sub for &Matrix<T> {
    type Output = Matrix<T>;

    fn sub(self, rhs: Self) -> Matrix<T> {
        assert_eq!(self.dim, rhs.dim, "sub: dimension mismatch");
        Matrix {
            dim: self.dim,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(&a, &b)| a - b)
                .collect(),
        }
    }
}

impl<T: Real> Neg for &Matrix<T> {
    type Output = Matrix<T>;

    fn neg(self) -> Matrix<T> {
        self.map(|z| -z)
    }
}

/// Checked product `a * b`.
pub fn matmul<T: Real>(a: &Matrix<T>, b: &Matrix<T>) -> Result<Matrix<T>> {
    a.matmul(b)
}
