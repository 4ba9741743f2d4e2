//! Reproducible Gaussian matrix sampling.
//!
//! The bit source is ChaCha8 (`rand_chacha::ChaCha8Rng`) seeded with
//! `SeedableRng::seed_from_u64`. Each uniform draw takes the top 53 bits of
//! one `next_u64` output, `u = (x >> 11) * 2^-53` in `[0, 1)`. Standard
//! normals come from the Box–Muller transform on pairs of uniforms:
//!
//! ```text
//! r  = sqrt(-2 ln(1 - u1))
//! z0 = r cos(2 pi u2)
//! z1 = r sin(2 pi u2)
//! ```
//!
//! `z0` is returned first and `z1` is cached for the next call. Matrices are
//! filled row-major; complex entries draw the real part, then the imaginary
//! part. All arithmetic is done in `f64` and cast to the target scalar.

use num_complex::Complex;
use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};
use serde::{Deserialize, Serialize};

use crate::matrix::Matrix;
use crate::scalar::Real;

/// Entry distribution for [`random_matrix`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Sampling {
    /// Independent N(0,1) real and imaginary parts.
    ComplexGaussian,
    /// N(0,1) real part, imaginary part exactly zero.
    RealGaussian,
}

impl std::str::FromStr for Sampling {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "complex-gaussian" => Ok(Self::ComplexGaussian),
            "real-gaussian" => Ok(Self::RealGaussian),
            other => Err(format!("unknown sampling kind `{other}`")),
        }
    }
}

/// Seeded stream of standard normal variates.
#[derive(Clone, Debug)]
pub struct GaussianStream {
    rng: ChaCha8Rng,
    spare: Option<f64>,
}

impl GaussianStream {
    pub fn new(seed: u64) -> Self {
        Self {
            rng: ChaCha8Rng::seed_from_u64(seed),
            spare: None,
        }
    }

    /// Uniform in `[0, 1)` with 53 random bits.
    pub fn uniform(&mut self) -> f64 {
        (self.rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    pub fn standard_normal(&mut self) -> f64 {
        if let Some(z) = self.spare.take() {
            return z;
        }
        let u1 = self.uniform();
        let u2 = self.uniform();
        let r = (-2.0 * (1.0 - u1).ln()).sqrt();
        let theta = 2.0 * std::f64::consts::PI * u2;
        self.spare = Some(r * theta.sin());
        r * theta.cos()
    }

    /// Next `dim x dim` matrix from the stream.
    pub fn matrix<T: Real>(&mut self, dim: usize, kind: Sampling) -> Matrix<T> {
        self.matrix_scaled(dim, kind, 1.0)
    }

    /// Like [`GaussianStream::matrix`] with every entry multiplied by `scale`.
    pub fn matrix_scaled<T: Real>(&mut self, dim: usize, kind: Sampling, scale: f64) -> Matrix<T> {
        Matrix::from_fn(dim, |_, _| {
            let re = self.standard_normal() * scale;
            let im = match kind {
                Sampling::ComplexGaussian => self.standard_normal() * scale,
                Sampling::RealGaussian => 0.0,
            };
            Complex::new(T::lit(re), T::lit(im))
        })
    }
}

/// Gaussian matrix that is a pure function of `(dim, seed, kind)`.
pub fn random_matrix<T: Real>(dim: usize, seed: u64, kind: Sampling) -> Matrix<T> {
    GaussianStream::new(seed).matrix(dim, kind)
}
