#![allow(dead_code)]

use expnet::{CMatrix, GaussianStream, Sampling};
use proptest::test_runner::{Config, RngSeed};

/// Fixed-seed proptest config so failures reproduce.
pub fn config(cases: u32) -> Config {
    Config {
        cases,
        rng_seed: RngSeed::Fixed(0x5eed),
        failure_persistence: None,
        ..Config::default()
    }
}

pub fn gaussian(dim: usize, seed: u64) -> CMatrix {
    GaussianStream::new(seed).matrix(dim, Sampling::ComplexGaussian)
}

/// Gaussian matrix rescaled to Frobenius norm `norm`.
pub fn with_norm(dim: usize, seed: u64, norm: f64) -> CMatrix {
    let g = gaussian(dim, seed);
    g.scale_real(norm / g.frobenius_norm())
}

/// `I + G`, `G` Gaussian with spectral size about `spread`; well conditioned for small `spread`.
pub fn near_identity(dim: usize, seed: u64, spread: f64) -> CMatrix {
    let g: CMatrix = GaussianStream::new(seed).matrix_scaled(
        dim,
        Sampling::ComplexGaussian,
        spread / (dim as f64).sqrt(),
    );
    &CMatrix::identity(dim) + &g
}

pub fn rel(a: &CMatrix, b: &CMatrix) -> f64 {
    a.rel_diff(b)
}
