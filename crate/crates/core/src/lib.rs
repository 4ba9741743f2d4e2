//! Exact memorization of two data points with a three-layer network built from
//! the matrix exponential, together with the dense complex linear algebra it
//! needs (LU, Schur, `expm`, `logm`) and a gradient-descent experiment on the
//! two-layer objective with elementwise activations.
//!
//! Everything numeric is generic over [`Real`] (`f32` or `f64`); the aliases
//! below fix the scalar to `f64`, which is what the JSON formats, the trace
//! CSV and the command-line tool use.

// `!(x > floor)` rejects NaN too; index loops mirror the triangular-solve recurrences.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod error;
pub mod experiment;
pub mod json;
pub mod lu;
pub mod matfun;
pub mod matrix;
pub mod random;
pub mod scalar;
pub mod schur;
pub mod solver;

pub use error::{Error, Result};
pub use matfun::{expm, logm, BranchSpec};
pub use matrix::Matrix;
pub use random::{GaussianStream, Sampling};
pub use scalar::Real;
pub use solver::{solve_three_layer, verify};

pub type Complex64 = num_complex::Complex<f64>;
pub type CMatrix = Matrix<f64>;
pub type CMatrix32 = Matrix<f32>;
pub type Instance = solver::ProblemInstance<f64>;
pub type Weights = solver::ThreeLayerWeights<f64>;
pub type Schur = schur::SchurForm<f64>;
pub type Lu = lu::LuFactors<f64>;
