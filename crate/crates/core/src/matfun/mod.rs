//! Matrix exponential and logarithm over the complex numbers.

mod expm;
mod jordan;
mod logm;

use serde::{Deserialize, Serialize};

pub use self::expm::{expm, squarings, OVERFLOW_NORM, THETA_13};
pub use self::jordan::jordan_block_log;
pub use self::logm::{
    logm, logm_with_report, schur_conditioning, LogReport, MAX_SQUARE_ROOTS, MERCATOR_RADIUS,
};

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::scalar::Real;

/// Selects the logarithm sheet: every eigenvalue gets
/// `ln|lambda| + i (arg lambda + 2 pi k)` with `arg` in (-pi, pi].
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct BranchSpec {
    pub branch_offset: i64,
}

impl BranchSpec {
    pub const PRINCIPAL: Self = Self { branch_offset: 0 };

    pub fn new(branch_offset: i64) -> Self {
        Self { branch_offset }
    }
}

/// `||exp(a) exp(b) - exp(a + b)||_F / ||exp(a + b)||_F`.
///
/// Small whenever `a` and `b` commute.
pub fn check_commuting_product<T: Real>(a: &Matrix<T>, b: &Matrix<T>) -> Result<T> {
    if a.dim() != b.dim() {
        return Err(Error::Dimension {
            expected: a.dim(),
            found: b.dim(),
        });
    }
    let lhs = &expm(a)? * &expm(b)?;
    let rhs = expm(&(a + b))?;
    Ok(lhs.rel_diff(&rhs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::{random_matrix, Sampling};

    #[test]
    fn commuting_pair() {
        let a = random_matrix::<f64>(4, 1, Sampling::ComplexGaussian);
        let r = check_commuting_product(&a, &a.scale_real(2.0)).unwrap();
        assert!(r <= 1e-9, "{r}");
    }

    #[test]
    fn zero_pair() {
        let b = random_matrix::<f64>(3, 2, Sampling::ComplexGaussian);
        assert!(check_commuting_product(&Matrix::zeros(3), &b).unwrap() < 1e-14);
    }

    #[test]
    fn non_commuting_pair() {
        let a = Matrix::from_real_rows(&[vec![0.0, 1.0], vec![0.0, 0.0]]).unwrap();
        let b = Matrix::from_real_rows(&[vec![0.0, 0.0], vec![1.0, 0.0]]).unwrap();
        assert!(check_commuting_product(&a, &b).unwrap() > 1e-3);
    }

    #[test]
    fn dimension_mismatch() {
        let r = check_commuting_product(&Matrix::<f64>::zeros(2), &Matrix::zeros(3));
        assert!(matches!(r, Err(Error::Dimension { .. })));
    }
}
