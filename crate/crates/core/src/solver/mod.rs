//! Closed-form weights that make matrix networks interpolate data exactly.
//!
//! * one layer: `W X = Y` is solved by `W = Y X^-1`;
//! * two independent pairs: the block-diagonal weight `diag(Y1 X1^-1, Y2 X2^-1)`;
//! * the three-layer network `f(X) = W3 exp(W2 exp(W1 X))`, which maps
//!   `X1 -> Y1` and `X2 -> Y2` with a single set of `d x d` weights, see
//!   [`solve_three_layer`].

mod instance;
mod three_layer;
mod verify;

pub use self::instance::{InstanceRconds, ProblemInstance, DEFAULT_ADMISSION, MAX_RESAMPLES};
pub use self::three_layer::{
    compute_z, eval_three_layer, solve_three_layer, solve_three_layer_with, validate_alpha,
    ThreeLayerWeights, DEFAULT_ALPHA, MIN_ALPHA_GAP,
};
pub use self::verify::{verify, SolveReport, DEFAULT_TOL, IDENTITY_TOL};

use crate::error::Result;
use crate::lu::{inverse_named, DEFAULT_RCOND_FLOOR};
use crate::matrix::Matrix;
use crate::scalar::Real;

/// `W = Y X^-1`, the weight solving `W X = Y`.
pub fn solve_single_layer<T: Real>(x: &Matrix<T>, y: &Matrix<T>) -> Result<Matrix<T>> {
    let xinv = inverse_named(x, T::lit(DEFAULT_RCOND_FLOOR), "solve_single_layer")?;
    y.matmul(&xinv)
}

/// `(Y1 X1^-1, Y2 X2^-1)`: the diagonal blocks of a `2d x 2d` weight that maps
/// the stacked data to the stacked labels.
pub fn solve_block_diagonal<T: Real>(inst: &ProblemInstance<T>) -> Result<(Matrix<T>, Matrix<T>)> {
    Ok((
        solve_single_layer(&inst.x1, &inst.y1)?,
        solve_single_layer(&inst.x2, &inst.y2)?,
    ))
}

/// Relative residual of `diag(w1, w2) diag(X1, X2)` against `diag(Y1, Y2)`,
/// normalized by `max ||Yi||_F`.
pub fn block_diagonal_residual<T: Real>(
    inst: &ProblemInstance<T>,
    w1: &Matrix<T>,
    w2: &Matrix<T>,
) -> T {
    let w = Matrix::block_diagonal(&[w1.clone(), w2.clone()]);
    let x = Matrix::block_diagonal(&[inst.x1.clone(), inst.x2.clone()]);
    let y = Matrix::block_diagonal(&[inst.y1.clone(), inst.y2.clone()]);
    let scale = inst.y1.frobenius_norm().max(inst.y2.frobenius_norm());
    (&(&w * &x) - &y).frobenius_norm() / scale
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;
    use crate::random::{random_matrix, Sampling};

    fn scalar(v: f64) -> Matrix<f64> {
        Matrix::from_real_rows(&[vec![v]]).unwrap()
    }

    #[test]
    fn single_layer_identity_data() {
        let y = random_matrix::<f64>(3, 1, Sampling::ComplexGaussian);
        assert_eq!(solve_single_layer(&Matrix::identity(3), &y).unwrap(), y);
    }

    #[test]
    fn single_layer_scalar() {
        assert_eq!(
            solve_single_layer(&scalar(2.0), &scalar(6.0)).unwrap(),
            scalar(3.0)
        );
    }

    #[test]
    fn single_layer_multiply_back() {
        let x = random_matrix::<f64>(4, 2, Sampling::ComplexGaussian);
        let y = random_matrix::<f64>(4, 3, Sampling::ComplexGaussian);
        let w = solve_single_layer(&x, &y).unwrap();
        assert!((&(&w * &x) - &y).frobenius_norm() <= 1e-10 * y.frobenius_norm());
    }

    #[test]
    fn single_layer_singular() {
        let x = Matrix::from_real_rows(&[vec![1.0, 1.0], vec![1.0, 1.0]]).unwrap();
        assert!(matches!(
            solve_single_layer(&x, &Matrix::identity(2)),
            Err(Error::NearSingular { .. })
        ));
    }

    #[test]
    fn block_diagonal_cases() {
        let y1 = random_matrix::<f64>(2, 4, Sampling::ComplexGaussian);
        let y2 = random_matrix::<f64>(2, 5, Sampling::ComplexGaussian);
        let i = Matrix::identity(2);
        let inst = ProblemInstance::new(i.clone(), i, y1.clone(), y2.clone()).unwrap();
        assert_eq!(solve_block_diagonal(&inst).unwrap(), (y1, y2));

        let inst =
            ProblemInstance::new(scalar(2.0), scalar(1.0), scalar(3.0), scalar(6.0)).unwrap();
        assert_eq!(
            solve_block_diagonal(&inst).unwrap(),
            (scalar(1.5), scalar(6.0))
        );

        let (inst, _) =
            ProblemInstance::<f64>::sample(4, 8, Sampling::ComplexGaussian, DEFAULT_ADMISSION)
                .unwrap();
        let (w1, w2) = solve_block_diagonal(&inst).unwrap();
        assert!(block_diagonal_residual(&inst, &w1, &w2) <= 1e-10);
    }
}
