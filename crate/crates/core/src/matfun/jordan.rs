use num_complex::Complex;

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::scalar::{principal_ln, real, Real};

/// Logarithm of the `m x m` Jordan block `lambda I + E` (E the upper shift).
///
/// Writes the block as `lambda (I + K)` with `K = E / lambda` and sums the
/// Mercator series `(ln lambda) I + K - K^2/2 + K^3/3 - ...`, which ends after
/// `m - 1` terms because `K^m = 0`. `ln lambda` is the principal branch.
pub fn jordan_block_log<T: Real>(lambda: Complex<T>, m: usize) -> Result<Matrix<T>> {
    if lambda.norm() == T::zero() {
        return Err(Error::SingularInput {
            kernel: "jordan_block_log",
            modulus: 0.0,
        });
    }
    if m == 0 {
        return Err(Error::InvalidParameter(
            "block size must be positive".into(),
        ));
    }
    let inv = real(T::one()) / lambda;
    let k = Matrix::from_fn(m, |i, j| if j == i + 1 { inv } else { real(T::zero()) });
    let mut log = Matrix::scalar(m, principal_ln(lambda));
    let mut power = Matrix::identity(m);
    for j in 1..m {
        power = &power * &k;
        let sign = if j % 2 == 0 { -T::one() } else { T::one() };
        log = &log + &power.scale_real(sign / T::lit(j as f64));
    }
    Ok(log)
}
