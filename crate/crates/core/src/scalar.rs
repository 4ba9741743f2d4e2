//! Scalar abstraction shared by every kernel.

use std::fmt::{Debug, Display};

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, NumAssign, ToPrimitive};

/// Real floating-point type the kernels are generic over (`f32` or `f64`).
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + NumAssign
    + Default
    + Debug
    + Display
    + Send
    + Sync
    + 'static
{
    /// Converts an `f64` literal into this type.
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable")
    }

    /// Lossy conversion back to `f64`, used for error payloads and reports.
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Real for f32 {}
impl Real for f64 {}

pub(crate) fn cplx<T: Real>(re: T, im: T) -> Complex<T> {
    Complex::new(re, im)
}

pub(crate) fn real<T: Real>(re: T) -> Complex<T> {
    Complex::new(re, T::zero())
}

/// Principal argument in (-pi, pi]. A zero imaginary part of either sign
/// maps the negative real axis to +pi. A nonzero negative imaginary part keeps
/// `atan2`'s sign even when the result rounds to -pi, so the argument stays
/// consistent with [`principal_sqrt`] just below the cut.
pub fn principal_arg<T: Real>(z: Complex<T>) -> T {
    let im = if z.im == T::zero() { T::zero() } else { z.im };
    im.atan2(z.re)
}

/// Principal scalar logarithm `ln|z| + i arg z`, arg in (-pi, pi].
pub fn principal_ln<T: Real>(z: Complex<T>) -> Complex<T> {
    cplx(z.norm().ln(), principal_arg(z))
}

/// Principal square root, consistent with [`principal_arg`] on the cut.
pub fn principal_sqrt<T: Real>(z: Complex<T>) -> Complex<T> {
    let z = if z.im == T::zero() {
        cplx(z.re, T::zero())
    } else {
        z
    };
    z.sqrt()
}
