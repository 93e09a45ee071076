//! Scalar abstraction shared by every numerical module.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Real floating-point scalar the toolkit is generic over (`f32` or `f64`).
pub trait Real:
    Float + FloatConst + FromPrimitive + ToPrimitive + Debug + Display + Default + Sum + Send + Sync + 'static
{
    /// Default absolute/relative tolerance for structural checks
    /// (Hermiticity, PSD floors, trace normalization).
    fn default_tol() -> Self;

    /// Relative threshold on singular values for numerical rank decisions.
    fn rank_tol() -> Self;

    /// Convert an `f64` literal.
    #[inline]
    fn lit(v: f64) -> Self {
        Self::from_f64(v).expect("literal representable")
    }

    #[inline]
    fn f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Real for f64 {
    fn default_tol() -> Self {
        1e-10
    }
    fn rank_tol() -> Self {
        1e-8
    }
}

impl Real for f32 {
    fn default_tol() -> Self {
        1e-4
    }
    fn rank_tol() -> Self {
        1e-4
    }
}

/// Complex scalar over a [`Real`].
pub type C<T> = Complex<T>;

#[inline]
pub(crate) fn c<T: Real>(re: T, im: T) -> C<T> {
    Complex::new(re, im)
}

#[inline]
pub(crate) fn re<T: Real>(re: T) -> C<T> {
    Complex::new(re, T::zero())
}
