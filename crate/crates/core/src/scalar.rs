//! Scalar abstraction shared by every numerical routine in the crate.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Floating point type the pricing stack is generic over (`f32` or `f64`).
///
/// On top of `num_traits::Float` it supplies the complementary error
/// function, which the normal CDF is built on.
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + Debug
    + Display
    + Default
    + Sum
    + Send
    + Sync
    + 'static
{
    fn erfc(self) -> Self;

    /// Converts an `f64` literal into `Self`.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("literal representable in scalar type")
    }

    #[inline]
    fn from_usize_lossy(n: usize) -> Self {
        Self::from_usize(n).expect("count representable in scalar type")
    }

    #[inline]
    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Real for f64 {
    #[inline]
    fn erfc(self) -> Self {
        libm::erfc(self)
    }
}

impl Real for f32 {
    #[inline]
    fn erfc(self) -> Self {
        libm::erfcf(self)
    }
}

/// Standard normal cumulative distribution function.
///
/// Evaluated as `erfc(-x/√2)/2`, which keeps full relative accuracy in the
/// left tail instead of cancelling against 1.
#[inline]
pub fn norm_cdf<T: Real>(x: T) -> T {
    T::lit(0.5) * (-x * T::FRAC_1_SQRT_2()).erfc()
}

/// Standard normal density.
#[inline]
pub fn norm_pdf<T: Real>(x: T) -> T {
    let inv_sqrt_2pi = T::FRAC_1_SQRT_2() * T::FRAC_2_SQRT_PI() * T::lit(0.5);
    inv_sqrt_2pi * (T::lit(-0.5) * x * x).exp()
}
