//! Floating point abstraction shared by every numerical module.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Real scalar the toolkit is generic over: `f32` or `f64`.
pub trait Scalar:
    Float + FloatConst + FromPrimitive + ToPrimitive + Sum + Default + Debug + Display + Send + Sync + 'static
{
    /// Converts an `f64` literal into this scalar type.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable in scalar type")
    }

    #[inline]
    fn from_usize_exact(n: usize) -> Self {
        Self::from_usize(n).expect("usize representable in scalar type")
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}

/// Sine and cosine of an angle in degrees.
///
/// Multiples of 90° give exact zeros and unit values, and the cosine of
/// `180 - θ` is the exact negation of the cosine of `θ`.
pub fn sin_cos_deg<T: Scalar>(deg: T) -> (T, T) {
    let ninety = T::lit(90.0);
    let one_eighty = T::lit(180.0);
    if deg > ninety && deg <= one_eighty {
        let (s, c) = sin_cos_deg(one_eighty - deg);
        return (s, -c);
    }
    if deg == T::zero() {
        return (T::zero(), T::one());
    }
    if deg == ninety {
        return (T::one(), T::zero());
    }
    deg.to_radians().sin_cos()
}
