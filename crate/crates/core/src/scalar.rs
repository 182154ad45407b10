//! Scalar abstraction for objective values.
//!
//! Everything that evaluates or compares set-function values is generic over
//! [`Scalar`]. Floating point (`f32`, `f64`) is the everyday choice; the exact
//! [`Rational64`] instance is there for instances whose bound checks must not
//! suffer rounding.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_rational::Rational64;
use num_traits::{FromPrimitive, Num, Signed, ToPrimitive};

/// A totally ordered (on the values we produce) signed number type.
pub trait Scalar:
    Num + Signed + Copy + PartialOrd + Sum + Debug + Display + Send + Sync + 'static
{
    /// Lossy conversion used for reporting and probability computations.
    fn to_f64(self) -> f64;

    /// Conversion from a float; `None` when the value is not representable.
    fn from_f64(value: f64) -> Option<Self>;

    /// Exact conversion from a small integer.
    fn from_usize(value: usize) -> Self;
}

macro_rules! impl_float_scalar {
    ($($ty:ty),*) => {
        $(
            impl Scalar for $ty {
                fn to_f64(self) -> f64 {
                    self as f64
                }

                fn from_f64(value: f64) -> Option<Self> {
                    value.is_finite().then_some(value as $ty)
                }

                fn from_usize(value: usize) -> Self {
                    value as $ty
                }
            }
        )*
    };
}

impl_float_scalar!(f32, f64);

impl Scalar for Rational64 {
    fn to_f64(self) -> f64 {
        ToPrimitive::to_f64(&self).unwrap_or(f64::NAN)
    }

    fn from_f64(value: f64) -> Option<Self> {
        <Rational64 as FromPrimitive>::from_f64(value)
    }

    fn from_usize(value: usize) -> Self {
        Rational64::from_integer(value as i64)
    }
}

/// Larger of two partially ordered values, preferring `a` on ties.
pub fn max_of<T: Scalar>(a: T, b: T) -> T {
    if b > a {
        b
    } else {
        a
    }
}
