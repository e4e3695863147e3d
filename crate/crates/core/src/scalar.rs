//! Scalar abstractions.
//!
//! Dense linear algebra is generic over [`Real`] (implemented for `f32` and
//! `f64`); brute-force partition sums are generic over [`Weight`], which also
//! covers exact rationals so that sign questions can be settled without
//! rounding.

use std::fmt::{Debug, Display};

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, Num};

/// Floating point type used for dense operators.
pub trait Real:
    Float + FloatConst + FromPrimitive + Debug + Display + Default + Send + Sync + 'static
{
    /// Convert an `f64` constant; never fails for finite inputs.
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("finite literal")
    }

    /// `e^{i pi k / n}` computed from the reduced angle.
    fn root_of_unity(k: i64, n: i64) -> Complex<Self> {
        let k = k.rem_euclid(2 * n);
        let angle = Self::PI() * Self::lit(k as f64) / Self::lit(n as f64);
        Complex::new(angle.cos(), angle.sin())
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// Ring element usable as a Boltzmann weight in exhaustive sums.
pub trait Weight: Num + Clone + Send + Sync {
    fn from_i64(x: i64) -> Self;
}

impl Weight for f64 {
    fn from_i64(x: i64) -> Self {
        x as f64
    }
}

impl Weight for f32 {
    fn from_i64(x: i64) -> Self {
        x as f32
    }
}

impl Weight for num_rational::BigRational {
    fn from_i64(x: i64) -> Self {
        num_rational::BigRational::from_integer(x.into())
    }
}

impl Weight for num_rational::Rational64 {
    fn from_i64(x: i64) -> Self {
        num_rational::Rational64::from_integer(x)
    }
}
