//! Scalar abstraction: the whole crate is generic over the floating-point
//! type through this trait, with concrete aliases at the crate root.

use std::fmt::{Debug, Display, LowerExp};
use std::iter::Sum;

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, NumAssign};

/// Floating-point scalar the numerics are generic over (`f32` or `f64`).
pub trait Scalar:
    Float
    + FloatConst
    + NumAssign
    + FromPrimitive
    + Sum<Self>
    + Debug
    + Display
    + LowerExp
    + Send
    + Sync
    + 'static
{
    fn of(x: f64) -> Self {
        Self::from_f64(x).expect("constant not representable in scalar type")
    }

    fn of_usize(n: usize) -> Self {
        Self::from_usize(n).unwrap_or_else(|| Self::of(n as f64))
    }

    fn of_i64(n: i64) -> Self {
        Self::from_i64(n).unwrap_or_else(|| Self::of(n as f64))
    }

    fn as_f64(self) -> f64 {
        self.to_f64().expect("scalar convertible to f64")
    }
}

impl<T> Scalar for T where
    T: Float
        + FloatConst
        + NumAssign
        + FromPrimitive
        + Sum<T>
        + Debug
        + Display
        + LowerExp
        + Send
        + Sync
        + 'static
{
}

/// Complex number over the generic scalar.
pub type C<T> = Complex<T>;

pub fn c<T: Scalar>(re: T, im: T) -> C<T> {
    Complex::new(re, im)
}

/// Real number as a complex value.
pub fn cr<T: Scalar>(re: T) -> C<T> {
    Complex::new(re, T::zero())
}

/// Purely imaginary value `i*im`.
pub fn ci<T: Scalar>(im: T) -> C<T> {
    Complex::new(T::zero(), im)
}

/// `exp(i*angle)` on the unit circle.
pub fn unit_phase<T: Scalar>(angle: T) -> C<T> {
    Complex::new(angle.cos(), angle.sin())
}

/// Shorthand for `T::of(x)`; keeps generic formulas readable.
pub fn lit<T: Scalar>(x: f64) -> T {
    T::of(x)
}

/// Wraps an angle into the fundamental interval `[-pi, pi)`.
pub fn wrap_angle<T: Scalar>(phi: T) -> T {
    let two_pi = T::PI() + T::PI();
    let mut w = phi - two_pi * ((phi + T::PI()) / two_pi).floor();
    // floor rounding can land exactly on +pi
    if w >= T::PI() {
        w = w - two_pi;
    }
    w
}

/// Distance on the circle from `phi` to the point `pi` (== `-pi`).
pub fn dist_to_pi<T: Scalar>(phi: T) -> T {
    let w = wrap_angle(phi);
    T::PI() - w.abs()
}
