//! Scalar abstractions shared by the exact, interval and floating-point layers.
//!
//! Polynomial code is written once against [`Coeff`] and instantiated over
//! exact rationals, complex interval boxes and algebraic numbers. Geometry is
//! written against [`Real`] and instantiated over `f32`/`f64`.

use std::fmt::Debug;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::Rat;

/// A commutative ring element usable as a polynomial coefficient.
///
/// `is_zero` must only return true for an exact zero; interval types that
/// merely contain zero are not zero.
pub trait Coeff:
    Clone
    + Debug
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    fn from_i64(v: i64) -> Self;
}

impl Coeff for Rat {
    fn from_i64(v: i64) -> Self {
        Rat::from_integer(v.into())
    }
}

/// Hardware float used by the geometry oracle.
pub trait Real:
    num_traits::Float + num_traits::FromPrimitive + Debug + std::fmt::Display + Send + Sync + 'static
{
    fn from_rat(r: &Rat) -> Self {
        use num_traits::ToPrimitive;
        Self::from_f64(r.to_f64().unwrap_or(f64::NAN)).unwrap_or_else(Self::nan)
    }
}

impl Real for f32 {}
impl Real for f64 {}
