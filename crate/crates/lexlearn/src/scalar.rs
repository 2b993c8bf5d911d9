//! Scalar abstraction for the numeric kernels.
//!
//! Everything downstream needs ordinary floating-point arithmetic plus `ln`
//! and `powf`, so the trait is a thin alias over [`num_traits::Float`]. Two
//! conventions used throughout live here as helpers: `0 log 0 = 0` and
//! `0^0 = 1` (the latter is already IEEE `powf` behaviour).

use std::fmt::{Debug, Display};
use std::iter::Sum;

/// Floating-point scalar the model is generic over.
pub trait Real:
    num_traits::Float + num_traits::FromPrimitive + Debug + Display + Sum + Send + Sync + 'static
{
}

impl<T> Real for T where
    T: num_traits::Float + num_traits::FromPrimitive + Debug + Display + Sum + Send + Sync + 'static
{
}

/// `v * ln(v)` with the measure-theoretic convention `0 log 0 = 0`.
#[inline]
pub fn xlogx<R: Real>(v: R) -> R {
    if v > R::zero() {
        v * v.ln()
    } else {
        R::zero()
    }
}

/// Converts a count into the scalar type.
#[inline]
pub fn real<R: Real>(v: usize) -> R {
    R::from_usize(v).expect("count representable as Real")
}

/// The constant 2 in the scalar type.
#[inline]
pub fn two<R: Real>() -> R {
    R::one() + R::one()
}
