//! Scalar abstraction shared by the numerical modules.

use std::fmt::{Debug, Display, LowerExp};

use num_traits::{Float, FloatConst, FromPrimitive, NumAssign, ToPrimitive};

/// Real floating-point scalar the operator algebra is written against.
///
/// Implemented for `f32` and `f64`. Tolerances in this crate are stated at
/// double precision; [`tol`] widens them to what the scalar can resolve.
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + NumAssign
    + Debug
    + Display
    + LowerExp
    + Default
    + Send
    + Sync
    + 'static
{
    /// Lossy conversion from an `f64` literal.
    fn lit(v: f64) -> Self {
        Self::from_f64(v).expect("f64 literal representable in scalar")
    }

    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// A nominal double-precision tolerance, floored at 64 ulps of the scalar.
pub fn tol<T: Real>(nominal: f64) -> T {
    T::lit(nominal).max(T::epsilon() * T::lit(64.0))
}

/// Exact conversion of a small integer.
pub fn int<T: Real>(n: i64) -> T {
    T::from_i64(n).expect("small integer representable in scalar")
}
