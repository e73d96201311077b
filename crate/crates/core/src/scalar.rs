//! Floating-point abstraction shared by the exact and numerical layers.

use std::fmt::{Debug, Display};

use num_traits::{Float, FloatConst, FromPrimitive};

/// Real scalar the calculus is generic over: `f32` or `f64`.
pub trait Scalar:
    Float + FloatConst + FromPrimitive + Debug + Display + Default + Send + Sync + 'static
{
    /// Converts an `f64` literal. Panics only for non-representable values,
    /// which never happens for the finite constants used in this crate.
    #[inline]
    fn of(x: f64) -> Self {
        Self::from_f64(x).expect("literal representable in scalar type")
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    /// Smallest relative tolerance the quadrature can honestly target.
    #[inline]
    fn quad_rel_floor() -> Self {
        Self::epsilon() * Self::of(64.0)
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}
