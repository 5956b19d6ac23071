//! Scalar abstraction for state arithmetic.

use std::fmt::{Debug, Display};

use num_traits::{Float, FloatConst, FromPrimitive, NumAssignOps};

/// Floating-point scalar: `f32` or `f64`.
pub trait Real:
    Float + FloatConst + FromPrimitive + NumAssignOps + Debug + Display + Send + Sync + 'static
{
    /// Lossless-enough conversion from `f64` for constants and tolerances.
    fn from_f64_const(value: f64) -> Self {
        Self::from_f64(value).expect("constant representable in scalar type")
    }

    /// Conversion from a grid index or count.
    fn from_usize_exact(value: usize) -> Self {
        Self::from_usize(value).expect("count representable in scalar type")
    }
}

impl Real for f32 {}
impl Real for f64 {}
