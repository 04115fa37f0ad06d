//! Floating-point scalar abstraction shared by every numerical module.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FloatConst, FromPrimitive, NumAssign, ToPrimitive};

/// Real scalar backing the complex matrices: `f32` or `f64`.
///
/// `tolerance` is the absolute slack used for Hermiticity, trace and
/// positivity checks. It is `1e-10` for `f64`; `f32` gets a tolerance that
/// its 24-bit mantissa can actually meet.
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + NumAssign
    + Sum
    + Debug
    + Display
    + Default
    + Send
    + Sync
    + 'static
{
    fn tolerance() -> Self;

    /// Relative cutoff below which singular values are treated as zero.
    fn rank_cutoff() -> Self;

    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable")
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().expect("finite scalar")
    }
}

impl Real for f64 {
    #[inline]
    fn tolerance() -> f64 {
        1e-10
    }
    #[inline]
    fn rank_cutoff() -> f64 {
        1e-13
    }
}

impl Real for f32 {
    #[inline]
    fn tolerance() -> f32 {
        1e-4
    }
    #[inline]
    fn rank_cutoff() -> f32 {
        1e-6
    }
}
