use std::fmt::{Debug, Display};

use num_traits::{Float, FloatConst, FromPrimitive, NumAssign, ToPrimitive};

/// Floating-point scalar used by every probability computation in the crate.
///
/// Implemented for `f32` and `f64`. The associated tolerances scale with the
/// precision of the type: they are used wherever two quantities that are equal
/// in exact arithmetic must be recognized as equal after rounding.
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + NumAssign
    + Default
    + Debug
    + Display
    + Send
    + Sync
    + 'static
{
    /// Relative tolerance for equality of quantities computed from the same
    /// inputs along different arithmetic paths (likelihood ratios, pmf sums).
    fn rel_tol() -> Self;

    /// Absolute snapping distance for "is this threshold an integer" tests.
    fn snap_tol() -> Self;

    /// Tolerance below which two log-likelihoods are treated as tied.
    fn tie_tol() -> Self;

    /// Converts an `f64` literal. Never fails for the implemented types.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable")
    }

    #[inline]
    fn from_count(n: usize) -> Self {
        Self::from_usize(n).expect("count representable")
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().expect("finite conversion to f64")
    }
}

impl Real for f64 {
    fn rel_tol() -> Self {
        1e-12
    }
    fn snap_tol() -> Self {
        1e-9
    }
    fn tie_tol() -> Self {
        1e-9
    }
}

impl Real for f32 {
    fn rel_tol() -> Self {
        1e-5
    }
    fn snap_tol() -> Self {
        1e-4
    }
    fn tie_tol() -> Self {
        1e-4
    }
}

/// `true` when `a` and `b` agree to within `T::rel_tol()` relative to the larger magnitude.
pub fn approx_eq<T: Real>(a: T, b: T) -> bool {
    if a == b {
        return true;
    }
    let scale = a.abs().max(b.abs());
    (a - b).abs() <= T::rel_tol() * scale
}
