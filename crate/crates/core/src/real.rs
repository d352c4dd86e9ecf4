//! Scalar abstraction for all numeric kernels.
//!
//! Everything in this crate is generic over a floating-point scalar so the
//! same kernels run in `f32` or `f64`. Concrete `f64` aliases live at the
//! crate root.

use num_traits::{Float, FromPrimitive, ToPrimitive};
use std::fmt::{Debug, Display};

/// Floating-point scalar usable as a time or state value: `f32` or `f64`.
pub trait Real: Float + FromPrimitive + ToPrimitive + Debug + Display + Send + Sync + 'static {
    /// Lossy widening to `f64`, used for diagnostics and error payloads.
    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().expect("scalar converts to f64")
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// Shorthand for lifting an `f64` literal into the working scalar type.
#[inline]
pub fn cst<T: Real>(v: f64) -> T {
    T::from_f64(v).expect("f64 literal must be representable in the scalar type")
}

/// Absolute tolerance used for time comparisons and scale membership.
#[inline]
pub fn time_tol<T: Real>() -> T {
    cst(1e-9)
}

/// Tolerance guarding the `1 + mu*p` division in the regressivity group.
#[inline]
pub fn regressivity_tol<T: Real>() -> T {
    cst(1e-12)
}
