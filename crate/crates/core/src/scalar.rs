//! Floating-point scalar abstraction shared by every numerical routine.

use std::fmt::{Debug, Display, LowerExp};

use num_traits::{Float, FromPrimitive, NumAssignOps, ToPrimitive};

/// Real scalar type the library is generic over (`f32` or `f64`).
///
/// Tolerances are tied to the type: the defaults below are what the
/// structural checks (trace, Hermiticity) and the semidefiniteness decisions
/// use when no explicit tolerance is supplied.
pub trait Scalar:
    Float
    + FromPrimitive
    + ToPrimitive
    + NumAssignOps
    + Debug
    + Display
    + LowerExp
    + Default
    + Send
    + Sync
    + 'static
{
    /// Relative tolerance for PSD and criterion-violation decisions.
    fn default_tol() -> Self;

    /// Absolute tolerance for trace and Hermiticity checks.
    fn structural_tol() -> Self;

    /// Converts an `f64` literal. Never fails for finite inputs.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("finite literal")
    }

    #[inline]
    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Scalar for f64 {
    fn default_tol() -> Self {
        1e-10
    }

    fn structural_tol() -> Self {
        1e-12
    }
}

impl Scalar for f32 {
    fn default_tol() -> Self {
        1e-4
    }

    fn structural_tol() -> Self {
        1e-5
    }
}
