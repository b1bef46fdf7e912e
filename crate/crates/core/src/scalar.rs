//! Scalar abstraction shared by every index.

use std::fmt::{Debug, Display};

use num_traits::{Float, FromPrimitive, ToPrimitive};

/// Floating point coordinate / probability type: `f32` or `f64`.
pub trait Scalar:
    Float + FromPrimitive + ToPrimitive + Debug + Display + Default + Send + Sync + 'static
{
    /// Lossy conversion from a literal, used for constants.
    fn lit(v: f64) -> Self {
        Self::from_f64(v).expect("literal fits scalar")
    }

    fn as_f64(self) -> f64 {
        self.to_f64().expect("scalar converts to f64")
    }

    /// Slack used when a structure walks on approximate line heights and the
    /// final answer is decided by exact cdf evaluation.
    fn walk_slack() -> Self;
}

impl Scalar for f64 {
    fn walk_slack() -> Self {
        1e-9
    }
}

impl Scalar for f32 {
    fn walk_slack() -> Self {
        1e-4
    }
}

/// Total order on scalars for sorting; NaN never reaches the indexes.
#[inline]
pub(crate) fn cmp<S: Scalar>(a: S, b: S) -> std::cmp::Ordering {
    a.partial_cmp(&b).unwrap_or(std::cmp::Ordering::Equal)
}
