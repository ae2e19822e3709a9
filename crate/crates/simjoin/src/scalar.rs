use std::fmt::{Debug, Display};

use num_traits::{Float, FromPrimitive};

/// Scalar type for coordinate values, similarity scores, and pruning bounds.
///
/// Timestamps are always `f64` seconds; only the similarity math is generic.
/// `f32` and `f64` satisfy the blanket implementation.
pub trait Real: Float + FromPrimitive + Debug + Display + Send + Sync + 'static {}

impl<T> Real for T where T: Float + FromPrimitive + Debug + Display + Send + Sync + 'static {}

/// Lift an `f64` quantity (literal, tolerance, time delta) into the working scalar.
#[inline]
pub fn real<T: Real>(x: f64) -> T {
    T::from_f64(x).expect("f64 value representable in scalar type")
}
