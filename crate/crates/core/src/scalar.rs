use std::fmt;

use num_traits::{Float, FromPrimitive};
use serde::de::DeserializeOwned;
use serde::Serialize;

/// Floating point scalar used throughout the engine: `f32` or `f64`.
pub trait Scalar:
    Float
    + FromPrimitive
    + fmt::Debug
    + fmt::Display
    + Default
    + Send
    + Sync
    + Serialize
    + DeserializeOwned
    + 'static
{
    /// Converts an `f64` literal into this scalar type.
    fn lit(value: f64) -> Self {
        Self::from_f64(value).expect("literal representable in scalar type")
    }

    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}

/// Meters per inch (exact by definition).
pub const METERS_PER_INCH: f64 = 0.0254;

pub fn inches<T: Scalar>(value: f64) -> T {
    T::lit(value * METERS_PER_INCH)
}
