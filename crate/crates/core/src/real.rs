//! Scalar abstraction for the simulator and all derived numerics.
//!
//! Everything in this crate is generic over [`Real`], which is implemented
//! for `f32` and `f64`. Verification suites should use `f64`; `f32` exists
//! for memory-bound simulations where half-width amplitudes are acceptable.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FloatConst, FromPrimitive, NumAssign};
use rand::distributions::uniform::SampleUniform;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{de::DeserializeOwned, Serialize};

/// Floating-point scalar usable as a probability amplitude.
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + NumAssign
    + SampleUniform
    + Sum
    + Debug
    + Display
    + Serialize
    + DeserializeOwned
    + Send
    + Sync
    + 'static
{
    /// Draw one sample from the standard normal distribution.
    fn standard_normal<R: Rng + ?Sized>(rng: &mut R) -> Self;

    /// Lossy cast from `f64`, for literals and tolerances.
    fn of(value: f64) -> Self {
        Self::from_f64(value).expect("f64 literal must be representable")
    }
}

impl Real for f32 {
    fn standard_normal<R: Rng + ?Sized>(rng: &mut R) -> Self {
        rng.sample(StandardNormal)
    }
}

impl Real for f64 {
    fn standard_normal<R: Rng + ?Sized>(rng: &mut R) -> Self {
        rng.sample(StandardNormal)
    }
}
