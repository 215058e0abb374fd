//! Coherent-state quantum fingerprinting toolkit.
//!
//! Alice and Bob encode their inputs with a binary code of relative distance
//! at least `1 - delta`, send trains of `m` weak coherent pulses whose phases
//! follow the codeword bits, and a referee interferes the trains slot by slot
//! on a balanced beam splitter. This crate provides:
//!
//! * [`codes`]: bit strings, a Justesen-style concatenated code and two small
//!   test backends.
//! * [`protocol`]: per-slot detector-click simulation under loss, limited
//!   visibility and dark counts, both referee decision rules, and an exact
//!   error-probability oracle.
//! * [`analysis`]: closed-form click probabilities, error bounds, tail bounds,
//!   the photon-number-window dimension bound and parameter solvers.
//! * [`baseline`]: the classical `2 sqrt(n)` cost model and a runnable grid
//!   SMP protocol.
//!
//! Numeric routines in [`analysis`] are generic over [`Real`] (`f32`/`f64`);
//! the `*F64` aliases below fix the scalar for the common case. Exact rational
//! counterparts for small instances live in [`analysis::exact`].

pub mod analysis;
pub mod baseline;
pub mod codes;
pub mod error;
pub mod protocol;
pub mod rng;

use std::fmt::{Debug, Display};

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

pub use error::{Error, Result};

/// Floating-point scalar used throughout the analytic code: `f32` or `f64`.
pub trait Real:
    Float + FloatConst + FromPrimitive + ToPrimitive + Debug + Display + Default + Send + Sync + 'static
{
    /// Lossy conversion from `f64`, used for literal constants.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable")
    }

    /// Conversion from a count.
    #[inline]
    fn count(k: u64) -> Self {
        Self::from_u64(k).expect("count representable")
    }
}

impl Real for f32 {}
impl Real for f64 {}

pub type ProtocolParamsF64 = protocol::ProtocolParams<f64>;
pub type ExpectedFractionsF64 = analysis::ExpectedFractions<f64>;
pub type DimensionReportF64 = analysis::DimensionReport<f64>;
pub type ClassicalCostModelF64 = baseline::ClassicalCostModel<f64>;

pub type ProtocolParamsF32 = protocol::ProtocolParams<f32>;
pub type ExpectedFractionsF32 = analysis::ExpectedFractions<f32>;
pub type DimensionReportF32 = analysis::DimensionReport<f32>;
