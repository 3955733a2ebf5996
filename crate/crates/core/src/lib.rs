//! Horizon geometry, wave packets and created-particle spectra for rotating
//! acoustic black holes with flow v = (A/ρ) x̂ + (B/ρ) θ̂.
//!
//! Everything is generic over [`Real`] (`f32`, `f64`); the `*64` aliases below
//! fix the working precision used by the CLI.
#![forbid(unsafe_code)]

pub mod error;
pub mod flowfield;
pub mod geometry;
pub mod modes;
pub mod numerics;
pub mod scalar;
pub mod spectrum;

pub use error::{Error, Result};
pub use scalar::{Cx, Real};

pub type VelocityField64 = flowfield::VelocityField<f64>;
pub type HorizonCurve64 = geometry::HorizonCurve<f64>;
pub type ModeIndex64 = modes::ModeIndex<f64>;
pub type PacketSpec64 = modes::PacketSpec<f64>;
pub type QuadratureSpec64 = numerics::QuadratureSpec<f64>;
pub type SpectralResult64 = spectrum::SpectralResult<f64>;
pub type SpectrumOptions64 = spectrum::SpectrumOptions<f64>;
