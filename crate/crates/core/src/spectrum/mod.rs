//! Negative-frequency coefficients, spectral densities, particle numbers and their
//! normalized limits.

pub mod coefficient;
pub mod decay;
pub mod density;
pub mod limit;
pub mod number;
pub mod window;

pub use coefficient::{
    minus_coefficient_closed, minus_coefficient_leading, minus_coefficient_quadrature,
    minus_coefficient_quadrature_with, minus_coefficients_batched, BatchOptions, CoefficientBatch, CoefficientMethod,
    MinusCoefficient,
};
pub use decay::{decay_analysis, linear_fit, DecayAnalysis, LinearFit};
pub use density::{spectral_density_c3, C3Kernel};
pub use limit::{particle_number_limit, with_regularization, LimitResult, SweepPoint};
pub use number::{
    particle_number, particle_number_corner, particle_number_simple, particle_number_tangent, DensityPoint,
    OracleRoute, SegmentSpectrum, SpectralResult, SpectrumOptions,
};
pub use window::{cross_window_sum, window_coefficients};
