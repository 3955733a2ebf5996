//! Special functions, quadrature engines and Fourier machinery.

pub mod fourier;
pub mod gamma;
pub mod laplace;
pub mod quadrature;
pub mod roots;

pub use fourier::{fourier_coefficients, mean_square, uniform_grid, FourierSeries};
pub use gamma::{complex_gamma, gamma1, gamma1_integral, ln_gamma, ln_gamma1_sq};
pub use laplace::{laplace_oracle, laplace_power_integral, oscillatory_log_integral, principal_power, PrincipalPower};
pub use quadrature::{
    adaptive_integrate, gauss_kronrod, gk15_rule, singular_panels, tanh_sinh, tanh_sinh_levels, Estimate, Interval, QuadValue,
    QuadratureSpec, Scheme,
};
