//! Ergosphere, characteristic points, zero-energy null geodesics and horizons.

pub mod closure;
pub mod ergosphere;
pub mod horizon;
pub mod slopes;
pub mod tracer;

pub use closure::{corner_base_curve, smooth_closure, BaseCurve, Circle, GeodesicWindow, QuinticHermite, SmoothBaseCurve};
pub use ergosphere::{
    characteristic_function, characteristic_points, ergosphere_radius, ergosphere_radius_root, ergosphere_slope,
    ErgosphereCurve,
};
pub use horizon::{build_corner_horizon, circle_horizon, horizon, Corner, HorizonCurve, Segment, SegmentKind};
pub use slopes::{discriminant, geodesic_slope_roots, quadratic_coefficients, slope_residual, Family, Roots, SlopeRoots};
pub use tracer::{dopri_step, trace_zero_energy_geodesic, NullGeodesic, StopReason, StopRule};
