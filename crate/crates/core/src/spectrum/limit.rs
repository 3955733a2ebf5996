//! The a → ∞ limit of the normalized particle number N(C)/⟨C,C⟩.

use std::sync::Arc;

use crate::error::{precondition, Result};
use crate::flowfield::VelocityField;
use crate::geometry::SmoothBaseCurve;
use crate::modes::{packet_initial_data, PacketSpec};
use crate::scalar::Real;
use crate::spectrum::number::{leading_limits, particle_number, SpectrumOptions};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepPoint<T> {
    pub a: T,
    /// Quadrature-route N(C)/⟨C,C⟩.
    pub n_normalized: T,
    /// (n_normalized − limit)/limit.
    pub rel_gap: T,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LimitResult<T> {
    /// Leading particle number over the exact norm; a-independent.
    pub limit: T,
    /// The limit constant in its printed closed form.
    pub limit_printed: T,
    pub sweep: Vec<SweepPoint<T>>,
    /// |rel_gap| is non-increasing along the sweep.
    pub monotone: bool,
}

/// `spec` with the regularization a replaced.
pub fn with_regularization<T: Real>(spec: &PacketSpec<T>, a: T) -> PacketSpec<T> {
    let mut out = spec.clone();
    match &mut out {
        PacketSpec::Simple(p) => p.a = a,
        PacketSpec::Tangent(p) => p.a = a,
        PacketSpec::Corner(p) => p.a = a,
    }
    out
}

/// Closed limit constants and the quadrature-route a-sweep over `sweep_a` (increasing).
pub fn particle_number_limit<T: Real>(
    spec: &PacketSpec<T>,
    field: &VelocityField<T>,
    base: Option<Arc<SmoothBaseCurve<T>>>,
    sweep_a: &[T],
    opts: &SpectrumOptions<T>,
) -> Result<LimitResult<T>> {
    if sweep_a.windows(2).any(|w| !(w[1] > w[0])) {
        return precondition("a-sweep must be strictly increasing");
    }
    let closed_opts = SpectrumOptions { oracle: false, density_grid: Vec::new(), ..opts.clone() };
    let packet = packet_initial_data(spec, field, base.clone())?;
    let lead = particle_number(&packet, &closed_opts)?;
    let (limit, limit_printed) = leading_limits(&packet, &lead.segments)?;
    let oracle_opts = SpectrumOptions { oracle: true, ..closed_opts };
    let mut sweep = Vec::with_capacity(sweep_a.len());
    for &a in sweep_a {
        let packet = packet_initial_data(&with_regularization(spec, a), field, base.clone())?;
        let r = particle_number(&packet, &oracle_opts)?;
        let n = r.oracle.map(|o| o.n_total).unwrap_or(r.n_total) / r.norm;
        sweep.push(SweepPoint { a, n_normalized: n, rel_gap: (n - limit) / limit });
    }
    let monotone = sweep.windows(2).all(|w| w[1].rel_gap.abs() <= w[0].rel_gap.abs());
    Ok(LimitResult { limit, limit_printed, sweep, monotone })
}
