//! Average particle numbers ⟨0|N(C)|0⟩ by the closed leading route and by the
//! coefficient-quadrature route.

use std::sync::Arc;

use rayon::prelude::*;

use crate::error::{precondition, Result};
use crate::flowfield::VelocityField;
use crate::geometry::SmoothBaseCurve;
use crate::modes::{
    kg_norm_exact, kg_norm_simple, kg_norm_tangent, packet_initial_data, Component, CornerPacket, KgOptions, ModeIndex,
    PacketData, PacketSpec, SimplePacket, TangentPacket,
};
use crate::numerics::{complex_gamma, gauss_kronrod, gk15_rule, QuadratureSpec};
use crate::scalar::{cx, lit, ordered_sum, Real};
use crate::spectrum::coefficient::{minus_coefficient_quadrature_with, minus_coefficients_batched, BatchOptions};
use crate::spectrum::density::C3Kernel;
use crate::spectrum::window::window_coefficients;

/// Settings shared by the particle-number routes.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumOptions<T> {
    /// Also run the coefficient-quadrature route.
    pub oracle: bool,
    /// The quadrature route covers |η_ρ| ≤ u_max·a; the rest comes from the closed tail.
    pub u_max: T,
    /// G7/K15 panels of the sinh-mapped η grid; even, split evenly at η = 0.
    pub eta_panels: usize,
    /// Grows the batched m-grid beyond `batch.m_max` until the windows' Parseval tail
    /// falls below this relative level; `None` keeps the grid fixed.
    pub parseval_tail: Option<T>,
    pub batch: BatchOptions<T>,
    pub kg: KgOptions<T>,
    /// Scaled frequencies at which the density is reported.
    pub density_grid: Vec<T>,
}

impl<T: Real> Default for SpectrumOptions<T> {
    fn default() -> Self {
        let density_grid = (-200..=200).map(|j| lit::<T>(0.1) * T::from_i64_lossy(j)).collect();
        Self {
            oracle: false,
            u_max: lit(40.0),
            eta_panels: 16,
            parseval_tail: Some(lit(1e-8)),
            batch: BatchOptions::default(),
            kg: KgOptions::default(),
            density_grid,
        }
    }
}

/// One point of the scaled density C₃(η_ρ) of a packet component.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityPoint<T> {
    pub eta: T,
    pub c3: T,
    pub segment: usize,
}

/// Closed leading data of one packet component.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SegmentSpectrum<T> {
    pub segment: usize,
    pub mu: T,
    /// (1/2π)∫|c|² dφ.
    pub weight: T,
    /// ∫₀^∞ C₃ and ∫_{−∞}^0 C₃, averaged over the component with weight |c|²
    /// (and the base-curve factor κ where the base curve is not a circle).
    pub positive: T,
    pub negative: T,
    /// The same integrals with κ ≡ 1.
    pub positive_unweighted: T,
    pub negative_unweighted: T,
}

/// Particle number from the coefficient-quadrature route.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleRoute<T> {
    pub n_total: T,
    pub hawking_part: T,
    pub non_hawking_part: T,
    /// Closed-form contribution of |η_ρ| > u_max·a, included in the parts above.
    pub tail: T,
    /// Sum over every angular mode by Parseval in φ, if the packet is not separable.
    pub all_modes_total: Option<T>,
    /// Angular-mode cutoff of the batched coefficients.
    pub m_max: Option<usize>,
    pub error: T,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpectralResult<T> {
    pub a: T,
    pub eps: T,
    pub density: Vec<DensityPoint<T>>,
    pub segments: Vec<SegmentSpectrum<T>>,
    /// Closed leading route a^{−2ε} Σ_j w_j ∫C₃.
    pub n_total: T,
    /// η_ρ > 0 part.
    pub hawking_part: T,
    /// η_ρ < 0 part.
    pub non_hawking_part: T,
    /// Closed route with κ ≡ 1.
    pub n_unweighted: T,
    /// Exact KG norm ⟨C, C⟩.
    pub norm: T,
    /// Closed-form norm in the form printed for the packet kind.
    pub norm_printed: T,
    /// n_total / norm.
    pub n_normalized: T,
    pub oracle: Option<OracleRoute<T>>,
}

pub fn particle_number_simple<T: Real>(
    spec: &SimplePacket<T>,
    field: &VelocityField<T>,
    opts: &SpectrumOptions<T>,
) -> Result<SpectralResult<T>> {
    let packet = packet_initial_data(&PacketSpec::Simple(*spec), field, None)?;
    particle_number(&packet, opts)
}

pub fn particle_number_tangent<T: Real>(
    spec: &TangentPacket<T>,
    field: &VelocityField<T>,
    opts: &SpectrumOptions<T>,
) -> Result<SpectralResult<T>> {
    let packet = packet_initial_data(&PacketSpec::Tangent(spec.clone()), field, None)?;
    particle_number(&packet, opts)
}

/// Corner packet on the smoothed horizon `base` (see `geometry::corner_base_curve`).
pub fn particle_number_corner<T: Real>(
    spec: &CornerPacket<T>,
    field: &VelocityField<T>,
    base: Arc<SmoothBaseCurve<T>>,
    opts: &SpectrumOptions<T>,
) -> Result<SpectralResult<T>> {
    let packet = packet_initial_data(&PacketSpec::Corner(spec.clone()), field, Some(base))?;
    particle_number(&packet, opts)
}

/// Both routes for an already built packet.
pub fn particle_number<T: Real>(packet: &PacketData<T>, opts: &SpectrumOptions<T>) -> Result<SpectralResult<T>> {
    let (a, eps) = (packet.a, packet.eps);
    let segments = segment_spectra(packet)?;
    let scale = a.powf(-(eps + eps));
    let hawking_part = scale * ordered_sum(segments.iter().map(|s| s.weight * s.positive));
    let non_hawking_part = scale * ordered_sum(segments.iter().map(|s| s.weight * s.negative));
    let n_unweighted =
        scale * ordered_sum(segments.iter().map(|s| s.weight * (s.positive_unweighted + s.negative_unweighted)));
    let mut density = Vec::with_capacity(opts.density_grid.len() * segments.len());
    for (j, c) in packet.components.iter().enumerate() {
        for &u in &opts.density_grid {
            density.push(DensityPoint { eta: u, c3: averaged(packet, c, |k| Ok(k.eval(u)))?, segment: j });
        }
    }
    let norm = kg_norm_exact(packet)?;
    let norm_printed = printed_norm(packet)?;
    let n_total = hawking_part + non_hawking_part;
    let oracle = if opts.oracle { Some(oracle_route(packet, &segments, n_total, opts)?) } else { None };
    Ok(SpectralResult {
        a,
        eps,
        density,
        segments,
        n_total,
        hawking_part,
        non_hawking_part,
        n_unweighted,
        norm,
        norm_printed,
        n_normalized: n_total / norm,
        oracle,
    })
}

/// κ_b = √(1 + ρ_b′²/ρ_b²) at φ.
fn kappa_at<T: Real>(packet: &PacketData<T>, phi: T) -> T {
    let (rb, db) = packet.baseline(phi);
    (T::one() + db * db / (rb * rb)).sqrt()
}

fn circular<T: Real>(packet: &PacketData<T>) -> bool {
    !matches!(packet.spec, PacketSpec::Corner(_))
}

/// (1/2π w)∫|c|² f(C₃ kernel at κ(φ)) dφ, or f at κ = 1 on a circle.
fn averaged<T: Real, F: Fn(&C3Kernel<T>) -> Result<T>>(packet: &PacketData<T>, c: &Component<T>, f: F) -> Result<T> {
    if circular(packet) {
        return f(&C3Kernel::new(c.mu, packet.eps, T::one())?);
    }
    let Some((lo, hi)) = c.profile.support() else {
        return precondition("corner components need a bounded profile");
    };
    let spec = QuadratureSpec::smooth().with_rel_tol(lit(1e-10));
    let mut failure = None;
    let num = gauss_kronrod(
        |phi: T| {
            let cv = c.profile.eval(phi).0;
            if cv == T::zero() {
                return T::zero();
            }
            match C3Kernel::new(c.mu, packet.eps, kappa_at(packet, phi)).and_then(|k| f(&k)) {
                Ok(v) => cv * cv * v,
                Err(e) => {
                    failure.get_or_insert(e);
                    T::zero()
                }
            }
        },
        lo,
        hi,
        &spec,
    );
    if let Some(e) = failure {
        return Err(e);
    }
    let num = num.into_result("segment average")?.value;
    Ok(num / c.profile.l2_sq()?)
}

fn segment_spectra<T: Real>(packet: &PacketData<T>) -> Result<Vec<SegmentSpectrum<T>>> {
    packet
        .components
        .iter()
        .enumerate()
        .map(|(j, c)| {
            let flat = C3Kernel::new(c.mu, packet.eps, T::one())?;
            let (p1, q1) = flat.split_integrals()?;
            let (positive, negative) = if circular(packet) {
                (p1.value, q1.value)
            } else {
                (
                    averaged(packet, c, |k| Ok(k.half_line(T::zero(), true)?.value))?,
                    averaged(packet, c, |k| Ok(k.half_line(T::zero(), false)?.value))?,
                )
            };
            Ok(SegmentSpectrum {
                segment: j,
                mu: c.mu,
                weight: c.profile.l2_sq()? / T::TAU(),
                positive,
                negative,
                positive_unweighted: p1.value,
                negative_unweighted: q1.value,
            })
        })
        .collect()
}

#[inline]
fn gamma_real<T: Real>(x: T) -> Result<T> {
    Ok(complex_gamma(cx(x, T::zero()))?.re)
}

fn printed_norm<T: Real>(packet: &PacketData<T>) -> Result<T> {
    match &packet.spec {
        PacketSpec::Simple(p) => kg_norm_simple(p, packet.field()),
        PacketSpec::Tangent(p) => kg_norm_tangent(p, packet.field()),
        PacketSpec::Corner(_) => {
            let g = gamma_real(packet.eps + packet.eps)? / (packet.a + packet.a).powf(packet.eps);
            let mut terms = Vec::new();
            for c in &packet.components {
                terms.push(c.profile.l2_sq()? * g * c.mu);
            }
            Ok(ordered_sum(terms))
        }
    }
}

/// Limits of N(C)/⟨C,C⟩ as a → ∞: (from the exact norm, in the printed form).
pub(crate) fn leading_limits<T: Real>(packet: &PacketData<T>, segments: &[SegmentSpectrum<T>]) -> Result<(T, T)> {
    let eps = packet.eps;
    let g = gamma_real(eps + eps)?;
    let two_eps = lit::<T>(2.0).powf(eps);
    let lead = ordered_sum(segments.iter().map(|s| s.weight * (s.positive + s.negative)));
    // ⟨C,C⟩(2a)^{2ε} is a-independent
    let norm_scaled = kg_norm_exact(packet)? * (packet.a + packet.a).powf(eps + eps);
    let exact = lead * two_eps * two_eps / norm_scaled;
    let flat = |s: &SegmentSpectrum<T>| s.positive_unweighted + s.negative_unweighted;
    let printed = match &packet.spec {
        PacketSpec::Simple(_) => {
            let s = &segments[0];
            two_eps / (lit::<T>(4.0) * T::PI() * g) * flat(s) / s.mu
        }
        _ => {
            let mut den = Vec::new();
            for (c, s) in packet.components.iter().zip(segments) {
                den.push(c.profile.l2_sq()? * g / two_eps * s.mu);
            }
            ordered_sum(segments.iter().map(|s| s.weight * flat(s))) / ordered_sum(den)
        }
    };
    Ok((exact, printed))
}

/// Nodes (u, Kronrod weight, Gauss weight, panel) of the sinh-mapped grid on [−u_max, u_max].
fn eta_nodes<T: Real>(u_max: T, panels: usize) -> Result<Vec<(T, T, T, usize)>> {
    if panels < 2 || panels % 2 == 1 || !(u_max > T::zero()) {
        return precondition("eta grid needs an even panel count >= 2 and u_max > 0");
    }
    let x_max = u_max.asinh();
    let h = (x_max + x_max) / T::from_usize_lossy(panels);
    let mut out = Vec::with_capacity(15 * panels);
    for p in 0..panels {
        let x0 = -x_max + h * T::from_usize_lossy(p);
        // the middle boundary is exactly η = 0
        let x1 = if p + 1 == panels / 2 { T::zero() } else { x0 + h };
        let x0 = if p == panels / 2 { T::zero() } else { x0 };
        for (x, wk, wg) in gk15_rule(x0, x1) {
            let jac = x.cosh();
            out.push((x.sinh(), wk * jac, wg * jac, p));
        }
    }
    Ok(out)
}

/// ∫ Σ_{m′}|C⁻(η, m′)|² dη with the coefficients from quadrature.
fn oracle_route<T: Real>(
    packet: &PacketData<T>,
    segments: &[SegmentSpectrum<T>],
    n_closed: T,
    opts: &SpectrumOptions<T>,
) -> Result<OracleRoute<T>> {
    let (a, eps) = (packet.a, packet.eps);
    let field = packet.field();
    let nodes = eta_nodes(opts.u_max, opts.eta_panels)?;
    // N ≈ a·|C⁻|² on the bulk of the η-range
    let mut kg = opts.kg;
    kg.radial = kg.radial.with_abs_tol(kg.radial.abs_tol.max(lit::<T>(1e-8) * (n_closed / a).sqrt()));
    let batch = match opts.parseval_tail {
        Some(tol) if !matches!(packet.spec, PacketSpec::Simple(_)) => adaptive_batch(packet, &opts.batch, tol)?,
        _ => opts.batch,
    };
    // (Σ|C⁻|² over the mode grid, over all modes, error) at η = a u, per unit u
    let values: Vec<Result<(T, Option<T>, T)>> = match &packet.spec {
        PacketSpec::Simple(p) => nodes
            .par_iter()
            .map(|&(u, ..)| {
                let k = ModeIndex::new(a * u, -p.m, a)?;
                let c = minus_coefficient_quadrature_with(packet, &k, field, &kg)?;
                let mag = c.value.norm();
                Ok((a * mag * mag, None, a * (mag + mag) * c.error))
            })
            .collect(),
        _ => nodes
            .iter()
            .map(|&(u, ..)| {
                let b = minus_coefficients_batched(packet, field, a * u, a, &batch)?;
                let mag = b.truncated_sum().sqrt();
                Ok((a * b.truncated_sum(), Some(a * b.all_modes), a * (mag + mag) * b.error))
            })
            .collect(),
    };
    let values: Vec<(T, Option<T>, T)> = values.into_iter().collect::<Result<_>>()?;
    let half = opts.eta_panels / 2;
    let mut parts = [(Vec::new(), Vec::new()), (Vec::new(), Vec::new())];
    let mut all = Vec::new();
    let mut rad_err = Vec::new();
    let mut panel_k = vec![T::zero(); opts.eta_panels];
    let mut panel_g = vec![T::zero(); opts.eta_panels];
    for (&(_, wk, wg, p), &(v, full, e)) in nodes.iter().zip(&values) {
        let side = usize::from(p >= half);
        parts[side].0.push(wk * v);
        parts[side].1.push(wg * v);
        if let Some(f) = full {
            all.push(wk * f);
        }
        rad_err.push(wk * e);
        panel_k[p] += wk * v;
        panel_g[p] += wg * v;
    }
    let quad_err = ordered_sum(panel_k.iter().zip(&panel_g).map(|(k, g)| (*k - *g).abs()));
    let scale = a.powf(-(eps + eps));
    let mut tails = [Vec::new(), Vec::new()];
    for (c, _) in packet.components.iter().zip(segments) {
        let (w, u) = (c.profile.l2_sq()? / T::TAU(), opts.u_max);
        tails[0].push(w * averaged(packet, c, |k| Ok(k.half_line(u, false)?.value))?);
        tails[1].push(w * averaged(packet, c, |k| Ok(k.half_line(u, true)?.value))?);
    }
    let tail_neg = scale * ordered_sum(tails[0].iter().copied());
    let tail_pos = scale * ordered_sum(tails[1].iter().copied());
    let non_hawking_part = ordered_sum(parts[0].0.iter().copied()) + tail_neg;
    let hawking_part = ordered_sum(parts[1].0.iter().copied()) + tail_pos;
    let all_modes_total = (!all.is_empty()).then(|| ordered_sum(all) + tail_neg + tail_pos);
    let m_max = (!matches!(packet.spec, PacketSpec::Simple(_))).then_some(batch.m_max);
    Ok(OracleRoute {
        n_total: hawking_part + non_hawking_part,
        hawking_part,
        non_hawking_part,
        tail: tail_neg + tail_pos,
        all_modes_total,
        m_max,
        error: quad_err + ordered_sum(rad_err),
    })
}

/// Smallest M ≥ `base.m_max` with Σ_{|m|>M}|γ_m|² ≤ tol·Σ|γ_m|² for every component.
fn adaptive_batch<T: Real>(packet: &PacketData<T>, base: &BatchOptions<T>, tol: T) -> Result<BatchOptions<T>> {
    const N: usize = 4096;
    let mut m_max = base.m_max;
    for j in 0..packet.components.len() {
        let g = window_coefficients(packet, j, N, N / 4 - 1)?;
        let total = g.parseval_sum();
        let mut inside = g.get(0).norm_sqr();
        let mut m = 0;
        while m < N / 4 - 1 && total - inside > tol * total {
            m += 1;
            inside += g.get(m as i64).norm_sqr() + g.get(-(m as i64)).norm_sqr();
        }
        m_max = m_max.max(m);
    }
    let mut n_phi = base.n_phi;
    while n_phi < 4 * m_max + 4 {
        n_phi *= 2;
    }
    Ok(BatchOptions { m_max, n_phi, ..*base })
}
