//! Klein–Gordon inner product ⟨u, v⟩ = i∫∫ (ū Dv − conj(Du) v) ρ dr dφ on the x₀ = 0 slice,
//! with D = ∂₀ + g^{0r}∂_r + (B/ρ²)∂_φ in the data's chart.

use rayon::prelude::*;

use crate::error::{precondition, Result};
use crate::flowfield::{FieldKind, VelocityField};
use crate::modes::data::{CauchyData, Chart, Jet, Support};
use crate::modes::mode::radial_drift;
use crate::modes::packet::{simple_xi0, PacketData, PacketSpec, SimplePacket, TangentPacket};
use crate::modes::profile::wrap_from;
use crate::numerics::laplace::laplace_truncation;
use crate::numerics::{complex_gamma, gauss_kronrod, singular_panels, Estimate, QuadratureSpec};
use crate::scalar::{ci, cx, lit, ordered_sum_cx, Cx, Real};

/// Tolerances of [`kg_inner_product_with`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KgOptions<T> {
    pub radial: QuadratureSpec<T>,
    pub angular_rel_tol: T,
    pub angular_abs_tol: T,
    /// Trapezoid intervals of the first angular level.
    pub min_angular_nodes: usize,
    pub max_angular_nodes: usize,
}

impl<T: Real> Default for KgOptions<T> {
    fn default() -> Self {
        Self {
            radial: QuadratureSpec::oscillatory().with_rel_tol(lit(1e-10)).with_abs_tol(lit(1e-16)),
            angular_rel_tol: lit(1e-9),
            angular_abs_tol: lit(1e-15),
            min_angular_nodes: 32,
            max_angular_nodes: 1 << 13,
        }
    }
}

/// ⟨u, v⟩ with default tolerances.
pub fn kg_inner_product<T: Real>(
    u: &dyn CauchyData<T>,
    v: &dyn CauchyData<T>,
    field: &VelocityField<T>,
) -> Result<Cx<T>> {
    kg_inner_product_with(u, v, field, &KgOptions::default()).map(|e| e.value)
}

/// ⟨u, v⟩ with its error estimate.
///
/// The φ-integral is exact (2π δ_{m m′}) for separable data of a φ-independent field on a
/// rotation-invariant chart; otherwise it is a periodic trapezoid over the common angular
/// window, doubled until converged. Radial integrals are adaptive, with tanh-sinh at a
/// singular inner endpoint.
pub fn kg_inner_product_with<T: Real>(
    u: &dyn CauchyData<T>,
    v: &dyn CauchyData<T>,
    field: &VelocityField<T>,
    opts: &KgOptions<T>,
) -> Result<Estimate<Cx<T>, T>> {
    if !u.chart().same_as(v.chart()) {
        return precondition("kg inner product needs data on the same chart");
    }
    opts.radial.validate()?;
    let (su, sv) = (u.support(), v.support());
    let chart = u.chart();
    let plan = RadialPlan::new(&su, &sv)?;
    let separable = matches!(field.kind(), FieldKind::Constant { .. }) && chart.is_rotation_invariant();
    if let (true, Some(mu), Some(mv)) = (separable, u.angular_mode(), v.angular_mode()) {
        if mu != mv {
            return Ok(Estimate { value: Cx::new(T::zero(), T::zero()), error: T::zero(), evaluations: 0, converged: true });
        }
        let r = radial_integral(u, v, field, chart, &plan, T::zero(), &opts.radial);
        return Estimate { value: r.value * T::TAU(), error: r.error * T::TAU(), ..r }.into_result("kg radial");
    }
    let windows = common_windows(su.angular, sv.angular);
    let mut total = Estimate { value: Cx::new(T::zero(), T::zero()), error: T::zero(), evaluations: 0, converged: true };
    for (lo, hi, periodic) in windows {
        let e = angular_trapezoid(|phi| radial_integral(u, v, field, chart, &plan, phi, &opts.radial), lo, hi, periodic, opts)?;
        total = total.combine(e);
    }
    total.into_result("kg angular")
}

/// Radial range and resolution shared by every angular node.
#[derive(Debug, Clone, Copy)]
struct RadialPlan<T> {
    lo: Option<T>,
    lo_singular: bool,
    /// End of the range; infinite ranges are truncated where the envelope is negligible.
    hi: Option<T>,
    envelope: Option<(T, T, T)>,
    wavenumber: T,
}

impl<T: Real> RadialPlan<T> {
    fn new(a: &Support<T>, b: &Support<T>) -> Result<Self> {
        let (lo, lo_singular) = match (a.lo, b.lo) {
            (Some(x), Some(y)) if x == y => (Some(x), a.lo_singular || b.lo_singular),
            (Some(x), Some(y)) if x > y => (Some(x), a.lo_singular),
            (Some(_), Some(y)) => (Some(y), b.lo_singular),
            (Some(x), None) => (Some(x), a.lo_singular),
            (None, Some(y)) => (Some(y), b.lo_singular),
            (None, None) => (None, false),
        };
        let hi = match (a.hi, b.hi) {
            (Some(x), Some(y)) => Some(x.min(y)),
            (x, y) => x.or(y),
        };
        // product envelope measured from the higher of the two envelope origins
        let envelope = match (a.envelope, b.envelope) {
            (None, None) => None,
            (ea, eb) => {
                let (pa, qa) = ea.unwrap_or((T::zero(), T::zero()));
                let (pb, qb) = eb.unwrap_or((T::zero(), T::zero()));
                let origin = match (ea.and(a.lo), eb.and(b.lo)) {
                    (Some(x), Some(y)) => x.max(y),
                    (Some(x), None) | (None, Some(x)) => x,
                    _ => T::zero(),
                };
                Some((pa + pb, qa + qb, origin))
            }
        };
        if hi.is_none() && !matches!(envelope, Some((_, q, _)) if q > T::zero()) {
            return precondition("kg inner product of data without decay or cutoff");
        }
        Ok(Self { lo, lo_singular, hi, envelope, wavenumber: a.wavenumber + b.wavenumber })
    }

    /// [r_lo, r_hi] at φ, given the chart boundary r = −ρ₀(φ).
    fn range(&self, chart_lo: T, tail_tol: T) -> (T, T) {
        let lo = self.lo.unwrap_or(chart_lo).max(chart_lo);
        let hi = match (self.hi, self.envelope) {
            (Some(h), _) => h,
            (None, Some((p, q, origin))) => {
                // the measure ρ adds one power
                origin + laplace_truncation(p + T::one(), q, tail_tol)
            }
            (None, None) => unreachable!("checked in RadialPlan::new"),
        };
        (lo, hi)
    }

    fn panel(&self, len: T) -> T {
        let mut w = len;
        if self.wavenumber > T::zero() {
            w = w.min(T::TAU() / self.wavenumber);
        }
        if let Some((_, q, _)) = self.envelope {
            if q > T::zero() {
                w = w.min(lit::<T>(2.0) / q);
            }
        }
        w
    }
}

/// i(ū Dv − conj(Du) v) ρ at one point.
#[inline]
fn density<T: Real>(ju: &Jet<T>, jv: &Jet<T>, gr: T, gphi: T, rho: T) -> Cx<T> {
    let du = ju.dt + ju.dr * gr + ju.dphi * gphi;
    let dv = jv.dt + jv.dr * gr + jv.dphi * gphi;
    (ju.value.conj() * dv - du.conj() * jv.value) * ci::<T>() * rho
}

/// ∫ density dr at fixed φ.
fn radial_integral<T: Real>(
    u: &dyn CauchyData<T>,
    v: &dyn CauchyData<T>,
    field: &VelocityField<T>,
    chart: &Chart<T>,
    plan: &RadialPlan<T>,
    phi: T,
    spec: &QuadratureSpec<T>,
) -> Estimate<Cx<T>, T> {
    let (rho0, d0) = chart.base(phi);
    let (lo, hi) = plan.range(-rho0, spec.tail_tol);
    let empty = Estimate { value: Cx::new(T::zero(), T::zero()), error: T::zero(), evaluations: 0, converged: true };
    if !(hi > lo) {
        return empty;
    }
    let (fu, fv) = (u.slice_from(phi, lo), v.slice_from(phi, lo));
    let f = |t: T| {
        let rho = rho0 + lo + t;
        if !(rho > T::zero()) {
            return Cx::new(T::zero(), T::zero());
        }
        let (ju, jv) = (fu(t), fv(t));
        if ju.is_zero() || jv.is_zero() {
            return Cx::new(T::zero(), T::zero());
        }
        let (gr, gphi) = radial_drift(field, rho, phi, d0);
        density(&ju, &jv, gr, gphi, rho)
    };
    let len = hi - lo;
    let panel = plan.panel(len);
    if plan.lo_singular {
        singular_panels(f, len, panel, spec)
    } else {
        panels_gk(f, len, panel, spec)
    }
}

/// ∫₀^len f on equal Gauss–Kronrod panels of width ≤ `panel`.
fn panels_gk<T: Real, F: FnMut(T) -> Cx<T>>(mut f: F, len: T, panel: T, spec: &QuadratureSpec<T>) -> Estimate<Cx<T>, T> {
    let n = (len / panel).ceil().to_usize().unwrap_or(1).max(1);
    let width = len / T::from_usize_lossy(n);
    let sub = QuadratureSpec { rel_tol: spec.rel_tol / lit(4.0), abs_tol: spec.abs_tol / T::from_usize_lossy(n), ..*spec };
    let mut acc = gauss_kronrod(&mut f, T::zero(), width, &sub);
    for j in 1..n {
        let a = width * T::from_usize_lossy(j);
        let b = if j + 1 == n { len } else { width * T::from_usize_lossy(j + 1) };
        acc = acc.combine(gauss_kronrod(&mut f, a, b, &sub));
    }
    acc
}

/// Angular pieces (lo, hi, periodic) on which both data may be nonzero.
fn common_windows<T: Real>(a: Option<(T, T)>, b: Option<(T, T)>) -> Vec<(T, T, bool)> {
    let tau = T::TAU();
    match (a, b) {
        (None, None) => vec![(T::zero(), tau, true)],
        (Some((lo, hi)), None) | (None, Some((lo, hi))) => vec![(lo, hi, false)],
        (Some((a0, a1)), Some((b0, b1))) => {
            let len = b1 - b0;
            let start = a0 + wrap_from(b0 - a0);
            let mut out = Vec::new();
            // b shifted into [a0, a0 + 2π) and its wrap-around copy one period earlier
            for s in [start, start - tau] {
                let (lo, hi) = (s.max(a0), (s + len).min(a1));
                if hi > lo {
                    out.push((lo, hi, false));
                }
            }
            out
        }
    }
}

/// Trapezoid rule over [lo, hi] with node doubling; endpoints are zeros of the data unless periodic.
fn angular_trapezoid<T, F>(f: F, lo: T, hi: T, periodic: bool, opts: &KgOptions<T>) -> Result<Estimate<Cx<T>, T>>
where
    T: Real,
    F: Fn(T) -> Estimate<Cx<T>, T> + Sync,
{
    let len = hi - lo;
    let eval = |nodes: Vec<T>| -> (Vec<Cx<T>>, T, usize, T) {
        let vals: Vec<Estimate<Cx<T>, T>> = nodes.par_iter().map(|&p| f(p)).collect();
        let err = vals.iter().fold(T::zero(), |s, e| s + e.error);
        let evals = vals.iter().map(|e| e.evaluations).sum();
        let bad = vals.iter().filter(|e| !e.converged).fold(T::zero(), |s, e| s + e.error);
        (vals.into_iter().map(|e| e.value).collect(), err, evals, bad)
    };
    let mut n = opts.min_angular_nodes.max(2);
    // periodic: nodes lo + jh, j < n; windowed: interior nodes lo + jh, 0 < j < n
    let first: Vec<T> = (0..n).filter(|&j| periodic || j > 0).map(|j| lo + len * T::from_usize_lossy(j) / T::from_usize_lossy(n)).collect();
    // error of radial nodes that missed their own tolerance
    let (vals, mut rad_err, mut evals, mut bad) = eval(first);
    let mut sum = ordered_sum_cx(vals.iter().copied());
    let mut value = sum * (len / T::from_usize_lossy(n));
    loop {
        let fresh: Vec<T> = (0..n).map(|j| lo + len * T::from_usize_lossy(2 * j + 1) / T::from_usize_lossy(2 * n)).collect();
        let (vals, e, k, c) = eval(fresh);
        rad_err += e;
        evals += k;
        bad += c;
        sum += ordered_sum_cx(vals.iter().copied());
        n *= 2;
        let next = sum * (len / T::from_usize_lossy(n));
        let delta = (next - value).norm();
        value = next;
        let target = opts.angular_abs_tol.max(opts.angular_rel_tol * value.norm());
        if delta <= target {
            // the radial error estimate is per node; scale it by the trapezoid weight
            let err = delta + rad_err * len / T::from_usize_lossy(n);
            // a missed radial tolerance only matters if it shows in the total
            let ok = bad * len / T::from_usize_lossy(n) <= target;
            return Ok(Estimate { value, error: err, evaluations: evals, converged: ok });
        }
        if n >= opts.max_angular_nodes {
            return Ok(Estimate { value, error: delta, evaluations: evals, converged: false });
        }
    }
}

#[inline]
fn gamma_real<T: Real>(x: T) -> T {
    complex_gamma(cx(x, T::zero())).map(|g| g.re).unwrap_or(T::nan())
}

/// 4πΓ(2ε)ξ₀|A|/(2a)^ε.
pub fn kg_norm_simple<T: Real>(p: &SimplePacket<T>, field: &VelocityField<T>) -> Result<T> {
    let mu = simple_mu(p, field)?;
    Ok(lit::<T>(4.0) * T::PI() * gamma_real(p.eps + p.eps) * mu / (p.a + p.a).powf(p.eps))
}

/// ⟨C, C⟩ of the simple packet: 4πΓ(2ε)ξ₀|A|/(2a)^{2ε}.
pub fn kg_norm_simple_exact<T: Real>(p: &SimplePacket<T>, field: &VelocityField<T>) -> Result<T> {
    let mu = simple_mu(p, field)?;
    Ok(lit::<T>(4.0) * T::PI() * gamma_real(p.eps + p.eps) * mu / (p.a + p.a).powf(p.eps + p.eps))
}

fn simple_mu<T: Real>(p: &SimplePacket<T>, field: &VelocityField<T>) -> Result<T> {
    let xi0 = simple_xi0(p, field)?;
    let FieldKind::Constant { a, .. } = *field.kind() else { unreachable!() };
    Ok(-xi0 * a)
}

fn tangent_abs_a<T: Real>(field: &VelocityField<T>) -> Result<T> {
    match field.kind() {
        FieldKind::Constant { a, .. } | FieldKind::Tangent { a, .. } => Ok(-*a),
        FieldKind::Corner { .. } => precondition("tangent norm needs a constant or tangent field"),
    }
}

/// Σ_r ∫|c_r|² · Γ(2ε)(η₀|A| + α_r)/(2a)^ε.
pub fn kg_norm_tangent<T: Real>(p: &TangentPacket<T>, field: &VelocityField<T>) -> Result<T> {
    let abs_a = tangent_abs_a(field)?;
    let g = gamma_real(p.eps + p.eps) / (p.a + p.a).powf(p.eps);
    let mut terms = Vec::with_capacity(p.windows.len());
    for w in &p.windows {
        terms.push(w.profile.l2_sq()? * g * (p.eta0 * abs_a + w.alpha));
    }
    Ok(crate::scalar::ordered_sum(terms))
}

/// ⟨Ĉ, Ĉ⟩ of the tangent packet: Σ_r 2(η₀|A| + α_r)∫|c_r|² · Γ(2ε)/(2a)^{2ε}.
pub fn kg_norm_tangent_exact<T: Real>(p: &TangentPacket<T>, field: &VelocityField<T>) -> Result<T> {
    let abs_a = tangent_abs_a(field)?;
    let g = gamma_real(p.eps + p.eps) / (p.a + p.a).powf(p.eps + p.eps);
    let mut terms = Vec::with_capacity(p.windows.len());
    for w in &p.windows {
        terms.push(lit::<T>(2.0) * (p.eta0 * abs_a + w.alpha) * w.profile.l2_sq()? * g);
    }
    Ok(crate::scalar::ordered_sum(terms))
}

/// ⟨C, C⟩ of any built packet: Σ_j 2μ_j Γ(2ε)/(2a)^{2ε} ∫|c_j|² κ_b dφ, κ_b = √(1 + ρ_b′²/ρ_b²).
pub fn kg_norm_exact<T: Real>(packet: &PacketData<T>) -> Result<T> {
    let (eps, a) = (packet.eps, packet.a);
    let g = gamma_real(eps + eps) / (a + a).powf(eps + eps);
    let spec = QuadratureSpec::smooth().with_rel_tol(lit(1e-12));
    let mut terms = Vec::new();
    for c in &packet.components {
        let weighted = |phi: T| {
            let (rb, db) = packet.baseline(phi);
            c.profile.eval(phi).0.powi(2) * (T::one() + db * db / (rb * rb)).sqrt()
        };
        let integral = match c.profile.support() {
            Some((lo, hi)) => gauss_kronrod(weighted, lo, hi, &spec).into_result("corner norm")?.value,
            None if matches!(packet.spec, PacketSpec::Simple(_) | PacketSpec::Tangent(_)) => c.profile.l2_sq()?,
            None => gauss_kronrod(weighted, T::zero(), T::TAU(), &spec).into_result("corner norm")?.value,
        };
        terms.push(lit::<T>(2.0) * c.mu * integral * g);
    }
    Ok(crate::scalar::ordered_sum(terms))
}
