//! Horizon-concentrated wave packets: simple (constant field), tangent and corner kinds.
//!
//! Every component has the form
//! c(φ) t^ε e^{−at} ρ^{−1/2} e^{i(μ ln t + Θ(φ))}, t = ρ − ρ_b(φ) > 0,
//! with ρ_b = |A| for the simple and tangent kinds and ρ_b = ρ₀ for the corner kind,
//! and ∂₀C = iβC with β the linearized eikonal frequency at the base curve.

use std::sync::Arc;

use crate::error::{precondition, Result};
use crate::flowfield::{FieldKind, VelocityField};
use crate::geometry::{BaseCurve, SmoothBaseCurve};
use crate::modes::data::{CauchyData, Chart, Jet, Support};
use crate::modes::profile::{wrap_from, AngularProfile, PhaseTable};
use crate::scalar::{cx, lit, Cx, Real};

/// Constant field packet: angular dependence e^{imφ}, log frequency ξ₀|A|.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimplePacket<T> {
    pub m: i64,
    pub eta0: T,
    pub eps: T,
    pub a: T,
}

/// One window of a tangent packet; `anchor` defaults to the window midpoint.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TangentWindow<T> {
    pub lo: T,
    pub hi: T,
    pub profile: AngularProfile<T>,
    pub alpha: T,
    pub d: T,
    pub anchor: Option<T>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TangentPacket<T> {
    pub eta0: T,
    pub eps: T,
    pub a: T,
    pub windows: Vec<TangentWindow<T>>,
}

/// One segment of a corner packet, in the tilde chart of the smoothed horizon.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CornerSegment<T> {
    pub lo: T,
    pub hi: T,
    pub profile: AngularProfile<T>,
    pub alpha: T,
    pub d: T,
    pub anchor: Option<T>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CornerPacket<T> {
    /// Time frequency of the eikonal; 0 unless given.
    pub eta0: T,
    pub eps: T,
    pub a: T,
    pub segments: Vec<CornerSegment<T>>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum PacketSpec<T> {
    Simple(SimplePacket<T>),
    Tangent(TangentPacket<T>),
    Corner(CornerPacket<T>),
}

impl<T: Real> PacketSpec<T> {
    pub fn eps(&self) -> T {
        match self {
            PacketSpec::Simple(p) => p.eps,
            PacketSpec::Tangent(p) => p.eps,
            PacketSpec::Corner(p) => p.eps,
        }
    }

    pub fn a(&self) -> T {
        match self {
            PacketSpec::Simple(p) => p.a,
            PacketSpec::Tangent(p) => p.a,
            PacketSpec::Corner(p) => p.a,
        }
    }
}

/// |A| and B of a simple packet's field, with ξ₀ = η₀ − Bm/|A|².
pub fn simple_xi0<T: Real>(p: &SimplePacket<T>, field: &VelocityField<T>) -> Result<T> {
    let FieldKind::Constant { a, b } = *field.kind() else {
        return precondition("simple packet needs a constant field");
    };
    Ok(p.eta0 - b * T::from_i64_lossy(p.m) / (a * a))
}

#[derive(Debug, Clone)]
enum Phase<T> {
    /// slope·φ + offset, evaluated without wrapping.
    Linear { slope: T, offset: T },
    Table(PhaseTable<T>),
}

/// One term c(φ)·(radial factor)·e^{i(μ ln t + Θ)} of a packet.
#[derive(Debug, Clone)]
pub struct Component<T> {
    pub profile: AngularProfile<T>,
    /// Angular window on which Θ is defined.
    pub window: (T, T),
    /// Log frequency μ.
    pub mu: T,
    phase: Phase<T>,
}

impl<T: Real> Component<T> {
    /// (Θ, Θ′) at φ, `None` outside the window.
    #[inline]
    pub fn phase(&self, phi: T) -> Option<(T, T)> {
        match &self.phase {
            Phase::Linear { slope, offset } => Some((*slope * phi + *offset, *slope)),
            Phase::Table(t) => t.eval(phi),
        }
    }

    /// (c, c′, Θ, Θ′) at φ, `None` where the component vanishes.
    #[inline]
    pub fn angular(&self, phi: T) -> Option<(T, T, T, T)> {
        let (c, dc) = self.profile.eval(phi);
        if c == T::zero() && dc == T::zero() {
            return None;
        }
        let (th, dth) = self.phase(phi)?;
        Some((c, dc, th, dth))
    }
}

#[derive(Debug, Clone)]
enum Baseline<T> {
    /// ρ_b ≡ |A| in the polar chart.
    Circle(T),
    /// ρ_b = ρ₀ of the tilde chart.
    Chart,
}

/// Packet Cauchy data built by [`packet_initial_data`].
#[derive(Clone)]
pub struct PacketData<T: Real> {
    pub spec: PacketSpec<T>,
    pub eps: T,
    pub a: T,
    pub components: Vec<Component<T>>,
    field: VelocityField<T>,
    chart: Chart<T>,
    baseline: Baseline<T>,
    mode: Option<i64>,
}

impl<T: Real> std::fmt::Debug for PacketData<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("PacketData").field("spec", &self.spec).field("chart", &self.chart).finish()
    }
}

/// Cells per radian of tabulated phases.
const PHASE_CELLS_PER_RADIAN: f64 = 400.0;

fn table_cells<T: Real>(lo: T, hi: T) -> usize {
    ((hi - lo) * lit(PHASE_CELLS_PER_RADIAN)).ceil().to_usize().unwrap_or(64).max(64)
}

/// Whether φ lies in the closed window [lo, hi] taken mod 2π.
fn in_window<T: Real>(phi: T, lo: T, hi: T) -> bool {
    lo + wrap_from(phi - lo) <= hi
}

/// Checks supp profile ⊂ [lo, hi].
fn check_profile<T: Real>(p: &AngularProfile<T>, lo: T, hi: T) -> Result<()> {
    match p.support() {
        None if hi - lo >= T::TAU() * (T::one() - lit(1e-12)) => Ok(()),
        None => precondition("constant profile needs a full-circle window"),
        Some((a, b)) => {
            let a2 = lo + wrap_from(a - lo);
            if a2 + (b - a) <= hi + lit::<T>(1e-12) {
                Ok(())
            } else {
                precondition("profile support leaves its window")
            }
        }
    }
}

fn check_window<T: Real>(lo: T, hi: T) -> Result<()> {
    if !(hi > lo) || hi - lo > T::TAU() * (T::one() + lit(1e-12)) {
        return precondition("window needs lo < hi <= lo + 2pi");
    }
    Ok(())
}

/// Pairwise disjoint profile supports.
fn check_disjoint<T: Real>(supports: &[Option<(T, T)>]) -> Result<()> {
    for (i, a) in supports.iter().enumerate() {
        for b in &supports[i + 1..] {
            let (Some((a0, a1)), Some((b0, b1))) = (a, b) else {
                return precondition("a full-circle component cannot share the circle");
            };
            let start = *a0 + wrap_from(*b0 - *a0);
            let overlap = start < *a1 || start + (*b1 - *b0) > *a0 + T::TAU();
            if overlap {
                return precondition("packet components overlap");
            }
        }
    }
    Ok(())
}

/// Builds (C, ∂₀C) of the packet.
///
/// Simple and tangent packets live in the polar chart; corner packets live in the tilde
/// chart of `base`, which must be supplied and must contain each segment in one geodesic window.
pub fn packet_initial_data<T: Real>(
    spec: &PacketSpec<T>,
    field: &VelocityField<T>,
    base: Option<Arc<SmoothBaseCurve<T>>>,
) -> Result<PacketData<T>> {
    let (eps, a) = (spec.eps(), spec.a());
    if !(eps > T::zero()) || !(a > T::zero()) {
        return precondition("packet needs eps > 0 and a > 0");
    }
    let tau = T::TAU();
    let mut mode = None;
    let (components, chart, baseline) = match spec {
        PacketSpec::Simple(p) => {
            let xi0 = simple_xi0(p, field)?;
            if !(xi0 > T::zero()) {
                return precondition("simple packet needs xi0 > 0");
            }
            let FieldKind::Constant { a: aa, .. } = *field.kind() else { unreachable!() };
            let abs_a = -aa;
            let m = T::from_i64_lossy(p.m);
            mode = Some(p.m);
            let c = Component {
                profile: AngularProfile::Constant { amp: T::one() },
                window: (T::zero(), tau),
                mu: xi0 * abs_a,
                phase: Phase::Linear { slope: m, offset: T::zero() },
            };
            (vec![c], Chart::Polar, Baseline::Circle(abs_a))
        }
        PacketSpec::Tangent(p) => {
            let abs_a = match field.kind() {
                FieldKind::Constant { a, .. } | FieldKind::Tangent { a, .. } => -*a,
                FieldKind::Corner { .. } => return precondition("tangent packet needs a constant or tangent field"),
            };
            let mut comps = Vec::new();
            for w in &p.windows {
                check_window(w.lo, w.hi)?;
                check_profile(&w.profile, w.lo, w.hi)?;
                if !(w.alpha > T::zero()) || !(p.eta0 * abs_a + w.alpha > T::zero()) {
                    return precondition("tangent window needs alpha > 0 and eta0|A| + alpha > 0");
                }
                let zero_inside = field.b_zeros().iter().any(|z| in_window(*z, w.lo, w.hi));
                let b_at = |phi: T| field.coefficients(phi).b0;
                if zero_inside || b_at(w.lo) == T::zero() || b_at(w.hi) == T::zero() {
                    return precondition("tangent window overlaps a zero of B");
                }
                let anchor = w.anchor.unwrap_or((w.lo + w.hi) * lit(0.5));
                let k = w.alpha * abs_a;
                let table = PhaseTable::new(|phi| -k / b_at(phi), w.lo, w.hi, anchor, w.d, table_cells(w.lo, w.hi))?;
                if w.profile.support().is_none() {
                    // a full-circle component must have a periodic phase
                    let (t0, _) = table.eval(w.lo).expect("window start");
                    let winding = (table_end(&table) - t0) / tau;
                    if (winding - winding.round()).abs() > lit(1e-9) {
                        return precondition("full-circle tangent window needs an integer phase winding");
                    }
                }
                comps.push(Component {
                    profile: w.profile,
                    window: (w.lo, w.hi),
                    mu: p.eta0 * abs_a + w.alpha,
                    phase: Phase::Table(table),
                });
            }
            check_disjoint(&comps.iter().map(|c| c.profile.support()).collect::<Vec<_>>())?;
            (comps, Chart::Polar, Baseline::Circle(abs_a))
        }
        PacketSpec::Corner(p) => {
            if !matches!(field.kind(), FieldKind::Corner { .. }) {
                return precondition("corner packet needs a corner field");
            }
            let Some(base) = base else {
                return precondition("corner packet needs the smoothed horizon base curve");
            };
            let mut comps = Vec::new();
            for s in &p.segments {
                check_window(s.lo, s.hi)?;
                check_profile(&s.profile, s.lo, s.hi)?;
                if !(s.alpha > T::zero()) {
                    return precondition("corner segment needs alpha > 0");
                }
                let (wl, wh) = (base.window_of(s.lo), base.window_of(s.hi));
                let mid = base.window_of((s.lo + s.hi) * lit(0.5));
                if wl.is_none() || wl != wh || wl != mid {
                    return precondition("corner segment must lie inside one geodesic window");
                }
                let anchor = s.anchor.unwrap_or((s.lo + s.hi) * lit(0.5));
                let curve: &dyn BaseCurve<T> = base.as_ref();
                let theta_prime = |phi: T| {
                    let (b1, b2) = eikonal_coefficients(field, curve, phi);
                    -(s.alpha + b1 * p.eta0) / b2
                };
                let table = PhaseTable::new(theta_prime, s.lo, s.hi, anchor, s.d, table_cells(s.lo, s.hi))?;
                comps.push(Component { profile: s.profile, window: (s.lo, s.hi), mu: s.alpha, phase: Phase::Table(table) });
            }
            check_disjoint(&comps.iter().map(|c| c.profile.support()).collect::<Vec<_>>())?;
            (comps, Chart::Tilde(base as Arc<dyn BaseCurve<T>>), Baseline::Chart)
        }
    };
    if components.is_empty() {
        return precondition("packet has no components");
    }
    Ok(PacketData { spec: spec.clone(), eps, a, components, field: field.clone(), chart, baseline, mode })
}

fn table_end<T: Real>(t: &PhaseTable<T>) -> T {
    // hi itself wraps to lo; step just inside
    let h = (t.hi - t.lo) * lit(1e-15);
    t.eval(t.hi - h).expect("window end").0
}

/// (B₁, B₂) of the linearized eikonal ρ̃S_ρ̃ + B₁η₀ + B₂S_φ = 0 at the base curve.
///
/// With G = A/ρ − (B/ρ²)ρ₀′ and κ = √(1 + ρ₀′²/ρ²), g₁ = ∂_ρ(G + κ) at ρ₀ (φ, ρ₀′ fixed):
/// B₁ = −1/g₁, B₂ = (B − ρ₀′/κ)/(ρ₀² g₁).
pub fn eikonal_coefficients<T: Real>(field: &VelocityField<T>, base: &dyn BaseCurve<T>, phi: T) -> (T, T) {
    let (r0, d0) = (base.rho0(phi), base.drho0(phi));
    let j = field.jet(r0, phi);
    let r2 = r0 * r0;
    let kappa = (T::one() + d0 * d0 / r2).sqrt();
    let dg = (j.a_rho * r0 - j.a) / r2 - d0 * (j.b_rho * r0 - lit::<T>(2.0) * j.b) / (r2 * r0);
    let dk = -d0 * d0 / (r2 * r0 * kappa);
    let g1 = dg + dk;
    (-T::one() / g1, (j.b - d0 / kappa) / (r2 * g1))
}

/// Residual −η₀ + (G + κ)μ/ρ̃ + ((B − ρ₀′/κ)/ρ²)Θ′ of the tilde eikonal at ρ̃ with S = μ ln ρ̃ + Θ.
pub fn tilde_eikonal_residual<T: Real>(
    field: &VelocityField<T>,
    base: &dyn BaseCurve<T>,
    eta0: T,
    mu: T,
    theta_prime: T,
    rt: T,
    phi: T,
) -> T {
    let (r0, d0) = (base.rho0(phi), base.drho0(phi));
    let rho = r0 + rt;
    let (_, b) = field.eval_unchecked(rho, phi);
    let (ab, bb) = field.eval_unchecked(r0, phi);
    let kappa = |r: T| (T::one() + d0 * d0 / (r * r)).sqrt();
    let (dqa, dqb) = field.drift_quotient(rho, r0, phi);
    let base_sum = ab / r0 - bb * d0 / (r0 * r0) + kappa(r0);
    let dk = (kappa(rho) - kappa(r0)) / rt;
    let lin = dqa - d0 * dqb + dk + base_sum / rt;
    -eta0 + lin * mu + (b - d0 / kappa(rho)) / (rho * rho) * theta_prime
}

/// Residual of −η₀ + ((ρ − |A|)/|A|)S₁ρ + (B/|A|²)S₁φ for S₁ = (η₀|A| + α) ln(ρ − |A|) + S₃.
pub fn tangent_eikonal_residual<T: Real>(field: &VelocityField<T>, eta0: T, alpha: T, rho: T, phi: T) -> T {
    let abs_a = -field.coefficients(phi).a0;
    let b = field.coefficients(phi).b0;
    let t = rho - abs_a;
    let s_rho = (eta0 * abs_a + alpha) / t;
    let s_phi = -alpha * abs_a / b;
    -eta0 + t / abs_a * s_rho + b / (abs_a * abs_a) * s_phi
}

/// Per-slice data hoisted out of the radial closure.
struct SliceTerm<T> {
    c: T,
    dc: T,
    rot: Cx<T>,
    dth: T,
    mu: T,
}

impl<T: Real> PacketData<T> {
    pub fn field(&self) -> &VelocityField<T> {
        &self.field
    }

    /// ρ_b and ρ_b′ at φ.
    #[inline]
    pub fn baseline(&self, phi: T) -> (T, T) {
        match self.baseline {
            Baseline::Circle(r) => (r, T::zero()),
            Baseline::Chart => self.chart.base(phi),
        }
    }

    /// Chart radius r of the inner support edge t = 0.
    #[inline]
    fn support_origin(&self) -> T {
        match self.baseline {
            Baseline::Circle(r) => r,
            Baseline::Chart => T::zero(),
        }
    }

    fn slice_terms(&self, phi: T) -> Vec<SliceTerm<T>> {
        self.components
            .iter()
            .filter_map(|c| {
                let (cv, dc, th, dth) = c.angular(phi)?;
                Some(SliceTerm { c: cv, dc, rot: cx(th.cos(), th.sin()), dth, mu: c.mu })
            })
            .collect()
    }

    #[inline]
    #[allow(clippy::too_many_arguments)]
    fn radial_jet(&self, terms: &[SliceTerm<T>], t: T, phi: T, d0: T, rb: T, db: T, base_sum: T) -> Jet<T> {
        let rho = rb + t;
        if !(t > T::zero()) || terms.is_empty() {
            return Jet::zero();
        }
        let lt = t.ln();
        let rest_mag = (self.eps * lt - self.a * t).exp() / rho.sqrt();
        let (dqa, dqb) = self.field.drift_quotient(rho, rb, phi);
        let (_, b) = self.field.eval_unchecked(rho, phi);
        let gphi = b / (rho * rho);
        let lin = (dqa - db * dqb) + base_sum / t;
        let half = lit::<T>(0.5) / rho;
        let re_dr = self.eps / t - self.a - half;
        let mut out = Jet::zero();
        for s in terms {
            let ph = s.mu * lt;
            let rest = cx(ph.cos(), ph.sin()) * s.rot * rest_mag;
            let value = rest * s.c;
            let beta = -s.mu * lin - gphi * s.dth;
            out = out
                + Jet {
                    value,
                    dt: value * cx(T::zero(), beta),
                    dr: value * cx(re_dr, s.mu / t),
                    dphi: rest * s.dc + value * cx(-half * d0, s.dth),
                };
        }
        out
    }

    /// G(ρ_b) + κ(ρ_b) at φ; zero on a characteristic base curve.
    fn base_sum(&self, phi: T, rb: T, db: T) -> T {
        let (ab, bb) = self.field.eval_unchecked(rb, phi);
        ab / rb - bb * db / (rb * rb) + (T::one() + db * db / (rb * rb)).sqrt()
    }
}

impl<T: Real> CauchyData<T> for PacketData<T> {
    fn chart(&self) -> &Chart<T> {
        &self.chart
    }

    fn support(&self) -> Support<T> {
        let lo = self.support_origin();
        let angular = match self.components.as_slice() {
            [c] => c.profile.support(),
            _ => None,
        };
        Support {
            lo: Some(lo),
            hi: None,
            lo_singular: true,
            envelope: Some((self.eps, self.a)),
            angular,
            wavenumber: T::zero(),
        }
    }

    fn angular_mode(&self) -> Option<i64> {
        self.mode
    }

    fn jet(&self, r: T, phi: T) -> Jet<T> {
        self.slice(phi)(r)
    }

    fn slice<'a>(&'a self, phi: T) -> Box<dyn Fn(T) -> Jet<T> + Send + Sync + 'a> {
        // r = lo + t with lo the support origin
        let lo = self.support_origin();
        let s = self.slice_from(phi, lo);
        Box::new(move |r| s(r - lo))
    }

    fn slice_from<'a>(&'a self, phi: T, origin: T) -> Box<dyn Fn(T) -> Jet<T> + Send + Sync + 'a> {
        let terms = self.slice_terms(phi);
        let (_, d0) = self.chart.base(phi);
        let (rb, db) = self.baseline(phi);
        let base_sum = match self.baseline {
            Baseline::Circle(_) => T::zero(),
            Baseline::Chart => self.base_sum(phi, rb, db),
        };
        let shift = origin - self.support_origin();
        Box::new(move |t| self.radial_jet(&terms, shift + t, phi, d0, rb, db, base_sum))
    }
}
