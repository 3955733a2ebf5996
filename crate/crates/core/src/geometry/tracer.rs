//! Adaptive Dormand–Prince tracing of zero-energy null geodesics ρ(φ).

use crate::error::{Error, Result};
use crate::flowfield::VelocityField;
use crate::geometry::slopes::{discriminant, family_inverse_slope, family_slope, Family};
use crate::scalar::{lit, Real};

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

/// One Dormand–Prince 5(4) step of y' = g(x, y); returns (y_new, error estimate).
pub fn dopri_step<T: Real, G: FnMut(T, T) -> T>(g: &mut G, x: T, y: T, h: T) -> (T, T) {
    let k1 = g(x, y);
    let k2 = g(x + h * lit(C2), y + h * lit::<T>(A21) * k1);
    let k3 = g(x + h * lit(C3), y + h * (lit::<T>(A31) * k1 + lit::<T>(A32) * k2));
    let k4 = g(x + h * lit(C4), y + h * (lit::<T>(A41) * k1 + lit::<T>(A42) * k2 + lit::<T>(A43) * k3));
    let k5 = g(
        x + h * lit(C5),
        y + h * (lit::<T>(A51) * k1 + lit::<T>(A52) * k2 + lit::<T>(A53) * k3 + lit::<T>(A54) * k4),
    );
    let k6 = g(
        x + h,
        y + h * (lit::<T>(A61) * k1 + lit::<T>(A62) * k2 + lit::<T>(A63) * k3 + lit::<T>(A64) * k4 + lit::<T>(A65) * k5),
    );
    let y5 = y + h * (lit::<T>(B1) * k1 + lit::<T>(B3) * k3 + lit::<T>(B4) * k4 + lit::<T>(B5) * k5 + lit::<T>(B6) * k6);
    let k7 = g(x + h, y5);
    let err = h
        * (lit::<T>(E1) * k1 + lit::<T>(E3) * k3 + lit::<T>(E4) * k4 + lit::<T>(E5) * k5 + lit::<T>(E6) * k6 + lit::<T>(E7) * k7);
    (y5, err.abs())
}

/// Why a trace ended.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StopReason {
    ReachedTarget,
    LeftErgosphere,
    BelowMinimumRadius,
    StepLimit,
}

/// Stop predicate for [`trace_zero_energy_geodesic`].
#[derive(Debug, Clone, Copy)]
pub struct StopRule<T> {
    /// Angle at which the trace ends exactly.
    pub phi_target: T,
    /// Radius below which the trace is abandoned.
    pub rho_min: T,
    pub max_steps: usize,
    pub tol: T,
}

impl<T: Real> StopRule<T> {
    pub fn to_angle(phi_target: T) -> Self {
        Self { phi_target, rho_min: lit(1e-3), max_steps: 200_000, tol: lit(1e-10) }
    }
}

/// Traced curve; φ is monotone along `points` (in `direction`).
#[derive(Debug, Clone)]
pub struct NullGeodesic<T> {
    pub family: Family,
    pub direction: i8,
    pub start: (T, T),
    /// (φ, ρ) nodes of accepted steps.
    pub points: Vec<(T, T)>,
    pub stop: StopReason,
    pub tol: T,
}

/// Beyond this |dρ/dφ| the tracer integrates φ(ρ) instead of ρ(φ).
const SWITCH_SLOPE: f64 = 20.0;

/// Traces dρ/dφ = s_family(ρ, φ) from `start = (φ, ρ)` in the given φ-direction.
///
/// Where the slope becomes steep the independent variable switches to ρ, with
/// dφ/dρ = 1/s_family, and back once the curve flattens.
pub fn trace_zero_energy_geodesic<T: Real>(
    field: &VelocityField<T>,
    family: Family,
    start: (T, T),
    direction: i8,
    stop: &StopRule<T>,
) -> Result<NullGeodesic<T>> {
    let dir = if direction >= 0 { T::one() } else { -T::one() };
    let (mut phi, mut rho) = start;
    if !(rho > T::zero()) {
        return Err(Error::Domain("trace start needs rho > 0".into()));
    }
    let out_tol = lit::<T>(1e-9);
    if discriminant(field, rho, phi) * rho * rho < -out_tol {
        return Err(Error::Domain("trace start outside ergosphere".into()));
    }
    let tol = stop.tol;
    let mut points = vec![(phi, rho)];
    let mut h = lit::<T>(1e-3);
    let hmin = lit::<T>(1e-14);
    let mut reason = StopReason::StepLimit;
    let mut rho_mode = false;
    let mut rho_dir = T::one();
    let mut phi_only = false;
    let mut steps = 0;
    let slope_of = |r: T, p: T| family_slope(field, r, p, family).unwrap_or(T::zero());
    let inv_of = |r: T, p: T| family_inverse_slope(field, r, p, family).unwrap_or(T::zero());
    while steps < stop.max_steps {
        steps += 1;
        let remaining = (stop.phi_target - phi) * dir;
        if remaining <= lit::<T>(1e-15) {
            reason = StopReason::ReachedTarget;
            break;
        }
        let s_here = slope_of(rho, phi);
        if !rho_mode && !phi_only && s_here.abs() > lit(SWITCH_SLOPE) {
            rho_mode = true;
            rho_dir = if s_here * dir >= T::zero() { T::one() } else { -T::one() };
        } else if rho_mode && s_here.abs() < lit::<T>(SWITCH_SLOPE * 0.5) {
            rho_mode = false;
        }
        let (dphi, drho, err) = if rho_mode {
            let mut g = |r: T, p: T| inv_of(r, p);
            let step = h * rho_dir;
            let (p_new, err) = dopri_step(&mut g, rho, phi, step);
            if (p_new - stop.phi_target) * dir > T::zero() {
                // do not overshoot the target in ρ-mode; finish in φ-mode
                rho_mode = false;
                phi_only = true;
                continue;
            }
            (p_new - phi, step, err)
        } else {
            let hh = h.min(remaining);
            let mut g = |p: T, r: T| slope_of(r, p);
            let (r_new, err) = dopri_step(&mut g, phi, rho, hh * dir);
            (hh * dir, r_new - rho, err)
        };
        let scale = tol * (T::one() + rho.abs());
        if err <= scale || h <= hmin {
            if h <= hmin && err > scale {
                return Err(Error::StepUnderflow { phi: phi.f64(), rho: rho.f64() });
            }
            let (np, nr) = (phi + dphi, rho + drho);
            if !(nr > stop.rho_min) {
                reason = StopReason::BelowMinimumRadius;
                break;
            }
            if discriminant(field, nr, np) * nr * nr < -out_tol {
                reason = StopReason::LeftErgosphere;
                break;
            }
            phi = np;
            rho = nr;
            points.push((phi, rho));
        }
        let fac = if err > T::zero() { lit::<T>(0.9) * (scale / err).powf(lit(0.2)) } else { lit(5.0) };
        h = (h * fac.min(lit(5.0)).max(lit(0.2))).min(lit(0.05)).max(hmin);
    }
    Ok(NullGeodesic { family, direction: if direction >= 0 { 1 } else { -1 }, start, points, stop: reason, tol })
}

impl<T: Real> NullGeodesic<T> {
    pub fn end(&self) -> (T, T) {
        *self.points.last().expect("trace has a start point")
    }

    pub fn phi_range(&self) -> (T, T) {
        let (a, b) = (self.points[0].0, self.end().0);
        (a.min(b), a.max(b))
    }

    /// Whether φ is strictly monotone along the nodes.
    pub fn is_graph(&self) -> bool {
        let d = T::from_i64_lossy(self.direction as i64);
        self.points.windows(2).all(|w| (w[1].0 - w[0].0) * d > T::zero())
    }

    /// ρ at angle `phi`, re-integrated from whichever neighbouring node makes the
    /// local flow contract (∂s/∂ρ · Δφ ≤ 0), so near-separatrix traces stay accurate.
    pub fn rho_at(&self, field: &VelocityField<T>, phi: T) -> Option<T> {
        let d = T::from_i64_lossy(self.direction as i64);
        let n = self.points.len();
        if n < 2 {
            return None;
        }
        let first = self.points[0].0;
        let last = self.points[n - 1].0;
        if (phi - first) * d < T::zero() || (phi - last) * d > T::zero() {
            return None;
        }
        // last node with (φ_i − φ)·d ≤ 0
        let idx = self.points.partition_point(|p| (p.0 - phi) * d <= T::zero());
        let i = idx.saturating_sub(1).min(n - 1);
        let (p0, r0) = self.points[i];
        if phi == p0 {
            return Some(r0);
        }
        let fam = self.family;
        let slope = |p: T, r: T| family_slope(field, r, p, fam).unwrap_or(T::zero());
        let (node, gap) = if i + 1 < n {
            let (p1, r1) = self.points[i + 1];
            let h = lit::<T>(1e-7) * (T::one() + r0.abs());
            let dsdr = (slope(p0, r0 + h) - slope(p0, r0 - h)) / (h + h);
            let ds1 = (slope(p1, r1 + h) - slope(p1, r1 - h)) / (h + h);
            let grow = (dsdr + ds1) * (phi - p0);
            ((if grow > T::zero() { (p1, r1) } else { (p0, r0) }), (p1 - p0).abs())
        } else {
            ((p0, r0), T::zero())
        };
        let span = phi - node.0;
        if span == T::zero() {
            return Some(node.1);
        }
        let mut g = |p: T, r: T| slope(p, r);
        // split the re-integration to keep each step inside its accepted size
        let sub = if gap > T::zero() { ((span / gap).abs() * lit::<T>(2.0)).ceil() } else { T::one() };
        let k = sub.to_usize().unwrap_or(1).clamp(1, 64);
        let hs = span / T::from_usize_lossy(k);
        let (mut x, mut y) = node;
        for _ in 0..k {
            y = dopri_step(&mut g, x, y, hs).0;
            x += hs;
        }
        Some(y)
    }

    /// ρ'(φ) = s_family at the dense value.
    pub fn slope_at(&self, field: &VelocityField<T>, phi: T) -> Option<T> {
        let r = self.rho_at(field, phi)?;
        family_slope(field, r, phi, self.family)
    }
}
