//! Black-hole boundaries: the circle ρ = |A| and the two-segment cornered horizon.

use crate::error::{structural, Error, Result};
use crate::flowfield::{FieldKind, VelocityField};
use crate::geometry::ergosphere::{characteristic_points, ergosphere_radius};
use crate::geometry::slopes::{family_slope, Family};
use crate::geometry::tracer::{trace_zero_energy_geodesic, NullGeodesic, StopReason, StopRule};
use crate::numerics::roots::bisect;
use crate::scalar::{lit, wrap_pi, Real};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SegmentKind {
    Geodesic(Family),
    SmoothConnector,
    Circle,
}

#[derive(Debug, Clone)]
pub struct Segment<T> {
    pub kind: SegmentKind,
    /// (φ, ρ) in increasing φ.
    pub points: Vec<(T, T)>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Corner<T> {
    pub phi: T,
    pub rho: T,
    /// Interior angle between the two tangents, in (0, π).
    pub angle: T,
}

/// Closed boundary curve. For the cornered kind, `traces` are the full geodesics
/// (γ₁ counterclockwise, γ₂ clockwise from α₁) backing the two segments.
#[derive(Debug, Clone)]
pub struct HorizonCurve<T> {
    pub segments: Vec<Segment<T>>,
    pub corners: Vec<Corner<T>>,
    pub start: (T, T),
    pub traces: Vec<NullGeodesic<T>>,
    /// φ of the corner on γ₁ (γ₂ reaches it at this angle minus 2π).
    pub corner_phi: Option<T>,
}

impl<T: Real> HorizonCurve<T> {
    /// Distance between the last and first point in the plane.
    pub fn closure_gap(&self) -> T {
        let first = self.segments.first().and_then(|s| s.points.first()).copied();
        let last = self.segments.last().and_then(|s| s.points.last()).copied();
        match (first, last) {
            (Some((p0, r0)), Some((p1, r1))) => {
                let (x0, y0) = (r0 * p0.cos(), r0 * p0.sin());
                let (x1, y1) = (r1 * p1.cos(), r1 * p1.sin());
                (x0 - x1).hypot(y0 - y1)
            }
            _ => T::infinity(),
        }
    }

    /// γ₁ (counterclockwise) and γ₂ (clockwise) traces of a cornered horizon.
    pub fn geodesics(&self) -> Option<(&NullGeodesic<T>, &NullGeodesic<T>)> {
        match self.traces.as_slice() {
            [g1, g2] => Some((g1, g2)),
            _ => None,
        }
    }
}

/// The circle ρ = |A| of constant and tangent fields.
pub fn circle_horizon<T: Real>(radius: T, n: usize) -> HorizonCurve<T> {
    let h = T::TAU() / T::from_usize_lossy(n);
    let points = (0..=n).map(|j| (h * T::from_usize_lossy(j), radius)).collect();
    HorizonCurve {
        segments: vec![Segment { kind: SegmentKind::Circle, points }],
        corners: vec![],
        start: (T::zero(), radius),
        traces: vec![],
        corner_phi: None,
    }
}

/// Horizon of any supported field.
pub fn horizon<T: Real>(field: &VelocityField<T>) -> Result<HorizonCurve<T>> {
    match field.kind() {
        FieldKind::Constant { a, .. } | FieldKind::Tangent { a, .. } => Ok(circle_horizon(a.abs(), 720)),
        FieldKind::Corner { .. } => build_corner_horizon(field),
    }
}

/// Unit tangent (x, y) of a polar graph ρ(φ) traversed with increasing φ.
fn tangent<T: Real>(phi: T, rho: T, slope: T) -> (T, T) {
    let (s, c) = phi.sin_cos();
    let (tx, ty) = (slope * c - rho * s, slope * s + rho * c);
    let n = tx.hypot(ty);
    (tx / n, ty / n)
}

/// Whether the backward trace from `far` leaves the ergosphere before reaching φ_c.
fn exits_backward<T: Real>(field: &VelocityField<T>, fam: Family, start: (T, T), far: (T, T), direction: i8) -> Option<bool> {
    let rule = StopRule { rho_min: start.1 * lit(0.25), ..StopRule::to_angle(start.0) };
    let g = trace_zero_energy_geodesic(field, fam, far, -direction, &rule).ok()?;
    Some(g.stop == StopReason::LeftErgosphere && (g.end().0 - start.0).abs() > lit(1e-4))
}

/// ρ at φ_c + d·x on the outermost geodesic of `fam` through the characteristic point:
/// the boundary between backward traces that exit the ergosphere and those that bend
/// inward. Backward the flow expands, so bisection on this split is well conditioned.
fn separatrix_radius<T: Real>(field: &VelocityField<T>, fam: Family, start: (T, T), direction: i8, x: T) -> Option<T> {
    let phi = start.0 + T::from_i64_lossy(direction as i64) * x;
    let r0 = ergosphere_radius(field, phi);
    let mut lo = None;
    let mut hi = None;
    for k in 1..=52 {
        let rho = r0 * (T::one() - lit::<T>(0.5).powi(k));
        if exits_backward(field, fam, start, (phi, rho), direction)? {
            hi = Some(rho);
            break;
        }
        lo = Some(rho);
    }
    let (mut lo, mut hi) = (lo?, hi?);
    loop {
        let mid = (lo + hi) * lit(0.5);
        if !(mid > lo && mid < hi) {
            return Some(lo);
        }
        if exits_backward(field, fam, start, (phi, mid), direction)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
}

/// Outermost geodesic of one family leaving a characteristic point in `direction`.
///
/// Right at the point the forward flow is unstable (traces from exactly there leave
/// the ergosphere at once), while further out it contracts onto this geodesic. The
/// curve is pinned by bisection at φ_c ± x for x = π/4, π/8, … and traced forward
/// from x = π/4 to the far side.
fn outer_trace<T: Real>(field: &VelocityField<T>, start: (T, T), direction: i8) -> Option<NullGeodesic<T>> {
    let d = T::from_i64_lossy(direction as i64);
    let mut best: Option<(T, NullGeodesic<T>)> = None;
    for fam in [Family::One, Family::Two] {
        let mut pinned = Vec::new();
        let mut x = T::FRAC_PI_4();
        for _ in 0..10 {
            let Some(r) = separatrix_radius(field, fam, start, direction, x) else { break };
            pinned.push((start.0 + d * x, r));
            x = x * lit(0.5);
        }
        let Some(&anchor) = pinned.first() else { continue };
        let rule = StopRule { rho_min: start.1 * lit(0.25), ..StopRule::to_angle(start.0 + d * (T::PI() + lit(1.0))) };
        let Ok(fwd) = trace_zero_energy_geodesic(field, fam, anchor, direction, &rule) else { continue };
        if fwd.stop == StopReason::StepLimit || !fwd.is_graph() {
            continue;
        }
        let mut points = vec![start];
        points.extend(pinned.iter().rev().copied());
        points.extend(fwd.points.iter().skip(1).copied());
        let g = NullGeodesic { family: fam, direction: if direction >= 0 { 1 } else { -1 }, start, points, stop: fwd.stop, tol: fwd.tol };
        let Some(r) = g.rho_at(field, start.0 + d * T::FRAC_PI_2()) else { continue };
        if best.as_ref().map_or(true, |(br, _)| r > *br) {
            best = Some((r, g));
        }
    }
    best.map(|(_, g)| g)
}

/// Transversal intersection of γ₁ with γ₂ (shifted by 2π) on the far side.
fn crossing<T: Real>(field: &VelocityField<T>, start: (T, T), g1: &NullGeodesic<T>, g2: &NullGeodesic<T>) -> Result<(T, T)> {
    let tau = T::TAU();
    // signed radial gap on the overlap
    let gap = |p: T| -> Option<T> { Some(g1.rho_at(field, p)? - g2.rho_at(field, p - tau)?) };
    // scan only where both traces exist; near-circular fields overlap in a sliver
    let lo_all = (start.0 + T::PI() - lit(1.0)).max(g2.phi_range().0 + tau);
    let hi_all = (start.0 + T::PI() + lit(1.0)).min(g1.phi_range().1);
    if !(hi_all > lo_all) {
        return structural("traces do not overlap");
    }
    let n = 400;
    let h = (hi_all - lo_all) / T::from_usize_lossy(n);
    let mut bracket = None;
    // the crossing nearest φ_c + π decides the corner
    let centre = start.0 + T::PI();
    let mut prev: Option<(T, T)> = None;
    for j in 0..=n {
        let p = lo_all + h * T::from_usize_lossy(j);
        let Some(gv) = gap(p) else {
            prev = None;
            continue;
        };
        if let Some((pp, gp)) = prev {
            if gp.signum() != gv.signum() || gv == T::zero() {
                let mid = (pp + p) * lit(0.5);
                let better = bracket.map_or(true, |(a, b): (T, T)| ((a + b) * lit(0.5) - centre).abs() > (mid - centre).abs());
                if better {
                    bracket = Some((pp, p));
                }
            }
        }
        prev = Some((p, gv));
    }
    let Some((a, b)) = bracket else { return structural("no corner found") };
    let phi_star = bisect(|p| gap(p).unwrap_or(T::zero()), a, b, lit(1e-13))?;
    let rho_star = g1.rho_at(field, phi_star).ok_or_else(|| Error::Structural("corner outside trace".into()))?;
    Ok((phi_star, rho_star))
}

/// Both traces run into the other characteristic point instead of crossing; this
/// happens for weak flows, where the corner sits on the ergosphere there.
fn joined_at<T: Real>(other: (T, T), g1: &NullGeodesic<T>, g2: &NullGeodesic<T>) -> Option<(T, T)> {
    let tau = T::TAU();
    let near = |end: (T, T)| {
        let dphi = wrap_pi(end.0 - other.0).abs();
        // the gap closes quadratically, so traces stop a few mrad short
        dphi < lit(5e-2) && (end.1 - other.1).abs() < lit::<T>(1e-6) * other.1
    };
    if !(near(g1.end()) && near(g2.end())) {
        return None;
    }
    // γ₁ reaches the point at φ ∈ (φ_c, φ_c + 2π)
    let mut phi = other.0;
    while phi <= g1.start.0 {
        phi += tau;
    }
    while phi > g1.start.0 + tau {
        phi -= tau;
    }
    Some((phi, other.1))
}

/// Two geodesics from one characteristic point, closed at their intersection.
fn corner_from<T: Real>(field: &VelocityField<T>, start: (T, T), other: (T, T)) -> Result<HorizonCurve<T>> {
    let g1 = outer_trace(field, start, 1).ok_or_else(|| Error::Structural("no counterclockwise trace reaches the far side".into()))?;
    let g2 = outer_trace(field, start, -1).ok_or_else(|| Error::Structural("no clockwise trace reaches the far side".into()))?;
    let tau = T::TAU();
    let (phi_star, rho_star) = match crossing(field, start, &g1, &g2) {
        Ok(c) => c,
        Err(e) => joined_at(other, &g1, &g2).ok_or(e)?,
    };

    let s1 = family_slope(field, rho_star, phi_star, g1.family).unwrap_or(T::zero());
    let s2 = family_slope(field, rho_star, phi_star, g2.family).unwrap_or(T::zero());
    // γ₁ arrives with increasing φ; leave the corner backwards along it and forwards along γ₂
    let (t1x, t1y) = tangent(phi_star, rho_star, s1);
    let (t2x, t2y) = tangent(phi_star, rho_star, s2);
    let cosang = (-(t1x * t2x) - t1y * t2y).max(-T::one()).min(T::one());
    let angle = cosang.acos();

    let mut seg2: Vec<(T, T)> = vec![(phi_star - tau, rho_star)];
    seg2.extend(g2.points.iter().rev().copied().filter(|p| p.0 > phi_star - tau));
    let mut seg1: Vec<(T, T)> = g1.points.iter().copied().filter(|p| p.0 < phi_star).collect();
    seg1.push((phi_star, rho_star));
    if seg1.len() < 2 || seg2.len() < 2 {
        return structural("degenerate horizon segments");
    }
    Ok(HorizonCurve {
        segments: vec![
            Segment { kind: SegmentKind::Geodesic(g2.family), points: seg2 },
            Segment { kind: SegmentKind::Geodesic(g1.family), points: seg1 },
        ],
        corners: vec![Corner { phi: phi_star, rho: rho_star, angle }],
        start,
        traces: vec![g1, g2],
        corner_phi: Some(phi_star),
    })
}

/// Cornered horizon from two characteristic points (the innermost one is tried first).
pub fn build_corner_horizon<T: Real>(field: &VelocityField<T>) -> Result<HorizonCurve<T>> {
    let mut pts = characteristic_points(field)?;
    if pts.len() != 2 {
        return structural(format!("expected two characteristic points, found {}", pts.len()));
    }
    pts.sort_by(|a, b| a.1.partial_cmp(&b.1).unwrap());
    let mut last = Error::Structural("no corner found".into());
    for (i, &start) in pts.iter().enumerate() {
        match corner_from(field, start, pts[1 - i]) {
            Ok(h) => return Ok(h),
            Err(e) => last = e,
        }
    }
    Err(last)
}
