//! Smooth periodic base curves ρ₀(φ) built from geodesic windows and quintic connectors.

use crate::error::{structural, Result};
use crate::flowfield::VelocityField;
use crate::geometry::horizon::HorizonCurve;
use crate::geometry::slopes::family_slope;
use crate::geometry::tracer::NullGeodesic;
use crate::scalar::{lit, Real};

/// A 2π-periodic curve ρ₀(φ) with its first derivative.
pub trait BaseCurve<T: Real>: Send + Sync {
    fn rho0(&self, phi: T) -> T;
    fn drho0(&self, phi: T) -> T;
    /// Some(r) when ρ₀ ≡ r.
    fn constant_radius(&self) -> Option<T> {
        None
    }
}

/// ρ₀ ≡ r.
#[derive(Debug, Clone, Copy)]
pub struct Circle<T> {
    pub radius: T,
}

impl<T: Real> BaseCurve<T> for Circle<T> {
    fn rho0(&self, _phi: T) -> T {
        self.radius
    }
    fn drho0(&self, _phi: T) -> T {
        T::zero()
    }
    fn constant_radius(&self) -> Option<T> {
        Some(self.radius)
    }
}

/// Quintic Hermite interpolant on [x0, x1] matching value, slope and curvature at both ends.
#[derive(Debug, Clone, Copy)]
pub struct QuinticHermite<T> {
    pub x0: T,
    pub x1: T,
    c: [T; 6],
}

impl<T: Real> QuinticHermite<T> {
    pub fn new(x0: T, x1: T, left: (T, T, T), right: (T, T, T)) -> Self {
        let h = x1 - x0;
        let (y0, d0, s0) = left;
        let (y1, d1, s1) = right;
        let dy = y1 - y0;
        let (hd0, hd1) = (h * d0, h * d1);
        let (hs0, hs1) = (h * h * s0, h * h * s1);
        let n = |x: f64| lit::<T>(x);
        let c = [
            y0,
            hd0,
            hs0 * n(0.5),
            n(10.0) * dy - n(6.0) * hd0 - n(4.0) * hd1 - n(1.5) * hs0 + n(0.5) * hs1,
            n(-15.0) * dy + n(8.0) * hd0 + n(7.0) * hd1 + n(1.5) * hs0 - hs1,
            n(6.0) * dy - n(3.0) * hd0 - n(3.0) * hd1 - n(0.5) * hs0 + n(0.5) * hs1,
        ];
        Self { x0, x1, c }
    }

    /// (value, first, second derivative) at x.
    pub fn eval(&self, x: T) -> (T, T, T) {
        let h = self.x1 - self.x0;
        let t = (x - self.x0) / h;
        let c = &self.c;
        let mut v = c[5];
        let mut d = c[5] * lit(5.0);
        let mut s = c[5] * lit(20.0);
        for k in (0..5).rev() {
            v = v * t + c[k];
        }
        for k in (1..5).rev() {
            d = d * t + c[k] * T::from_usize_lossy(k);
        }
        for k in (2..5).rev() {
            s = s * t + c[k] * T::from_usize_lossy(k * (k - 1));
        }
        (v, d / h, s / (h * h))
    }
}

/// Window [lo, hi] on a traced geodesic, with endpoint jets (ρ, ρ', ρ'').
#[derive(Debug, Clone)]
pub struct GeodesicWindow<T> {
    pub lo: T,
    pub hi: T,
    pub trace: NullGeodesic<T>,
    /// Added to φ before evaluating the trace (γ₂ carries angles shifted by 2π).
    pub shift: T,
}

impl<T: Real> GeodesicWindow<T> {
    fn rho(&self, field: &VelocityField<T>, phi: T) -> T {
        self.trace.rho_at(field, phi + self.shift).unwrap_or(T::nan())
    }

    fn slope(&self, field: &VelocityField<T>, phi: T) -> T {
        let r = self.rho(field, phi);
        family_slope(field, r, phi, self.trace.family).unwrap_or(T::nan())
    }

    /// (ρ, ρ', ρ'') with ρ'' from a centred difference of the slope along the curve.
    fn jet(&self, field: &VelocityField<T>, phi: T) -> (T, T, T) {
        let h = lit::<T>(1e-4);
        let r = self.rho(field, phi);
        let d = self.slope(field, phi);
        let dd = (self.slope(field, phi + h) - self.slope(field, phi - h)) / (h + h);
        (r, d, dd)
    }
}

#[derive(Debug, Clone)]
enum Piece<T> {
    Window(usize),
    Connector(QuinticHermite<T>, usize, usize),
}

/// Periodic ρ₀(φ): geodesic windows joined by C² quintic connectors.
///
/// Windows are given in increasing φ within one period starting at the first window.
#[derive(Debug, Clone)]
pub struct SmoothBaseCurve<T> {
    field: VelocityField<T>,
    pub windows: Vec<GeodesicWindow<T>>,
    pieces: Vec<(T, T, Piece<T>)>,
    period_start: T,
}

impl<T: Real> SmoothBaseCurve<T> {
    pub fn new(field: &VelocityField<T>, windows: Vec<GeodesicWindow<T>>) -> Result<Self> {
        if windows.is_empty() {
            return structural("smooth closure needs at least one window");
        }
        let start = windows[0].lo;
        for w in &windows {
            if !(w.hi > w.lo) {
                return structural("window with empty range");
            }
        }
        for pair in windows.windows(2) {
            if !(pair[1].lo > pair[0].hi) {
                return structural("overlapping phi-ranges");
            }
        }
        let last = windows.last().unwrap();
        if !(start + T::TAU() > last.hi) {
            return structural("overlapping phi-ranges");
        }
        let mut pieces = Vec::new();
        for (i, w) in windows.iter().enumerate() {
            pieces.push((w.lo, w.hi, Piece::Window(i)));
            let (j, next_lo) = if i + 1 < windows.len() { (i + 1, windows[i + 1].lo) } else { (0, windows[0].lo + T::TAU()) };
            let next = &windows[j];
            let left = w.jet(field, w.hi);
            let right = next.jet(field, next.lo);
            pieces.push((w.hi, next_lo, Piece::Connector(QuinticHermite::new(w.hi, next_lo, left, right), i, j)));
        }
        Ok(Self { field: field.clone(), windows, pieces, period_start: start })
    }

    fn locate(&self, phi: T) -> (T, &Piece<T>) {
        let tau = T::TAU();
        let mut x = (phi - self.period_start) % tau;
        if x < T::zero() {
            x += tau;
        }
        let x = x + self.period_start;
        for (lo, hi, p) in &self.pieces {
            if x >= *lo && x <= *hi {
                return (x, p);
            }
        }
        (x, &self.pieces.last().unwrap().2)
    }

    /// Index of the window containing φ, if any.
    pub fn window_of(&self, phi: T) -> Option<usize> {
        match self.locate(phi) {
            (_, Piece::Window(i)) => Some(*i),
            _ => None,
        }
    }

    /// Connector polynomials, in order.
    pub fn connectors(&self) -> Vec<QuinticHermite<T>> {
        self.pieces
            .iter()
            .filter_map(|(_, _, p)| match p {
                Piece::Connector(q, _, _) => Some(*q),
                _ => None,
            })
            .collect()
    }

    /// Value and slope at the junction from both sides, for continuity checks.
    pub fn junction_mismatch(&self) -> T {
        let mut worst = T::zero();
        for (lo, hi, p) in &self.pieces {
            if let Piece::Connector(q, i, j) = p {
                let (vl, dl, _) = q.eval(*lo);
                let (vr, dr, _) = q.eval(*hi);
                let (left, right) = (&self.windows[*i], &self.windows[*j]);
                let (a, b, _) = left.jet(&self.field, left.hi);
                let (c, d, _) = right.jet(&self.field, right.lo);
                worst = worst.max((vl - a).abs()).max((dl - b).abs()).max((vr - c).abs()).max((dr - d).abs());
            }
        }
        worst
    }
}

impl<T: Real> BaseCurve<T> for SmoothBaseCurve<T> {
    fn rho0(&self, phi: T) -> T {
        match self.locate(phi) {
            (x, Piece::Window(i)) => self.windows[*i].rho(&self.field, x),
            (x, Piece::Connector(q, _, _)) => q.eval(x).0,
        }
    }

    fn drho0(&self, phi: T) -> T {
        match self.locate(phi) {
            (x, Piece::Window(i)) => self.windows[*i].slope(&self.field, x),
            (x, Piece::Connector(q, _, _)) => q.eval(x).1,
        }
    }
}

/// Base curve of a cornered horizon: γ₁ on [φ_c + m₁, φ* − m₂], γ₂ on
/// [φ* + m₂, φ_c + 2π − m₁], joined by connectors across α₁ and the corner.
pub fn corner_base_curve<T: Real>(
    field: &VelocityField<T>,
    horizon: &HorizonCurve<T>,
    start_margin: T,
    corner_margin: T,
) -> Result<SmoothBaseCurve<T>> {
    let (Some((g1, g2)), Some(phi_star)) = (horizon.geodesics(), horizon.corner_phi) else {
        return structural("horizon has no corner");
    };
    let tau = T::TAU();
    let phi_c = horizon.start.0;
    let windows = vec![
        GeodesicWindow { lo: phi_c + start_margin, hi: phi_star - corner_margin, trace: g1.clone(), shift: T::zero() },
        GeodesicWindow {
            lo: phi_star + corner_margin,
            hi: phi_c + tau - start_margin,
            trace: g2.clone(),
            shift: -tau,
        },
    ];
    SmoothBaseCurve::new(field, windows)
}

/// Joins the given geodesic windows into a smooth periodic curve.
pub fn smooth_closure<T: Real>(field: &VelocityField<T>, windows: Vec<GeodesicWindow<T>>) -> Result<SmoothBaseCurve<T>> {
    SmoothBaseCurve::new(field, windows)
}
