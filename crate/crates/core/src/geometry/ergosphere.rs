//! Ergosphere (A² + B²)/ρ² = 1 and its characteristic points.

use crate::error::{Error, Result};
use crate::flowfield::{FieldKind, VelocityField};
use crate::geometry::slopes::quadratic_coefficients;
use crate::numerics::roots::{bisect, scan_roots};
use crate::scalar::{lit, wrap_pi, Real};

/// r₀(φ) in closed form for each field kind.
pub fn ergosphere_radius<T: Real>(field: &VelocityField<T>, phi: T) -> T {
    match field.kind() {
        FieldKind::Constant { a, b } => a.hypot(*b),
        FieldKind::Tangent { a, b } => a.hypot(b.eval(phi)),
        FieldKind::Corner { a0, eps } => {
            let c = phi.cos();
            let root = (T::one() - *eps * *eps * c * c).sqrt();
            -*a0 * (root - *eps * phi.sin()) / (T::one() - *eps * *eps)
        }
    }
}

/// dr₀/dφ in closed form.
pub fn ergosphere_slope<T: Real>(field: &VelocityField<T>, phi: T) -> T {
    match field.kind() {
        FieldKind::Constant { .. } => T::zero(),
        FieldKind::Tangent { a, b } => {
            let bv = b.eval(phi);
            bv * b.deriv(phi) / a.hypot(bv)
        }
        FieldKind::Corner { a0, eps } => {
            let (s, c) = phi.sin_cos();
            let e2 = *eps * *eps;
            let root = (T::one() - e2 * c * c).sqrt();
            -*a0 * (-*eps * c + e2 * c * s / root) / (T::one() - e2)
        }
    }
}

/// r₀(φ) by a bracketed root solve of A(r,φ)² + B(r,φ)² − r² = 0; independent of the closed forms.
pub fn ergosphere_radius_root<T: Real>(field: &VelocityField<T>, phi: T) -> Result<T> {
    let f = |r: T| {
        let (a, b) = field.eval_unchecked(r, phi);
        a * a + b * b - r * r
    };
    let mut hi = T::one();
    let mut grow = 0;
    while f(hi) >= T::zero() {
        hi = hi * lit(2.0);
        grow += 1;
        if grow > 200 {
            return Err(Error::NotConverged { context: "ergosphere bracket".into(), estimate: hi.f64(), error: f64::INFINITY });
        }
    }
    let mut lo = hi * lit(0.5);
    while f(lo) < T::zero() {
        lo = lo * lit(0.5);
        if lo < T::min_positive_value() {
            return Err(Error::NotConverged { context: "ergosphere bracket".into(), estimate: lo.f64(), error: f64::INFINITY });
        }
    }
    let mut r = bisect(f, lo, hi, T::epsilon() * hi * lit(4.0))?;
    // one Newton polish
    let (a, b) = field.eval_unchecked(r, phi);
    let c = field.coefficients(phi);
    let df = lit::<T>(2.0) * (a * c.a1 + b * c.b1) - lit::<T>(2.0) * r;
    if df != T::zero() {
        r -= (a * a + b * b - r * r) / df;
    }
    Ok(r)
}

/// Uniform samples of r₀ over [0, 2π).
#[derive(Debug, Clone)]
pub struct ErgosphereCurve<T> {
    pub samples: Vec<(T, T)>,
}

impl<T: Real> ErgosphereCurve<T> {
    pub fn sample(field: &VelocityField<T>, n: usize) -> Self {
        let h = T::TAU() / T::from_usize_lossy(n);
        let samples = (0..n)
            .map(|j| {
                let p = h * T::from_usize_lossy(j);
                (p, ergosphere_radius(field, p))
            })
            .collect();
        Self { samples }
    }

    /// max |(A² + B²)/r₀² − 1| over the samples.
    pub fn max_speed_defect(&self, field: &VelocityField<T>) -> T {
        self.samples
            .iter()
            .map(|&(p, r)| (field.speed_sq(r, p) - T::one()).abs())
            .fold(T::zero(), T::max)
    }
}

/// Transversality of the double null direction to the ergosphere: a₁ + 2a₂ r₀'.
///
/// It vanishes exactly where the double root s = −a₁/(2a₂) equals dr₀/dφ and changes
/// sign at simple characteristic points, whereas the discriminant only touches zero.
pub fn characteristic_function<T: Real>(field: &VelocityField<T>, phi: T) -> T {
    let r = ergosphere_radius(field, phi);
    let (a2, a1, _) = quadratic_coefficients(field, r, phi);
    a1 + lit::<T>(2.0) * a2 * ergosphere_slope(field, phi)
}

/// Characteristic points (φ, r₀(φ)) with φ in (−π, π], sorted by φ.
///
/// A constant field has none unless B = 0, where every ergosphere point is
/// characteristic; that degenerate case also returns an empty list.
pub fn characteristic_points<T: Real>(field: &VelocityField<T>) -> Result<Vec<(T, T)>> {
    let phis: Vec<T> = match field.kind() {
        FieldKind::Constant { .. } => vec![],
        FieldKind::Tangent { .. } => field.b_zeros().to_vec(),
        FieldKind::Corner { .. } => {
            let lo = -T::PI() + lit(1e-3);
            scan_roots(|p| characteristic_function(field, p), lo, lo + T::TAU(), 720, lit(1e-14))?
        }
    };
    let mut pts: Vec<(T, T)> = phis.into_iter().map(|p| (wrap_pi(p), ergosphere_radius(field, p))).collect();
    pts.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    Ok(pts)
}
