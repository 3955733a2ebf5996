//! Slopes s = dρ/dφ of zero-energy null directions.
//!
//! With η₀ = 0 and conormal (η_ρ, η_φ) = (1, −s), H = 0 becomes
//! a₂s² + a₁s + a₀ = 0 with a₂ = B²/ρ⁴ − 1/ρ², a₁ = −2AB/ρ³, a₀ = A²/ρ² − 1.

use crate::error::{domain, Result};
use crate::flowfield::VelocityField;
use crate::scalar::{lit, Real};

/// Root branch; `One` takes −√Δ in (−a₁ ∓ √Δ)/(2a₂), `Two` takes +√Δ.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    One,
    Two,
}

impl Family {
    pub fn index(self) -> u8 {
        match self {
            Family::One => 1,
            Family::Two => 2,
        }
    }

    pub fn other(self) -> Self {
        match self {
            Family::One => Family::Two,
            Family::Two => Family::One,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Roots<T> {
    Pair { one: T, two: T },
    /// a₂ ≈ 0: one finite root; the other family escapes to infinity.
    Linear { finite: T, finite_family: Family },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SlopeRoots<T> {
    pub roots: Roots<T>,
    pub discriminant: T,
}

impl<T: Real> SlopeRoots<T> {
    pub fn family(&self, f: Family) -> Option<T> {
        match self.roots {
            Roots::Pair { one, two } => Some(if f == Family::One { one } else { two }),
            Roots::Linear { finite, finite_family } => (f == finite_family).then_some(finite),
        }
    }
}

/// (a₂, a₁, a₀) at (ρ, φ).
#[inline]
pub fn quadratic_coefficients<T: Real>(field: &VelocityField<T>, rho: T, phi: T) -> (T, T, T) {
    let (a, b) = field.eval_unchecked(rho, phi);
    let r2 = rho * rho;
    let a2 = (b * b / r2 - T::one()) / r2;
    let a1 = -lit::<T>(2.0) * a * b / (r2 * rho);
    let a0 = a * a / r2 - T::one();
    (a2, a1, a0)
}

/// Δ = (4/ρ²)((A² + B²)/ρ² − 1), the discriminant a₁² − 4a₂a₀ in cancellation-free form.
#[inline]
pub fn discriminant<T: Real>(field: &VelocityField<T>, rho: T, phi: T) -> T {
    lit::<T>(4.0) / (rho * rho) * (field.speed_sq(rho, phi) - T::one())
}

/// Discriminants this far below zero are rounding and are treated as the ergosphere.
#[inline]
fn snap_tol<T: Real>(rho: T) -> T {
    lit::<T>(64.0) * T::epsilon() * lit::<T>(4.0) / (rho * rho)
}

/// Family carried by q/a₂, where q = −(a₁ + sgn(a₁)√Δ)/2.
#[inline]
fn q_family<T: Real>(a1: T) -> Family {
    if a1 >= T::zero() {
        Family::One
    } else {
        Family::Two
    }
}

/// q and the root of the other family, from whichever of a₀/q and the vertex form
/// (−a₁ ± √Δ)/(2a₂) has the smaller rounding bound. a₀/q loses accuracy when a₁
/// and Δ are both tiny, as near a characteristic point.
#[inline]
fn branches<T: Real>(a2: T, a1: T, a0: T, disc: T) -> (T, Option<T>) {
    let sq = disc.max(T::zero()).sqrt();
    let sgn = if a1 >= T::zero() { T::one() } else { -T::one() };
    let q = -(a1 + sgn * sq) * lit(0.5);
    let spread = a1.abs() + sq;
    let other = if spread * spread < lit::<T>(2.0) * (T::one() + a0.abs()) * a2.abs() {
        Some((-a1 + sgn * sq) / (a2 + a2))
    } else {
        (q != T::zero()).then(|| a0 / q)
    };
    (q, other)
}

/// Both branch values from (a₂, a₁, a₀, Δ ≥ 0), avoiding cancellation.
fn solve<T: Real>(a2: T, a1: T, a0: T, disc: T) -> Result<Roots<T>> {
    let (q, other) = branches(a2, a1, a0, disc);
    let scale = a2.abs().max(a1.abs()).max(a0.abs());
    let qf = q_family(a1);
    if a2.abs() <= lit::<T>(1e-14) * scale {
        return match other {
            Some(s) if q != T::zero() => Ok(Roots::Linear { finite: s, finite_family: qf.other() }),
            _ => domain("slope quadratic degenerate"),
        };
    }
    let rq = q / a2;
    let Some(ro) = other else {
        // a₁ = 0 and Δ = 0: double root at zero
        return Ok(Roots::Pair { one: rq, two: rq });
    };
    Ok(if qf == Family::One {
        Roots::Pair { one: rq, two: ro }
    } else {
        Roots::Pair { one: ro, two: rq }
    })
}

/// Real slope roots at (ρ, φ); fails outside the ergosphere.
pub fn geodesic_slope_roots<T: Real>(field: &VelocityField<T>, rho: T, phi: T) -> Result<SlopeRoots<T>> {
    if !(rho > T::zero()) {
        return domain("slope roots need rho > 0");
    }
    let disc = discriminant(field, rho, phi);
    if disc < -snap_tol(rho) {
        return domain("outside ergosphere");
    }
    let (a2, a1, a0) = quadratic_coefficients(field, rho, phi);
    Ok(SlopeRoots { roots: solve(a2, a1, a0, disc)?, discriminant: disc.max(T::zero()) })
}

/// Slope of one family with Δ clamped at zero; used inside integrator stages.
#[inline]
pub(crate) fn family_slope<T: Real>(field: &VelocityField<T>, rho: T, phi: T, fam: Family) -> Option<T> {
    let disc = discriminant(field, rho, phi);
    let (a2, a1, a0) = quadratic_coefficients(field, rho, phi);
    let (q, other) = branches(a2, a1, a0, disc);
    if fam == q_family(a1) {
        (a2 != T::zero()).then(|| q / a2)
    } else {
        other
    }
}

/// dφ/dρ of one family (the reciprocal slope), finite where the slope is vertical.
#[inline]
pub(crate) fn family_inverse_slope<T: Real>(field: &VelocityField<T>, rho: T, phi: T, fam: Family) -> Option<T> {
    let disc = discriminant(field, rho, phi);
    let (a2, a1, a0) = quadratic_coefficients(field, rho, phi);
    let (q, other) = branches(a2, a1, a0, disc);
    if fam == q_family(a1) {
        (q != T::zero()).then(|| a2 / q)
    } else {
        other.filter(|s| *s != T::zero()).map(|s| s.recip())
    }
}

/// Residual a₂s² + a₁s + a₀ scaled by the coefficient size.
pub fn slope_residual<T: Real>(field: &VelocityField<T>, rho: T, phi: T, s: T) -> T {
    let (a2, a1, a0) = quadratic_coefficients(field, rho, phi);
    let scale = a2.abs() * s * s + a1.abs() * s.abs() + a0.abs();
    (a2 * s * s + a1 * s + a0).abs() / scale.max(T::min_positive_value())
}
