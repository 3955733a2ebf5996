//! Cauchy data on the x₀ = 0 slice, in the polar or a tilde chart.

use std::fmt;
use std::ops::{Add, Mul};
use std::sync::Arc;

use num_traits::Zero;

use crate::geometry::BaseCurve;
use crate::scalar::{Cx, Real};

/// Value and first derivatives of a solution at one point of the slice.
///
/// `dr` and `dphi` are taken in the data's chart: in the tilde chart `dphi`
/// is ∂_φ at fixed r = ρ − ρ₀(φ).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jet<T> {
    pub value: Cx<T>,
    pub dt: Cx<T>,
    pub dr: Cx<T>,
    pub dphi: Cx<T>,
}

impl<T: Real> Jet<T> {
    pub fn zero() -> Self {
        let z = Cx::zero();
        Self { value: z, dt: z, dr: z, dphi: z }
    }

    pub fn conj(&self) -> Self {
        Self { value: self.value.conj(), dt: self.dt.conj(), dr: self.dr.conj(), dphi: self.dphi.conj() }
    }

    pub fn is_zero(&self) -> bool {
        self.value.is_zero() && self.dt.is_zero() && self.dr.is_zero() && self.dphi.is_zero()
    }
}

impl<T: Real> Add for Jet<T> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self { value: self.value + o.value, dt: self.dt + o.dt, dr: self.dr + o.dr, dphi: self.dphi + o.dphi }
    }
}

impl<T: Real> Mul<Cx<T>> for Jet<T> {
    type Output = Self;
    fn mul(self, c: Cx<T>) -> Self {
        Self { value: self.value * c, dt: self.dt * c, dr: self.dr * c, dphi: self.dphi * c }
    }
}

/// Coordinates (r, φ) on the slice with ρ = ρ₀(φ) + r; the polar chart has ρ₀ ≡ 0.
#[derive(Clone)]
pub enum Chart<T> {
    Polar,
    Tilde(Arc<dyn BaseCurve<T>>),
}

impl<T: Real> fmt::Debug for Chart<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Chart::Polar => write!(f, "Polar"),
            Chart::Tilde(c) => match c.constant_radius() {
                Some(r) => write!(f, "Tilde(circle {r})"),
                None => write!(f, "Tilde(curve)"),
            },
        }
    }
}

impl<T: Real> Chart<T> {
    pub fn tilde<C: BaseCurve<T> + 'static>(curve: C) -> Self {
        Chart::Tilde(Arc::new(curve))
    }

    /// (ρ₀(φ), ρ₀′(φ)).
    #[inline]
    pub fn base(&self, phi: T) -> (T, T) {
        match self {
            Chart::Polar => (T::zero(), T::zero()),
            Chart::Tilde(c) => (c.rho0(phi), c.drho0(phi)),
        }
    }

    /// Whether ρ₀ is constant, so that separable data stay separable.
    pub fn is_rotation_invariant(&self) -> bool {
        match self {
            Chart::Polar => true,
            Chart::Tilde(c) => c.constant_radius().is_some(),
        }
    }

    /// Whether both charts describe the same coordinates.
    pub fn same_as(&self, other: &Self) -> bool {
        match (self, other) {
            (Chart::Polar, Chart::Polar) => true,
            (Chart::Tilde(a), Chart::Tilde(b)) => {
                std::ptr::addr_eq(Arc::as_ptr(a), Arc::as_ptr(b))
                    || matches!((a.constant_radius(), b.constant_radius()), (Some(x), Some(y)) if x == y)
            }
            _ => false,
        }
    }
}

/// Where data may be nonzero, and how they behave there.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Support<T> {
    /// Lower end in r; `None` is the chart boundary ρ = 0.
    pub lo: Option<T>,
    /// Upper end in r; `None` is unbounded.
    pub hi: Option<T>,
    /// Integrable power singularity (or infinite oscillation) at `lo`.
    pub lo_singular: bool,
    /// Envelope |data| ≲ (r − lo)^p e^{−q(r − lo)} as (p, q).
    pub envelope: Option<(T, T)>,
    /// Angular window [lo, hi] outside which the data vanish; `None` is the full circle.
    pub angular: Option<(T, T)>,
    /// Largest radial wavenumber of the data.
    pub wavenumber: T,
}

impl<T: Real> Support<T> {
    pub fn everywhere(wavenumber: T) -> Self {
        Self { lo: None, hi: None, lo_singular: false, envelope: None, angular: None, wavenumber }
    }
}

/// Initial data (C, ∂₀C) of a solution, evaluated through its first derivatives.
pub trait CauchyData<T: Real>: Send + Sync {
    fn chart(&self) -> &Chart<T>;

    fn support(&self) -> Support<T>;

    /// Some(m) when the data are R(r)e^{imφ} and the field is φ-independent.
    fn angular_mode(&self) -> Option<i64> {
        None
    }

    /// Jet at chart coordinates (r, φ); zero outside the support.
    fn jet(&self, r: T, phi: T) -> Jet<T>;

    /// Radial slice at fixed φ; implementors hoist φ-only work here.
    fn slice<'a>(&'a self, phi: T) -> Box<dyn Fn(T) -> Jet<T> + Send + Sync + 'a> {
        Box::new(move |r| self.jet(r, phi))
    }

    /// Slice in the offset coordinate t = r − origin; data singular at `origin`
    /// override this to keep t exact near the singularity.
    fn slice_from<'a>(&'a self, phi: T, origin: T) -> Box<dyn Fn(T) -> Jet<T> + Send + Sync + 'a> {
        let s = self.slice(phi);
        Box::new(move |t| s(origin + t))
    }

    fn value(&self, r: T, phi: T) -> Cx<T> {
        self.jet(r, phi).value
    }

    fn dvalue_dt(&self, r: T, phi: T) -> Cx<T> {
        self.jet(r, phi).dt
    }
}

/// Pointwise complex conjugate of other data.
#[derive(Debug, Clone)]
pub struct Conjugate<D>(pub D);

impl<T: Real, D: CauchyData<T>> CauchyData<T> for Conjugate<D> {
    fn chart(&self) -> &Chart<T> {
        self.0.chart()
    }
    fn support(&self) -> Support<T> {
        self.0.support()
    }
    fn angular_mode(&self) -> Option<i64> {
        self.0.angular_mode().map(|m| -m)
    }
    fn jet(&self, r: T, phi: T) -> Jet<T> {
        self.0.jet(r, phi).conj()
    }
    fn slice<'a>(&'a self, phi: T) -> Box<dyn Fn(T) -> Jet<T> + Send + Sync + 'a> {
        let s = self.0.slice(phi);
        Box::new(move |r| s(r).conj())
    }
    fn slice_from<'a>(&'a self, phi: T, origin: T) -> Box<dyn Fn(T) -> Jet<T> + Send + Sync + 'a> {
        let s = self.0.slice_from(phi, origin);
        Box::new(move |t| s(t).conj())
    }
}

/// Finite linear combination Σ c_j u_j of data on one chart.
pub struct Superposition<'d, T: Real> {
    chart: Chart<T>,
    terms: Vec<(Cx<T>, &'d dyn CauchyData<T>)>,
}

impl<'d, T: Real> Superposition<'d, T> {
    /// Fails when the terms do not share a chart.
    pub fn new(terms: Vec<(Cx<T>, &'d dyn CauchyData<T>)>) -> crate::Result<Self> {
        let Some((_, first)) = terms.first() else {
            return crate::error::precondition("empty superposition");
        };
        let chart = first.chart().clone();
        if terms.iter().any(|(_, d)| !d.chart().same_as(&chart)) {
            return crate::error::precondition("superposition terms on different charts");
        }
        Ok(Self { chart, terms })
    }
}

impl<T: Real> CauchyData<T> for Superposition<'_, T> {
    fn chart(&self) -> &Chart<T> {
        &self.chart
    }

    fn support(&self) -> Support<T> {
        let mut out = self.terms[0].1.support();
        for (_, d) in &self.terms[1..] {
            out = hull(out, d.support());
        }
        out
    }

    fn angular_mode(&self) -> Option<i64> {
        let m = self.terms[0].1.angular_mode()?;
        self.terms.iter().all(|(_, d)| d.angular_mode() == Some(m)).then_some(m)
    }

    fn jet(&self, r: T, phi: T) -> Jet<T> {
        self.terms.iter().fold(Jet::zero(), |acc, (c, d)| acc + d.jet(r, phi) * *c)
    }
}

/// Smallest support containing both.
fn hull<T: Real>(a: Support<T>, b: Support<T>) -> Support<T> {
    let lo = match (a.lo, b.lo) {
        (Some(x), Some(y)) => Some(x.min(y)),
        _ => None,
    };
    let hi = match (a.hi, b.hi) {
        (Some(x), Some(y)) => Some(x.max(y)),
        _ => None,
    };
    let envelope = match (a.envelope, b.envelope) {
        (Some((p, q)), Some((r, s))) if a.lo == b.lo => Some((p.min(r), q.min(s))),
        _ => None,
    };
    let angular = match (a.angular, b.angular) {
        (Some((x0, x1)), Some((y0, y1))) if (x1.max(y1) - x0.min(y0)) < T::TAU() => Some((x0.min(y0), x1.max(y1))),
        _ => None,
    };
    Support {
        lo,
        hi,
        lo_singular: (a.lo_singular && lo == a.lo) || (b.lo_singular && lo == b.lo),
        envelope,
        angular,
        wavenumber: a.wavenumber.max(b.wavenumber),
    }
}
