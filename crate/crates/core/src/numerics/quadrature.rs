//! Tanh-sinh and adaptive Gauss–Kronrod engines over real or complex integrands.

use std::ops::{Add, Mul, Sub};

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::scalar::{lit, Cx, Real};

/// Values a quadrature rule can accumulate.
pub trait QuadValue<T: Real>:
    Copy + Add<Output = Self> + Sub<Output = Self> + Mul<T, Output = Self> + Zero + Send + Sync
{
    fn magnitude(&self) -> T;
}

impl<T: Real> QuadValue<T> for T {
    #[inline]
    fn magnitude(&self) -> T {
        self.abs()
    }
}

impl<T: Real> QuadValue<T> for Cx<T> {
    #[inline]
    fn magnitude(&self) -> T {
        self.norm()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scheme {
    TanhSinh,
    AdaptiveGk,
}

/// Tolerances and limits shared by the quadrature engines.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec<T> {
    pub scheme: Scheme,
    pub abs_tol: T,
    pub rel_tol: T,
    pub max_levels: usize,
    pub max_subdivisions: usize,
    /// Semi-infinite ranges are cut where the decaying envelope drops below `tail_tol`.
    pub tail_tol: T,
}

impl<T: Real> QuadratureSpec<T> {
    /// Defaults for smooth integrands.
    pub fn smooth() -> Self {
        Self {
            scheme: Scheme::AdaptiveGk,
            abs_tol: lit(1e-14),
            rel_tol: lit(1e-10),
            max_levels: 12,
            max_subdivisions: 2000,
            tail_tol: lit(1e-16),
        }
    }

    /// Defaults for endpoint-singular oscillatory integrands.
    pub fn oscillatory() -> Self {
        Self {
            scheme: Scheme::TanhSinh,
            abs_tol: lit(1e-15),
            rel_tol: lit(1e-8),
            max_levels: 12,
            max_subdivisions: 2000,
            tail_tol: lit(1e-16),
        }
    }

    pub fn with_rel_tol(mut self, rel: T) -> Self {
        self.rel_tol = rel;
        self
    }

    pub fn with_abs_tol(mut self, abs: T) -> Self {
        self.abs_tol = abs;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.abs_tol > T::zero() && self.rel_tol > T::zero() && self.tail_tol > T::zero()) {
            return Err(Error::Precondition("quadrature tolerances must be positive".into()));
        }
        if self.max_levels == 0 || self.max_subdivisions == 0 {
            return Err(Error::Precondition("quadrature limits must be nonzero".into()));
        }
        Ok(())
    }

    #[inline]
    fn target(&self, value: T) -> T {
        self.abs_tol.max(self.rel_tol * value)
    }
}

/// Result of a quadrature together with its error estimate.
#[derive(Debug, Clone, Copy)]
pub struct Estimate<V, T> {
    pub value: V,
    pub error: T,
    pub evaluations: usize,
    pub converged: bool,
}

impl<V: QuadValue<T>, T: Real> Estimate<V, T> {
    /// Turns an unconverged estimate into a numeric error.
    pub fn into_result(self, context: &str) -> Result<Self> {
        if self.converged {
            Ok(self)
        } else {
            Err(Error::NotConverged {
                context: context.to_string(),
                estimate: self.value.magnitude().f64(),
                error: self.error.f64(),
            })
        }
    }

    pub fn combine(self, other: Self) -> Self {
        Self {
            value: self.value + other.value,
            error: self.error + other.error,
            evaluations: self.evaluations + other.evaluations,
            converged: self.converged && other.converged,
        }
    }
}

/// Tanh-sinh nodes on [a, b] at refinement `level` (step 2^-level), from every level up.
///
/// Node positions are formed as `a + δ` or `b − δ` with δ computed directly, so a
/// singularity placed at `a = 0` sees its true distance down to the underflow threshold.
fn tanh_sinh_level<T, V, F>(f: &mut F, a: T, b: T, level: usize, first: bool, evals: &mut usize) -> V
where
    T: Real,
    V: QuadValue<T>,
    F: FnMut(T) -> V,
{
    let half = (b - a) * lit(0.5);
    let h = T::one() / T::from_usize_lossy(1usize << level);
    let pi2 = T::FRAC_PI_2();
    let tiny = T::min_positive_value() * lit(1e4);
    let mut sum = V::zero();
    if first {
        let w0 = half * pi2;
        sum = sum + f(a + half) * w0;
        *evals += 1;
    }
    let step = if first { 1 } else { 2 };
    let mut k: usize = 1;
    loop {
        let t = h * T::from_usize_lossy(k);
        let u = pi2 * t.sinh();
        let e2u = (u + u).exp();
        // 1 − tanh(u) = 2/(e^{2u}+1)
        let delta = half * lit::<T>(2.0) / (e2u + T::one());
        let cu = u.cosh();
        let w = half * pi2 * t.cosh() / (cu * cu);
        if !(delta > tiny) || !(w.is_finite()) || w < T::min_positive_value() {
            break;
        }
        let fl = f(a + delta);
        let fr = f(b - delta);
        *evals += 2;
        sum = sum + (fl + fr) * w;
        k += step;
        if k > 1 << (level + 8) {
            break;
        }
    }
    sum * h
}

/// Tanh-sinh quadrature of `f` over the finite interval [a, b].
pub fn tanh_sinh<T, V, F>(mut f: F, a: T, b: T, spec: &QuadratureSpec<T>) -> Estimate<V, T>
where
    T: Real,
    V: QuadValue<T>,
    F: FnMut(T) -> V,
{
    let mut evals = 0;
    // Level 0 uses unit step; each level halves the step and adds the odd nodes.
    let mut s = tanh_sinh_level(&mut f, a, b, 0, true, &mut evals);
    let mut err = T::infinity();
    for level in 1..=spec.max_levels {
        let add = tanh_sinh_level(&mut f, a, b, level, false, &mut evals);
        let next = s * lit(0.5) + add;
        err = (next - s).magnitude();
        s = next;
        if level >= 3 && err <= spec.target(s.magnitude()) {
            return Estimate { value: s, error: err, evaluations: evals, converged: true };
        }
    }
    Estimate { value: s, error: err, evaluations: evals, converged: false }
}

/// Tanh-sinh estimates at levels `0..=max_level`, for convergence studies.
pub fn tanh_sinh_levels<T, V, F>(mut f: F, a: T, b: T, max_level: usize) -> Vec<V>
where
    T: Real,
    V: QuadValue<T>,
    F: FnMut(T) -> V,
{
    let mut evals = 0;
    let mut s = tanh_sinh_level(&mut f, a, b, 0, true, &mut evals);
    let mut out = vec![s];
    for level in 1..=max_level {
        let add = tanh_sinh_level(&mut f, a, b, level, false, &mut evals);
        s = s * lit(0.5) + add;
        out.push(s);
    }
    out
}

const GK_XK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
];
const GK_WK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];
const GK_WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

/// Nodes of the G7/K15 pair on [a, b] as (x, Kronrod weight, Gauss weight); the Gauss
/// weight is zero on Kronrod-only nodes.
pub fn gk15_rule<T: Real>(a: T, b: T) -> [(T, T, T); 15] {
    let c = (a + b) * lit(0.5);
    let h = (b - a) * lit(0.5);
    let mut out = [(c, h * lit(GK_WK[7]), h * lit(GK_WG[3])); 15];
    for j in 0..7 {
        let dx = h * lit(GK_XK[j]);
        let wg = if j % 2 == 1 { h * lit(GK_WG[j / 2]) } else { T::zero() };
        let wk = h * lit(GK_WK[j]);
        out[2 * j] = (c - dx, wk, wg);
        out[2 * j + 1] = (c + dx, wk, wg);
    }
    out
}

/// One G7/K15 panel on [a, b]: Kronrod value and |K − G|.
fn gk15<T, V, F>(f: &mut F, a: T, b: T) -> (V, T)
where
    T: Real,
    V: QuadValue<T>,
    F: FnMut(T) -> V,
{
    let c = (a + b) * lit(0.5);
    let h = (b - a) * lit(0.5);
    let fc = f(c);
    let mut k = fc * lit(GK_WK[7]);
    let mut g = fc * lit(GK_WG[3]);
    for j in 0..7 {
        let dx = h * lit(GK_XK[j]);
        let s = f(c - dx) + f(c + dx);
        k = k + s * lit(GK_WK[j]);
        if j % 2 == 1 {
            g = g + s * lit(GK_WG[j / 2]);
        }
    }
    let k = k * h;
    let g = g * h;
    (k, (k - g).magnitude())
}

/// Adaptive Gauss–Kronrod on a finite interval, bisecting the worst panel.
pub fn gauss_kronrod<T, V, F>(mut f: F, a: T, b: T, spec: &QuadratureSpec<T>) -> Estimate<V, T>
where
    T: Real,
    V: QuadValue<T>,
    F: FnMut(T) -> V,
{
    let (v0, e0) = gk15(&mut f, a, b);
    let mut panels = vec![(a, b, v0, e0)];
    let mut evals = 15;
    loop {
        let total = panels.iter().fold(V::zero(), |s, p| s + p.2);
        let err = panels.iter().fold(T::zero(), |s, p| s + p.3);
        if err <= spec.target(total.magnitude()) {
            return Estimate { value: total, error: err, evaluations: evals, converged: true };
        }
        if panels.len() >= spec.max_subdivisions {
            return Estimate { value: total, error: err, evaluations: evals, converged: false };
        }
        let (worst, _) = panels
            .iter()
            .enumerate()
            .fold((0, T::neg_infinity()), |(bi, be), (i, p)| if p.3 > be { (i, p.3) } else { (bi, be) });
        let (pa, pb, _, _) = panels.swap_remove(worst);
        let mid = (pa + pb) * lit(0.5);
        if !(mid > pa && mid < pb) {
            let total = panels.iter().fold(V::zero(), |s, p| s + p.2);
            return Estimate { value: total, error: err, evaluations: evals, converged: false };
        }
        let (vl, el) = gk15(&mut f, pa, mid);
        let (vr, er) = gk15(&mut f, mid, pb);
        evals += 30;
        panels.push((pa, mid, vl, el));
        panels.push((mid, pb, vr, er));
    }
}

/// Integration range for [`adaptive_integrate`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Interval<T> {
    Finite(T, T),
    /// [a, ∞) through x = a + t/(1 − t).
    UpperInfinite(T),
    /// (−∞, b] through x = b − t/(1 − t).
    LowerInfinite(T),
    /// (−∞, ∞) through x = t/(1 − t²).
    Whole,
}

/// Adaptive integration with the variable changes of [`Interval`].
pub fn adaptive_integrate<T, V, F>(mut f: F, interval: Interval<T>, spec: &QuadratureSpec<T>) -> Result<Estimate<V, T>>
where
    T: Real,
    V: QuadValue<T>,
    F: FnMut(T) -> V,
{
    spec.validate()?;
    let one = T::one();
    let est = match spec.scheme {
        Scheme::AdaptiveGk => match interval {
            Interval::Finite(a, b) => gauss_kronrod(f, a, b, spec),
            Interval::UpperInfinite(a) => gauss_kronrod(
                |t: T| {
                    let d = one - t;
                    f(a + t / d) * (one / (d * d))
                },
                T::zero(),
                one,
                spec,
            ),
            Interval::LowerInfinite(b) => gauss_kronrod(
                |t: T| {
                    let d = one - t;
                    f(b - t / d) * (one / (d * d))
                },
                T::zero(),
                one,
                spec,
            ),
            Interval::Whole => gauss_kronrod(
                |t: T| {
                    let d = one - t * t;
                    f(t / d) * ((one + t * t) / (d * d))
                },
                -one,
                one,
                spec,
            ),
        },
        Scheme::TanhSinh => match interval {
            Interval::Finite(a, b) => tanh_sinh(f, a, b, spec),
            Interval::UpperInfinite(a) => tanh_sinh(
                |t: T| {
                    let d = one - t;
                    let w = one / (d * d);
                    if w.is_finite() { f(a + t / d) * w } else { V::zero() }
                },
                T::zero(),
                one,
                spec,
            ),
            Interval::LowerInfinite(b) => tanh_sinh(
                |t: T| {
                    let d = one - t;
                    let w = one / (d * d);
                    if w.is_finite() { f(b - t / d) * w } else { V::zero() }
                },
                T::zero(),
                one,
                spec,
            ),
            Interval::Whole => tanh_sinh(
                |t: T| {
                    let d = one - t * t;
                    let w = (one + t * t) / (d * d);
                    if w.is_finite() && d > T::zero() { f(t / d) * w } else { V::zero() }
                },
                -one,
                one,
                spec,
            ),
        },
    };
    est.into_result("adaptive_integrate")
}

/// ∫₀^T f with an integrable singularity at 0 and oscillation of wavelength ~`panel`.
///
/// The first panel uses tanh-sinh; the rest use adaptive Gauss–Kronrod.
pub fn singular_panels<T, V, F>(mut f: F, upper: T, panel: T, spec: &QuadratureSpec<T>) -> Estimate<V, T>
where
    T: Real,
    V: QuadValue<T>,
    F: FnMut(T) -> V,
{
    let panel = panel.min(upper);
    let n = ((upper / panel).ceil().to_usize().unwrap_or(1)).max(1);
    let width = upper / T::from_usize_lossy(n);
    // Per-panel tolerances are tightened so that the sum still meets the target.
    let sub = QuadratureSpec { rel_tol: spec.rel_tol / lit(4.0), abs_tol: spec.abs_tol / T::from_usize_lossy(n), ..*spec };
    let mut acc = tanh_sinh(&mut f, T::zero(), width, &sub);
    for j in 1..n {
        let lo = width * T::from_usize_lossy(j);
        let hi = if j + 1 == n { upper } else { width * T::from_usize_lossy(j + 1) };
        acc = acc.combine(gauss_kronrod(&mut f, lo, hi, &sub));
    }
    acc
}
