//! The scaled spectral density C₃ and its half-line integrals.

use crate::error::{precondition, Result};
use crate::flowfield::{FieldKind, VelocityField};
use crate::modes::{simple_xi0, SimplePacket};
use crate::numerics::{gauss_kronrod, ln_gamma1_sq, Estimate, QuadratureSpec};
use crate::scalar::{lit, Real};

/// C₃(u) for log frequency μ, regularization ε and radial weight κ:
///
/// ½ e^{−2πμ}|Γ₁(iμ+ε)|² |μ + iε|² (κu + √(u²+1))² / √(u²+1) · e^{2μ arg(u+i)} (u²+1)^{−ε−1}.
///
/// κ = 1 is the density of a packet on a circular horizon; κ = √(1+ρ₀′²/ρ₀²) weights a
/// point of a non-circular tilde base curve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct C3Kernel<T> {
    pub mu: T,
    pub eps: T,
    pub kappa: T,
    /// ln of the u-independent prefactor.
    ln_k: T,
}

/// Envelope level, relative to the peak, at which half-line integrals are truncated.
const TRUNCATION: f64 = 1e-12;

impl<T: Real> C3Kernel<T> {
    pub fn new(mu: T, eps: T, kappa: T) -> Result<Self> {
        if !(mu > T::zero()) || !(eps > T::zero()) || !(kappa >= T::one()) {
            return precondition("C3 needs mu > 0, eps > 0 and kappa >= 1");
        }
        let ln_k = lit::<T>(0.5).ln() - T::TAU() * mu + ln_gamma1_sq(mu, eps)? + (mu * mu + eps * eps).ln();
        Ok(Self { mu, eps, kappa, ln_k })
    }

    /// Prefactor ½ e^{−2πμ}|Γ₁|²|μ + iε|².
    pub fn prefactor(&self) -> T {
        self.ln_k.exp()
    }

    #[inline]
    pub fn eval(&self, u: T) -> T {
        let s = u.hypot(T::one());
        let arg = T::one().atan2(u);
        let bracket = if self.kappa == T::one() && u < T::zero() {
            // u + s = 1/(s − u) without cancellation
            T::one() / (s - u)
        } else {
            self.kappa * u + s
        };
        let ln = self.ln_k + lit::<T>(2.0) * self.mu * arg - s.ln() - (self.eps + T::one()) * lit::<T>(2.0) * s.ln();
        ln.exp() * bracket * bracket
    }

    /// Where the envelope (u²+1)^{−ε−1/2} falls to the truncation level.
    fn cutoff(&self) -> T {
        lit::<T>(TRUNCATION).powf(-T::one() / (self.eps + self.eps + T::one()))
    }

    /// ∫_from^∞ C₃ (sign = +1) or ∫_{−∞}^{−from} C₃ (sign = −1), from ≥ 0.
    pub fn half_line(&self, from: T, positive: bool) -> Result<Estimate<T, T>> {
        if !(from >= T::zero()) {
            return precondition("half-line integral needs from >= 0");
        }
        let sgn = if positive { T::one() } else { -T::one() };
        let f = |v: T| self.eval(sgn * v);
        let peak = self.eval(T::zero()).max(self.eval(sgn)).max(f(lit(0.25)));
        let spec = QuadratureSpec::smooth().with_rel_tol(lit(1e-12)).with_abs_tol(peak * lit(1e-16));
        let cut = self.cutoff();
        let mut acc = Estimate { value: T::zero(), error: T::zero(), evaluations: 0, converged: true };
        if from >= cut {
            let tail = self.tail(from, positive);
            return Ok(Estimate { value: tail.0, error: tail.1, ..acc });
        }
        if from < T::one() {
            acc = acc.combine(gauss_kronrod(f, from, T::one(), &spec));
        }
        // v = e^x on unit panels in x
        let x_end = cut.ln();
        let mut x = from.max(T::one()).ln();
        while x < x_end {
            let next = (x + T::one()).min(x_end);
            acc = acc.combine(gauss_kronrod(|x: T| f(x.exp()) * x.exp(), x, next, &spec));
            x = next;
        }
        let (tail, tail_err) = self.tail(cut.max(from), positive);
        acc.value += tail;
        acc.error += tail_err;
        acc.into_result("C3 half-line integral")
    }

    /// Two-term asymptotic tail beyond `v` and a bound on the neglected order.
    fn tail(&self, v: T, positive: bool) -> (T, T) {
        let (mu, eps, k) = (self.mu, self.eps, self.kappa);
        let two = lit::<T>(2.0);
        let p = eps + eps;
        // C₃(±v) ≈ c v^{−2ε−1}(1 ± 2μ/v) with c = K(κ+1)² or K e^{2πμ}(κ−1)²
        let c = if positive {
            self.prefactor() * (k + T::one()).powi(2)
        } else {
            (self.ln_k + T::TAU() * mu).exp() * (k - T::one()).powi(2)
        };
        let sgn = if positive { T::one() } else { -T::one() };
        let lead = c * v.powf(-p) / p;
        let next = sgn * c * two * mu * v.powf(-p - T::one()) / (p + T::one());
        // the neglected terms carry one more power of 1/v, and the κ = 1 left tail decays as v^{−2ε−5}
        let scale = (self.ln_k + if positive { T::zero() } else { T::TAU() * mu }).exp();
        let bound = (lead.abs() + next.abs()) * (T::one() + mu * mu) / v + scale * v.powf(-p - lit(4.0));
        (lead + next, bound)
    }

    /// (∫₀^∞ C₃, ∫_{−∞}^0 C₃).
    pub fn split_integrals(&self) -> Result<(Estimate<T, T>, Estimate<T, T>)> {
        Ok((self.half_line(T::zero(), true)?, self.half_line(T::zero(), false)?))
    }
}

/// C₃ at scaled frequency η_ρ for a simple packet.
pub fn spectral_density_c3<T: Real>(spec: &SimplePacket<T>, field: &VelocityField<T>, eta: T) -> Result<T> {
    Ok(C3Kernel::new(simple_mu(spec, field)?, spec.eps, T::one())?.eval(eta))
}

/// ξ₀|A| of a simple packet.
pub(crate) fn simple_mu<T: Real>(spec: &SimplePacket<T>, field: &VelocityField<T>) -> Result<T> {
    let xi0 = simple_xi0(spec, field)?;
    let FieldKind::Constant { a, .. } = *field.kind() else { unreachable!() };
    let mu = -xi0 * a;
    if !(mu > T::zero()) {
        return precondition("simple packet needs xi0|A| > 0");
    }
    Ok(mu)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn left_branch_matches_direct_form() {
        let k = C3Kernel::new(1.3_f64, 0.4, 1.0).unwrap();
        let u = -0.7_f64;
        let s = u.hypot(1.0);
        let direct = k.prefactor() * (u + s).powi(2) / s * (2.0 * 1.3 * 1.0_f64.atan2(u)).exp() * (u * u + 1.0).powf(-1.4);
        assert!((k.eval(u) - direct).abs() < 1e-14 * direct);
    }
}
