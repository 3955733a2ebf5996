//! Principal powers and Laplace-type integrals ∫₀^∞ e^{itη} t^λ e^{−at} dt.

use crate::error::{domain, Error, Result};
use crate::numerics::gamma::ln_gamma;
use crate::numerics::quadrature::{singular_panels, Estimate, QuadratureSpec};
use crate::scalar::{ci, creal, cx, lit, Cx, Real};

/// Base η + ia with a > 0; its argument lies in (0, π).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PrincipalPower<T> {
    pub eta: T,
    pub a: T,
}

impl<T: Real> PrincipalPower<T> {
    pub fn new(eta: T, a: T) -> Result<Self> {
        if !(a > T::zero()) {
            return domain("principal power needs a > 0");
        }
        Ok(Self { eta, a })
    }

    /// arg(η + ia) ∈ (0, π).
    #[inline]
    pub fn arg(&self) -> T {
        self.a.atan2(self.eta)
    }

    #[inline]
    pub fn ln(&self) -> Cx<T> {
        cx(self.eta.hypot(self.a).ln(), self.arg())
    }

    #[inline]
    pub fn pow(&self, w: Cx<T>) -> Cx<T> {
        (w * self.ln()).exp()
    }
}

/// (η + ia)^w on the principal branch.
pub fn principal_power<T: Real>(eta: T, a: T, w: Cx<T>) -> Result<Cx<T>> {
    Ok(PrincipalPower::new(eta, a)?.pow(w))
}

/// e^{iπ(λ+1)/2} Γ(λ+1) / (η+ia)^{λ+1}.
pub fn laplace_power_integral<T: Real>(lambda: Cx<T>, a: T, eta: T) -> Result<Cx<T>> {
    if !(lambda.re > -T::one()) {
        return domain("laplace integral needs Re λ > −1");
    }
    let base = PrincipalPower::new(eta, a)?;
    let l1 = lambda + creal(T::one());
    let ln = ln_gamma(l1)? + ci::<T>() * T::FRAC_PI_2() * l1 - l1 * base.ln();
    Ok(ln.exp())
}

/// Truncation point T of ∫₀^∞ t^p e^{−at} dt with tail below `tol` of the envelope maximum.
pub(crate) fn laplace_truncation<T: Real>(p: T, a: T, tol: T) -> T {
    let scale = T::one() / a;
    let ln_tol = tol.ln();
    // solve p ln(t/t*) − a(t − t*) = ln tol with t* = max(p, 0)/a
    let tstar = p.max(T::zero()) * scale;
    let mut t = tstar + (-ln_tol) * scale + scale;
    for _ in 0..50 {
        let g = if tstar > T::zero() { p * (t / tstar).ln() } else { T::zero() } - a * (t - tstar) - ln_tol;
        let dg = if tstar > T::zero() { p / t } else { T::zero() } - a;
        let next = t - g / dg;
        if (next - t).abs() < lit::<T>(1e-12) * t {
            t = next;
            break;
        }
        t = next.max(tstar + scale);
    }
    t
}

/// Upper bound of |∫_T^∞ t^p e^{−at} dt| for a T beyond the envelope maximum.
pub(crate) fn laplace_tail_bound<T: Real>(p: T, a: T, t: T) -> T {
    let rate = a - p.max(T::zero()) / t;
    if rate <= T::zero() {
        return T::infinity();
    }
    (p * t.ln() - a * t).exp() / rate
}

/// Brute-force ∫₀^∞ e^{itη} t^λ e^{−at} dt; t^λ is evaluated as e^{λ ln t} on tanh-sinh nodes.
pub fn laplace_oracle<T: Real>(lambda: Cx<T>, a: T, eta: T, spec: &QuadratureSpec<T>) -> Result<Estimate<Cx<T>, T>> {
    if !(lambda.re > -T::one()) {
        return domain("laplace integral needs Re λ > −1");
    }
    if !(a > T::zero()) {
        return domain("laplace integral needs a > 0");
    }
    let tol = spec.abs_tol / lit(10.0);
    let upper = laplace_truncation(lambda.re, a, tol.min(spec.tail_tol));
    let k = cx(-a, eta);
    let f = |t: T| -> Cx<T> {
        if t <= T::zero() {
            return Cx::new(T::zero(), T::zero());
        }
        (lambda * t.ln() + k * t).exp()
    };
    let wavelength = if eta != T::zero() { T::TAU() / eta.abs() } else { upper };
    let panel = wavelength.min(lit::<T>(2.0) / a).min(upper);
    let mut est = singular_panels(f, upper, panel, spec);
    est.error += laplace_tail_bound(lambda.re, a, upper);
    if est.error <= spec.abs_tol.max(spec.rel_tol * est.value.norm()) {
        est.converged = true;
    }
    est.into_result("laplace oracle")
}

/// ∫₀^∞ t^{ε+iξ−σ} e^{(iη−a)t} dt by quadrature, σ ∈ {0, 1}.
pub fn oscillatory_log_integral<T: Real>(
    eps: T,
    xi: T,
    a: T,
    eta: T,
    sigma: u8,
    spec: &QuadratureSpec<T>,
) -> Result<Estimate<Cx<T>, T>> {
    if !(eps > T::zero()) {
        return domain("oscillatory log integral needs ε > 0");
    }
    if sigma > 1 {
        return Err(Error::Domain("σ must be 0 or 1".into()));
    }
    let lambda = cx(eps - T::from_usize_lossy(sigma as usize), xi);
    laplace_oracle(lambda, a, eta, spec)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_exponent_is_identity() {
        let z = principal_power(-0.7_f64, 1.3, cx(1.0, 0.0)).unwrap();
        assert!((z - cx(-0.7, 1.3)).norm() < 1e-15);
    }

    #[test]
    fn elementary_laplace_values() {
        let v = laplace_power_integral(cx(0.0_f64, 0.0), 1.0, 0.0).unwrap();
        assert!((v - cx(1.0, 0.0)).norm() < 1e-14);
        let v = laplace_power_integral(cx(1.0_f64, 0.0), 1.0, 0.0).unwrap();
        assert!((v - cx(1.0, 0.0)).norm() < 1e-14);
        assert!(laplace_power_integral(cx(-1.0_f64, 0.0), 1.0, 0.0).is_err());
    }
}
