//! Complex Gamma function and the bounded factor Γ₁.

use crate::error::{Error, Result};
use crate::numerics::quadrature::{gauss_kronrod, tanh_sinh, QuadratureSpec};
use crate::scalar::{ci, creal, cx, lit, Cx, Real};

/// g = 607/128; the partial-fraction coefficients pair with `x + g + 1/2`.
const LANCZOS_G_HALF: f64 = 5.2421875;
const LANCZOS: [f64; 15] = [
    0.999_999_999_999_997_091_82,
    57.156_235_665_862_923_517,
    -59.597_960_355_475_491_248,
    14.136_097_974_741_747_174,
    -0.491_913_816_097_620_199_78,
    0.339_946_499_848_118_886_99e-4,
    0.465_236_289_270_485_756_65e-4,
    -0.983_744_753_048_795_646_77e-4,
    0.158_088_703_224_912_488_84e-3,
    -0.210_264_441_724_104_883_19e-3,
    0.217_439_618_115_212_643_20e-3,
    -0.164_318_106_536_763_890_22e-3,
    0.844_182_239_838_527_432_93e-4,
    -0.261_908_384_015_814_086_70e-4,
    0.368_991_826_595_316_227_04e-5,
];

fn ln_gamma_right<T: Real>(z: Cx<T>) -> Cx<T> {
    let mut ser = creal(lit::<T>(LANCZOS[0]));
    for (j, c) in LANCZOS.iter().enumerate().skip(1) {
        ser += creal(lit::<T>(*c)) / (z + creal(T::from_usize_lossy(j)));
    }
    let tmp = z + creal(lit::<T>(LANCZOS_G_HALF));
    let sqrt_two_pi = (T::TAU()).sqrt();
    (z + creal(lit(0.5))) * tmp.ln() - tmp + (ser * sqrt_two_pi / z).ln()
}

fn check_pole<T: Real>(z: Cx<T>) -> Result<()> {
    if z.re <= T::zero() && z.im == T::zero() && z.re == z.re.round() {
        return Err(Error::Pole(format!("{}", z.re)));
    }
    Ok(())
}

/// ln Γ(z), continuous in the right half-plane and defined by reflection elsewhere.
pub fn ln_gamma<T: Real>(z: Cx<T>) -> Result<Cx<T>> {
    check_pole(z)?;
    if z.re >= lit(0.5) {
        return Ok(ln_gamma_right(z));
    }
    // Γ(z) = π / (sin(πz) Γ(1−z))
    let s = (z * T::PI()).sin();
    if s.norm() == T::zero() {
        return Err(Error::Pole(format!("{z}")));
    }
    let one = creal(T::one());
    Ok(creal(T::PI().ln()) - s.ln() - ln_gamma_right(one - z))
}

/// Γ(z) by the Lanczos approximation with reflection for Re z < 1/2.
pub fn complex_gamma<T: Real>(z: Cx<T>) -> Result<Cx<T>> {
    Ok(ln_gamma(z)?.exp())
}

/// Γ₁(w), w = ε + iξ, defined by Γ(w + 1) = w e^{−πξ/2} Γ₁(w).
pub fn gamma1<T: Real>(xi: T, eps: T) -> Result<Cx<T>> {
    let w = cx(eps, xi);
    if w.norm() == T::zero() {
        return Err(Error::Domain("gamma1 needs iξ + ε ≠ 0".into()));
    }
    let lg = ln_gamma(w + creal(T::one()))?;
    Ok((lg + creal(T::PI() * xi * lit(0.5))).exp() / w)
}

/// ln |Γ₁(w)|², finite even when Γ₁ itself is evaluated far from the origin.
pub fn ln_gamma1_sq<T: Real>(xi: T, eps: T) -> Result<T> {
    let w = cx(eps, xi);
    if w.norm() == T::zero() {
        return Err(Error::Domain("gamma1 needs iξ + ε ≠ 0".into()));
    }
    let lg = ln_gamma(w + creal(T::one()))?;
    Ok(lit::<T>(2.0) * lg.re + T::PI() * xi - lit::<T>(2.0) * w.norm().ln())
}

/// Γ₁ from its oscillatory integral representation
/// Γ₁(w) = i e^{i(ε−1)π/2} ∫₀^∞ y^{w−1} e^{−iy} dy (0 < ε < 1).
///
/// The range [0, 2πK] is integrated numerically; the remaining tail uses the
/// integration-by-parts expansion ∫_Y^∞ y^c e^{−iy} dy = −i e^{−iY} Σ (−i)^n (c)_n↓ Y^{c−n}.
pub fn gamma1_integral<T: Real>(xi: T, eps: T, spec: &QuadratureSpec<T>) -> Result<Cx<T>> {
    if !(eps > T::zero() && eps < T::one()) {
        return Err(Error::Domain("integral representation needs 0 < ε < 1".into()));
    }
    let c = cx(eps - T::one(), xi);
    let periods = 16usize;
    let per = T::TAU();
    let integrand = |y: T| -> Cx<T> {
        if y <= T::zero() {
            return Cx::new(T::zero(), T::zero());
        }
        (c * y.ln() - ci::<T>() * y).exp()
    };
    let sub = spec.with_rel_tol(spec.rel_tol / lit(10.0));
    let mut est = tanh_sinh(integrand, T::zero(), per, &sub);
    for k in 1..periods {
        let lo = per * T::from_usize_lossy(k);
        est = est.combine(gauss_kronrod(integrand, lo, lo + per, &sub));
    }
    let est = est.into_result("gamma1 integral body")?;
    let y = per * T::from_usize_lossy(periods);
    let mut term = y.powc_real(c);
    let mut tail = Cx::new(T::zero(), T::zero());
    let mut prev = T::infinity();
    let mut converged = false;
    for n in 0..60 {
        let mag = term.norm();
        if mag > prev {
            break;
        }
        tail += term;
        prev = mag;
        if mag < T::epsilon() * lit(1e-2) * est.value.norm().max(T::one()) {
            converged = true;
            break;
        }
        // next term: (−i)(c − n)/Y times the current one
        term = term * (c - creal(T::from_usize_lossy(n))) * (-ci::<T>()) / y;
    }
    if !converged {
        return Err(Error::NotConverged {
            context: "gamma1 tail expansion".into(),
            estimate: tail.norm().f64(),
            error: prev.f64(),
        });
    }
    let tail = -ci::<T>() * (-ci::<T>() * y).exp() * tail;
    let phase = (ci::<T>() * (eps - T::one()) * T::FRAC_PI_2()).exp();
    Ok(ci::<T>() * phase * (est.value + tail))
}

trait PowcReal<T: Real> {
    fn powc_real(self, c: Cx<T>) -> Cx<T>;
}

impl<T: Real> PowcReal<T> for T {
    fn powc_real(self, c: Cx<T>) -> Cx<T> {
        (c * self.ln()).exp()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gamma_small_values() {
        let g1 = complex_gamma(cx(1.0_f64, 0.0)).unwrap();
        assert!((g1.re - 1.0).abs() < 1e-14 && g1.im.abs() < 1e-14);
        let gh = complex_gamma(cx(0.5_f64, 0.0)).unwrap();
        assert!((gh.re - std::f64::consts::PI.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn poles_rejected() {
        for n in [0.0_f64, -1.0, -7.0] {
            assert!(matches!(complex_gamma(cx(n, 0.0)), Err(Error::Pole(_))));
        }
    }

    #[test]
    fn gamma1_reduces_at_zero_xi() {
        let g = gamma1(0.0_f64, 0.3).unwrap();
        let r = complex_gamma(cx(0.3_f64, 0.0)).unwrap();
        assert!((g - r).norm() < 1e-13 * r.norm());
    }
}
