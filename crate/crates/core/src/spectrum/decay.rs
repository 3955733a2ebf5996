//! Decay of the Hawking (η_ρ > 0) and non-Hawking (η_ρ < 0) parts with the log frequency ξ.

use rayon::prelude::*;
use statrs::distribution::{ContinuousCDF, StudentsT};

use crate::error::{precondition, Error, Result};
use crate::scalar::{lit, ordered_sum, Real};
use crate::spectrum::density::C3Kernel;

/// Least-squares line y ≈ intercept + slope·x.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearFit<T> {
    pub slope: T,
    pub intercept: T,
    /// Two-sided 95% Student-t interval of the slope.
    pub slope_ci: (T, T),
    pub slope_stderr: T,
    pub points: usize,
}

pub fn linear_fit<T: Real>(x: &[T], y: &[T]) -> Result<LinearFit<T>> {
    let n = x.len();
    if n != y.len() || n < 3 {
        return precondition("linear fit needs matching x and y with at least 3 points");
    }
    let nf = T::from_usize_lossy(n);
    let mx = ordered_sum(x.iter().copied()) / nf;
    let my = ordered_sum(y.iter().copied()) / nf;
    let sxx = ordered_sum(x.iter().map(|&v| (v - mx) * (v - mx)));
    if !(sxx > T::zero()) {
        return Err(Error::Numeric("degenerate fit: all x equal".into()));
    }
    let sxy = ordered_sum(x.iter().zip(y).map(|(&u, &v)| (u - mx) * (v - my)));
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let sse = ordered_sum(x.iter().zip(y).map(|(&u, &v)| (v - intercept - slope * u).powi(2)));
    let dof = n - 2;
    let stderr = (sse / T::from_usize_lossy(dof) / sxx).sqrt();
    let t = StudentsT::new(0.0, 1.0, dof as f64)
        .map_err(|e| Error::Numeric(format!("student t: {e}")))?
        .inverse_cdf(0.975);
    let half = stderr * lit(t);
    Ok(LinearFit { slope, intercept, slope_ci: (slope - half, slope + half), slope_stderr: stderr, points: n })
}

#[derive(Debug, Clone, PartialEq)]
pub struct DecayAnalysis<T> {
    pub eps: T,
    pub delta: T,
    pub xi: Vec<T>,
    /// ∫₀^∞ C₃ at each ξ.
    pub hawking: Vec<T>,
    /// ∫_{−∞}^0 C₃ at each ξ.
    pub non_hawking: Vec<T>,
    /// ln(hawking) against ξ.
    pub hawking_fit: LinearFit<T>,
    /// ln(non_hawking) against ln ξ.
    pub non_hawking_fit: LinearFit<T>,
    /// d ln(hawking)/dξ at `reference_xi`, from independent kernel evaluations.
    pub asymptotic_slope: T,
    pub reference_xi: T,
    /// 2 − δ(1 + 2ε).
    pub bound_exponent: T,
    /// max over the grid of hawking·e^{πξ}/(ξ² + ε²).
    pub exponential_bound_constant: T,
    /// max over the grid of non_hawking/ξ^{bound_exponent}.
    pub polynomial_bound_constant: T,
    /// hawking/non_hawking at the largest ξ.
    pub separation: T,
}

impl<T: Real> DecayAnalysis<T> {
    /// |fitted slope / asymptotic slope − 1|.
    pub fn slope_mismatch(&self) -> T {
        (self.hawking_fit.slope / self.asymptotic_slope - T::one()).abs()
    }

    /// The non-Hawking log-log slope lies below the polynomial bound exponent.
    pub fn polynomial_bound_holds(&self) -> bool {
        self.non_hawking_fit.slope_ci.1 <= self.bound_exponent
    }
}

fn split<T: Real>(xi: T, eps: T) -> Result<(T, T)> {
    let (p, q) = C3Kernel::new(xi, eps, T::one())?.split_integrals()?;
    Ok((p.value, q.value))
}

/// Decay fits of the two half-line integrals of C₃ over the log frequencies `xi` (κ = 1).
pub fn decay_analysis<T: Real>(eps: T, xi: &[T], delta: T) -> Result<DecayAnalysis<T>> {
    if xi.len() < 5 || xi.windows(2).any(|w| !(w[1] > w[0])) || !(xi[0] > T::zero()) {
        return precondition("decay analysis needs at least 5 increasing positive xi");
    }
    let parts: Vec<(T, T)> = xi.par_iter().map(|&x| split(x, eps)).collect::<Result<_>>()?;
    let hawking: Vec<T> = parts.iter().map(|p| p.0).collect();
    let non_hawking: Vec<T> = parts.iter().map(|p| p.1).collect();
    let ln_p: Vec<T> = hawking.iter().map(|v| v.ln()).collect();
    let ln_q: Vec<T> = non_hawking.iter().map(|v| v.ln()).collect();
    let ln_xi: Vec<T> = xi.iter().map(|v| v.ln()).collect();
    let hawking_fit = linear_fit(xi, &ln_p)?;
    let non_hawking_fit = linear_fit(&ln_xi, &ln_q)?;
    let reference_xi = lit::<T>(40.0);
    let h = lit::<T>(0.5);
    let lo = split(reference_xi - h, eps)?.0;
    let hi = split(reference_xi + h, eps)?.0;
    let asymptotic_slope = (hi.ln() - lo.ln()) / (h + h);
    let bound_exponent = lit::<T>(2.0) - delta * (T::one() + eps + eps);
    let exponential_bound_constant = xi
        .iter()
        .zip(&hawking)
        .map(|(&x, &p)| p * (T::PI() * x).exp() / (x * x + eps * eps))
        .fold(T::zero(), T::max);
    let polynomial_bound_constant =
        xi.iter().zip(&non_hawking).map(|(&x, &q)| q / x.powf(bound_exponent)).fold(T::zero(), T::max);
    let last = xi.len() - 1;
    Ok(DecayAnalysis {
        eps,
        delta,
        xi: xi.to_vec(),
        separation: hawking[last] / non_hawking[last],
        hawking,
        non_hawking,
        hawking_fit,
        non_hawking_fit,
        asymptotic_slope,
        reference_xi,
        bound_exponent,
        exponential_bound_constant,
        polynomial_bound_constant,
    })
}
