//! Negative-frequency coefficients C⁻(k) = −⟨f⁻_{−k}, C⟩.

use rayon::prelude::*;

use crate::error::{precondition, Result};
use crate::flowfield::{FieldKind, VelocityField};
use crate::modes::{kg_inner_product_with, minus_mode_initial_data, CauchyData, KgOptions, ModeIndex, SimplePacket};
use crate::numerics::laplace::laplace_truncation;
use crate::numerics::{fourier_coefficients, laplace_power_integral, mean_square, singular_panels, uniform_grid};
use crate::numerics::{Estimate, FourierSeries, QuadratureSpec};
use crate::scalar::{ci, cx, lit, Cx, Real};
use crate::spectrum::density::simple_mu;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CoefficientMethod {
    ClosedForm,
    Quadrature,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MinusCoefficient<T> {
    pub k: ModeIndex<T>,
    pub value: Cx<T>,
    /// Quadrature error estimate; zero for closed forms.
    pub error: T,
    pub method: CoefficientMethod,
}

/// C⁻(k) = −⟨f⁻_{−k}, C⟩ by direct KG quadrature.
pub fn minus_coefficient_quadrature<T: Real>(
    packet: &dyn CauchyData<T>,
    k: &ModeIndex<T>,
    field: &VelocityField<T>,
) -> Result<MinusCoefficient<T>> {
    minus_coefficient_quadrature_with(packet, k, field, &KgOptions::default())
}

pub fn minus_coefficient_quadrature_with<T: Real>(
    packet: &dyn CauchyData<T>,
    k: &ModeIndex<T>,
    field: &VelocityField<T>,
    opts: &KgOptions<T>,
) -> Result<MinusCoefficient<T>> {
    let f = minus_mode_initial_data(k.negated(), field, packet.chart());
    let e = kg_inner_product_with(&f, packet, field, opts)?;
    Ok(MinusCoefficient { k: *k, value: -e.value, error: e.error, method: CoefficientMethod::Quadrature })
}

/// The two leading terms (C₁⁻, C₂⁻) of a simple packet's coefficient, zero unless m′ = −m.
///
/// With w = ε + iμ, μ = ξ₀|A| and s = √(η²+a²):
/// C₁⁻ = e^{i|A|η} e^{iπw/2}Γ(w)(μ − iε) η / (√2 s^{1/2}(η+ia)^{w+1}),
/// C₂⁻ = −e^{i|A|η} e^{iπ(w+1)/2}Γ(w+1) s^{1/2} / (√2 (η+ia)^{w+1}).
/// The coefficient itself is −(C₁⁻ + C₂⁻) up to O(|η+ia|^{−1−ε}); see [`minus_coefficient_leading`].
pub fn minus_coefficient_closed<T: Real>(
    spec: &SimplePacket<T>,
    field: &VelocityField<T>,
    k: &ModeIndex<T>,
) -> Result<(Cx<T>, Cx<T>)> {
    let zero = Cx::new(T::zero(), T::zero());
    if k.m != -spec.m {
        return Ok((zero, zero));
    }
    if k.a != spec.a {
        return precondition("mode and packet must share the regularization a");
    }
    let mu = simple_mu(spec, field)?;
    let FieldKind::Constant { a: aa, .. } = *field.kind() else { unreachable!() };
    let abs_a = -aa;
    let (eta, a, eps) = (k.eta, k.a, spec.eps);
    let w = cx(eps, mu);
    let s = k.sqrt_term();
    let ph = abs_a * eta;
    let pre = cx(ph.cos(), ph.sin()) / T::SQRT_2();
    // e^{iπw/2}Γ(w)/(η+ia)^w and e^{iπ(w+1)/2}Γ(w+1)/(η+ia)^{w+1}
    let l0 = laplace_power_integral(w - Cx::new(T::one(), T::zero()), a, eta)?;
    let l1 = laplace_power_integral(w, a, eta)?;
    let c1 = pre * l0 * cx(mu, -eps) * (cx(eta, T::zero()) / cx(eta, a)) / s.sqrt();
    let c2 = -pre * l1 * s.sqrt();
    Ok((c1, c2))
}

/// Closed leading coefficient −(C₁⁻ + C₂⁻), the sign-consistent counterpart of the quadrature.
pub fn minus_coefficient_leading<T: Real>(
    spec: &SimplePacket<T>,
    field: &VelocityField<T>,
    k: &ModeIndex<T>,
) -> Result<MinusCoefficient<T>> {
    let (c1, c2) = minus_coefficient_closed(spec, field, k)?;
    Ok(MinusCoefficient { k: *k, value: -(c1 + c2), error: T::zero(), method: CoefficientMethod::ClosedForm })
}

/// Tolerances of [`minus_coefficients_batched`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BatchOptions<T> {
    pub m_max: usize,
    /// Uniform angular nodes; at least 4 m_max + 4.
    pub n_phi: usize,
    pub radial: QuadratureSpec<T>,
}

impl<T: Real> Default for BatchOptions<T> {
    fn default() -> Self {
        Self {
            m_max: 32,
            n_phi: 256,
            radial: QuadratureSpec::oscillatory().with_rel_tol(lit(1e-9)).with_abs_tol(lit(1e-300)),
        }
    }
}

/// C⁻(η, m′) for all |m′| ≤ m_max at one η.
#[derive(Debug, Clone)]
pub struct CoefficientBatch<T> {
    pub eta: T,
    pub a: T,
    /// C⁻(η, m′) = 2π γ_{m′} with γ the Fourier coefficients of J(φ).
    pub coefficients: FourierSeries<T>,
    /// Σ over every m′ of |C⁻|², i.e. (2π)² times the mean of |J|².
    pub all_modes: T,
    /// Summed radial error estimates times the trapezoid weight.
    pub error: T,
}

impl<T: Real> CoefficientBatch<T> {
    pub fn get(&self, m: i64) -> Cx<T> {
        self.coefficients.get(m) * T::TAU()
    }

    /// Σ_{|m′| ≤ m_max} |C⁻(η, m′)|².
    pub fn truncated_sum(&self) -> T {
        self.coefficients.parseval_sum() * T::TAU() * T::TAU()
    }
}

/// Every C⁻(η, m′) with |m′| ≤ m_max from one set of radial integrals.
///
/// C⁻(η, m′) = ∫ e^{im′φ} J(φ) dφ with J(φ) = −i∫ f⁺_{(η,0)} [DC + (is + A/(2ρ²)) C] ρ dr,
/// using Df⁺_k = (−is − A/(2ρ²)) f⁺_k; J is sampled on a uniform grid and transformed.
pub fn minus_coefficients_batched<T: Real>(
    packet: &dyn CauchyData<T>,
    field: &VelocityField<T>,
    eta: T,
    a: T,
    opts: &BatchOptions<T>,
) -> Result<CoefficientBatch<T>> {
    opts.radial.validate()?;
    if !(a > T::zero()) {
        return precondition("batched coefficients need a > 0");
    }
    let support = packet.support();
    let Some((p, q)) = support.envelope else {
        return precondition("batched coefficients need data with an exponential envelope");
    };
    let lo = support.lo.unwrap_or(T::zero());
    let len = laplace_truncation(p + T::one(), q, opts.radial.tail_tol);
    let grid = uniform_grid::<T>(opts.n_phi);
    let s = eta.hypot(a);
    let pre = T::one() / (T::TAU() * T::SQRT_2() * s.sqrt());
    let mut panel = lit::<T>(2.0) / q;
    if eta != T::zero() {
        panel = panel.min(T::TAU() / eta.abs());
    }
    let chart = packet.chart();
    let radial = |phi: T| -> Estimate<Cx<T>, T> {
        let (rho0, d0) = chart.base(phi);
        let slice = packet.slice_from(phi, lo);
        let probe = slice(T::one() / q);
        if probe.is_zero() {
            return Estimate { value: Cx::new(T::zero(), T::zero()), error: T::zero(), evaluations: 1, converged: true };
        }
        let f = |t: T| -> Cx<T> {
            let r = lo + t;
            let rho = rho0 + r;
            if !(rho > T::zero()) {
                return Cx::new(T::zero(), T::zero());
            }
            let j = slice(t);
            if j.is_zero() {
                return Cx::new(T::zero(), T::zero());
            }
            let (gr, gphi) = field.drift(rho, phi);
            let gr = gr - gphi * d0;
            let a_over_rho = gr + gphi * d0;
            let dc = j.dt + j.dr * gr + j.dphi * gphi;
            let ph = eta * r;
            let mode = cx(ph.cos(), ph.sin()) * (pre / rho.sqrt());
            let bracket = dc + j.value * cx(a_over_rho / (rho + rho), s);
            -ci::<T>() * mode * bracket * rho
        };
        singular_panels(f, len, panel, &opts.radial)
    };
    let vals: Vec<Estimate<Cx<T>, T>> = grid.par_iter().map(|&phi| radial(phi)).collect();
    let h = T::TAU() / T::from_usize_lossy(opts.n_phi);
    let error = vals.iter().fold(T::zero(), |acc, e| acc + e.error) * h;
    let samples: Vec<Cx<T>> = vals.iter().map(|e| e.value).collect();
    let coefficients = fourier_coefficients(&samples, opts.m_max)?;
    let all_modes = mean_square(&samples) * T::TAU() * T::TAU();
    Ok(CoefficientBatch { eta, a, coefficients, all_modes, error })
}
