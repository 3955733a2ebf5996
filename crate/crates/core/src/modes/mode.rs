//! Regularized plane-wave modes f_k^± and their smeared superpositions.

use crate::error::{precondition, Result};
use crate::flowfield::{FieldKind, VelocityField};
use crate::modes::data::{CauchyData, Chart, Jet, Support};
use crate::scalar::{ci, cx, lit, Cx, Real};

/// Mode label k = (η_ρ, m) with regularization a > 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeIndex<T> {
    pub eta: T,
    pub m: i64,
    pub a: T,
}

impl<T: Real> ModeIndex<T> {
    pub fn new(eta: T, m: i64, a: T) -> Result<Self> {
        if !(a > T::zero()) || !eta.is_finite() {
            return precondition("mode index needs finite eta and a > 0");
        }
        Ok(Self { eta, m, a })
    }

    /// −k = (−η_ρ, −m).
    pub fn negated(&self) -> Self {
        Self { eta: -self.eta, m: -self.m, a: self.a }
    }

    /// s = √(η_ρ² + a²).
    #[inline]
    pub fn sqrt_term(&self) -> T {
        self.eta.hypot(self.a)
    }
}

/// Frequency sign of a mode: `Plus` has ∂₀f = iλ₀⁻f, `Minus` is conj(f⁺_{−k}).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Branch {
    Plus,
    Minus,
}

/// g^{0r} = A/ρ − (B/ρ²)ρ₀′ in the chart.
#[inline]
pub(crate) fn radial_drift<T: Real>(field: &VelocityField<T>, rho: T, phi: T, drho0: T) -> (T, T) {
    let (gr, gphi) = field.drift(rho, phi);
    (gr - gphi * drho0, gphi)
}

/// λ₀⁻(k) = −g^{0r}η_ρ − (B/ρ²)m − √(η_ρ² + a²) at chart point (r, φ).
pub fn lambda0_minus<T: Real>(k: &ModeIndex<T>, field: &VelocityField<T>, chart: &Chart<T>, r: T, phi: T) -> Result<T> {
    let (rho0, d0) = chart.base(phi);
    let rho = rho0 + r;
    if !(rho > T::zero()) {
        return precondition("mode evaluated at rho <= 0");
    }
    let (gr, gphi) = radial_drift(field, rho, phi, d0);
    Ok(-gr * k.eta - gphi * T::from_i64_lossy(k.m) - k.sqrt_term())
}

/// f_k^± as Cauchy data.
#[derive(Debug, Clone)]
pub struct ModeData<T: Real> {
    pub k: ModeIndex<T>,
    pub branch: Branch,
    field: VelocityField<T>,
    chart: Chart<T>,
}

/// f_k⁺ = γ_k e^{i(η_ρ r + mφ)}, γ_k = 1/(2π√2 √ρ (η_ρ² + a²)^{1/4}).
pub fn mode_initial_data<T: Real>(k: ModeIndex<T>, field: &VelocityField<T>, chart: &Chart<T>) -> ModeData<T> {
    ModeData { k, branch: Branch::Plus, field: field.clone(), chart: chart.clone() }
}

/// f_k⁻ = conj(f⁺_{−k}), built directly.
pub fn minus_mode_initial_data<T: Real>(k: ModeIndex<T>, field: &VelocityField<T>, chart: &Chart<T>) -> ModeData<T> {
    ModeData { k, branch: Branch::Minus, field: field.clone(), chart: chart.clone() }
}

impl<T: Real> ModeData<T> {
    /// Jet of the unit-weight mode at (r, φ), given e^{imφ} and the chart base.
    #[inline]
    fn jet_with(&self, r: T, phi: T, rot: Cx<T>, rho0: T, d0: T) -> Jet<T> {
        let rho = rho0 + r;
        if !(rho > T::zero()) {
            return Jet::zero();
        }
        let k = &self.k;
        let s = k.sqrt_term();
        let gamma = T::one() / (T::TAU() * T::SQRT_2() * (rho * s).sqrt());
        let ph = k.eta * r;
        let value = cx(ph.cos(), ph.sin()) * rot * gamma;
        let (gr, gphi) = radial_drift(&self.field, rho, phi, d0);
        let m = T::from_i64_lossy(k.m);
        let sgn = if self.branch == Branch::Plus { -T::one() } else { T::one() };
        let lambda = -gr * k.eta - gphi * m + sgn * s;
        let half = lit::<T>(0.5) / rho;
        Jet {
            value,
            dt: value * cx(T::zero(), lambda),
            dr: value * cx(-half, k.eta),
            dphi: value * cx(-half * d0, m),
        }
    }
}

impl<T: Real> CauchyData<T> for ModeData<T> {
    fn chart(&self) -> &Chart<T> {
        &self.chart
    }

    fn support(&self) -> Support<T> {
        let lo = match self.chart {
            Chart::Polar => Some(T::zero()),
            Chart::Tilde(_) => None,
        };
        Support { lo, ..Support::everywhere(self.k.eta.abs()) }
    }

    fn angular_mode(&self) -> Option<i64> {
        match self.field.kind() {
            FieldKind::Constant { .. } if self.chart.is_rotation_invariant() => Some(self.k.m),
            _ => None,
        }
    }

    fn jet(&self, r: T, phi: T) -> Jet<T> {
        let (rho0, d0) = self.chart.base(phi);
        let mp = T::from_i64_lossy(self.k.m) * phi;
        self.jet_with(r, phi, cx(mp.cos(), mp.sin()), rho0, d0)
    }

    fn slice<'a>(&'a self, phi: T) -> Box<dyn Fn(T) -> Jet<T> + Send + Sync + 'a> {
        let (rho0, d0) = self.chart.base(phi);
        let mp = T::from_i64_lossy(self.k.m) * phi;
        let rot = cx(mp.cos(), mp.sin());
        Box::new(move |r| self.jet_with(r, phi, rot, rho0, d0))
    }
}

/// u = Σ_q w_q Δη f^±_{(η_q, m)}: a Riemann sum of ∫ w(η) f^±_{(η,m)} dη on a uniform η-grid.
#[derive(Debug, Clone)]
pub struct SmearedModes<T: Real> {
    modes: Vec<(Cx<T>, ModeData<T>)>,
    /// Radius beyond which the superposition is cut off.
    pub cutoff: T,
    chart: Chart<T>,
    m: i64,
    wavenumber: T,
}

impl<T: Real> SmearedModes<T> {
    /// Weights w(η) sampled at η_q = η_lo + qΔη, q = 0..n, with radial cutoff r ≤ `cutoff`.
    #[allow(clippy::too_many_arguments)]
    pub fn new<W: Fn(T) -> Cx<T>>(
        weight: W,
        eta_lo: T,
        d_eta: T,
        n: usize,
        m: i64,
        a: T,
        branch: Branch,
        field: &VelocityField<T>,
        chart: &Chart<T>,
        cutoff: T,
    ) -> Result<Self> {
        if !(d_eta > T::zero()) || n == 0 || !(cutoff > T::zero()) {
            return precondition("smeared modes need d_eta > 0, n > 0 and a positive cutoff");
        }
        let mut modes = Vec::with_capacity(n);
        let mut wavenumber = T::zero();
        for q in 0..n {
            let eta = eta_lo + d_eta * T::from_usize_lossy(q);
            let k = ModeIndex::new(eta, m, a)?;
            wavenumber = wavenumber.max(eta.abs());
            modes.push((weight(eta) * d_eta, ModeData { k, branch, field: field.clone(), chart: chart.clone() }));
        }
        Ok(Self { modes, cutoff, chart: chart.clone(), m, wavenumber })
    }

    /// (weight·Δη, mode) pairs.
    pub fn terms(&self) -> &[(Cx<T>, ModeData<T>)] {
        &self.modes
    }
}

impl<T: Real> CauchyData<T> for SmearedModes<T> {
    fn chart(&self) -> &Chart<T> {
        &self.chart
    }

    fn support(&self) -> Support<T> {
        let lo = match self.chart {
            Chart::Polar => Some(T::zero()),
            Chart::Tilde(_) => None,
        };
        Support { lo, hi: Some(self.cutoff), ..Support::everywhere(self.wavenumber) }
    }

    fn angular_mode(&self) -> Option<i64> {
        self.modes[0].1.angular_mode().map(|_| self.m)
    }

    fn jet(&self, r: T, phi: T) -> Jet<T> {
        self.slice(phi)(r)
    }

    fn slice<'a>(&'a self, phi: T) -> Box<dyn Fn(T) -> Jet<T> + Send + Sync + 'a> {
        let (rho0, d0) = self.chart.base(phi);
        let mp = T::from_i64_lossy(self.m) * phi;
        let rot = cx(mp.cos(), mp.sin());
        Box::new(move |r| {
            if r > self.cutoff {
                return Jet::zero();
            }
            self.modes.iter().fold(Jet::zero(), |acc, (w, f)| acc + f.jet_with(r, phi, rot, rho0, d0) * *w)
        })
    }
}

/// ⟨f_k⁺, f_{k′}⁺⟩ of radially truncated modes on 0 < ρ < R in the polar chart of a constant field,
/// for m = m′, in closed form: (s + s′)/(4π√(ss′)) ∫₀^R e^{i(η′−η)ρ} dρ.
pub fn truncated_mode_overlap<T: Real>(k: &ModeIndex<T>, kp: &ModeIndex<T>, cutoff: T) -> Cx<T> {
    let (s, sp) = (k.sqrt_term(), kp.sqrt_term());
    let pref = (s + sp) / (lit::<T>(4.0) * T::PI() * (s * sp).sqrt());
    let d = kp.eta - k.eta;
    let radial = if d.abs() * cutoff < lit(1e-8) {
        cx(cutoff, d * cutoff * cutoff * lit(0.5))
    } else {
        // e^{idR} − 1 with the real part as −2 sin²(dR/2)
        let h = (d * cutoff * lit(0.5)).sin();
        cx(-(h * h) * lit(2.0), (d * cutoff).sin()) / (ci::<T>() * d)
    };
    radial * pref
}
