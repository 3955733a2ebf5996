//! Vortex velocity fields v = (A/ρ) x̂ + (B/ρ) θ̂ and the acoustic Hamiltonian symbol.

use crate::error::{domain, precondition, Result};
use crate::numerics::roots::scan_roots;
use crate::scalar::{lit, wrap_two_pi, Real};

/// B(φ) = c₀ + Σₙ (aₙ cos nφ + bₙ sin nφ).
#[derive(Debug, Clone, PartialEq)]
pub struct TrigPoly<T> {
    pub c0: T,
    pub cos: Vec<T>,
    pub sin: Vec<T>,
}

impl<T: Real> TrigPoly<T> {
    pub fn new(c0: T, cos: Vec<T>, sin: Vec<T>) -> Self {
        Self { c0, cos, sin }
    }

    pub fn constant(c0: T) -> Self {
        Self::new(c0, vec![], vec![])
    }

    pub fn eval(&self, phi: T) -> T {
        let mut s = self.c0;
        for (n, c) in self.cos.iter().enumerate() {
            s += *c * (T::from_usize_lossy(n + 1) * phi).cos();
        }
        for (n, c) in self.sin.iter().enumerate() {
            s += *c * (T::from_usize_lossy(n + 1) * phi).sin();
        }
        s
    }

    pub fn deriv(&self, phi: T) -> T {
        let mut s = T::zero();
        for (n, c) in self.cos.iter().enumerate() {
            let k = T::from_usize_lossy(n + 1);
            s -= *c * k * (k * phi).sin();
        }
        for (n, c) in self.sin.iter().enumerate() {
            let k = T::from_usize_lossy(n + 1);
            s += *c * k * (k * phi).cos();
        }
        s
    }

    pub fn degree(&self) -> usize {
        self.cos.len().max(self.sin.len())
    }

    fn scale(&self) -> T {
        self.cos.iter().chain(self.sin.iter()).fold(self.c0.abs(), |m, c| m.max(c.abs()))
    }

    /// Zeros on [0, 2π), each verified simple; a touching or degenerate zero is an error.
    pub fn simple_zeros(&self) -> Result<Vec<T>> {
        let scale = self.scale();
        if scale == T::zero() {
            return precondition("B vanishes identically");
        }
        let n = 512 * (self.degree() + 1);
        let tol = lit::<T>(1e-13);
        let mut zeros = scan_roots(|p| self.eval(p), T::zero(), T::TAU(), n, tol)?;
        zeros.iter_mut().for_each(|z| *z = wrap_two_pi(*z));
        zeros.sort_by(|a, b| a.partial_cmp(b).unwrap());
        zeros.dedup_by(|a, b| (*a - *b).abs() < lit(1e-9));
        if zeros.len() > 1 && (zeros[0] + T::TAU() - zeros[zeros.len() - 1]).abs() < lit(1e-9) {
            zeros.pop();
        }
        let dtol = lit::<T>(1e-8) * scale;
        for z in &zeros {
            if self.deriv(*z).abs() < dtol {
                return precondition("B has a non-simple zero");
            }
        }
        // Touching zeros show up as tiny local minima of |B| without a sign change.
        let h = T::TAU() / T::from_usize_lossy(n);
        for j in 0..n {
            let p = h * T::from_usize_lossy(j);
            let (bm, b0, bp) = (self.eval(p - h), self.eval(p), self.eval(p + h));
            if b0.abs() <= bm.abs() && b0.abs() <= bp.abs() && bm.signum() == bp.signum() && bm.signum() == b0.signum() {
                let bracket = self.deriv(p).abs() * h + b0.abs();
                if b0.abs() < lit::<T>(1e-10) * scale && bracket < lit::<T>(1e-6) * scale {
                    return precondition("B has a touching (double) zero");
                }
            }
        }
        Ok(zeros)
    }
}

/// The three field kinds; all are affine in ρ: A = a₀(φ) + a₁(φ)ρ, B = b₀(φ) + b₁(φ)ρ.
#[derive(Debug, Clone, PartialEq)]
pub enum FieldKind<T> {
    Constant { a: T, b: T },
    Tangent { a: T, b: TrigPoly<T> },
    Corner { a0: T, eps: T },
}

#[derive(Debug, Clone, PartialEq)]
pub struct VelocityField<T> {
    kind: FieldKind<T>,
    zeros: Vec<T>,
}

/// Coefficients of A and B at fixed φ.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AffineCoefficients<T> {
    pub a0: T,
    pub a1: T,
    pub b0: T,
    pub b1: T,
}

/// A, B at a point together with their partial derivatives.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldJet<T> {
    pub a: T,
    pub b: T,
    pub a_rho: T,
    pub b_rho: T,
    pub a_phi: T,
    pub b_phi: T,
}

/// Point of the cotangent bundle (ρ, φ; η₀, η_ρ, η_φ).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CotangentPoint<T> {
    pub rho: T,
    pub phi: T,
    pub eta0: T,
    pub eta_rho: T,
    pub eta_phi: T,
}

impl<T: Real> CotangentPoint<T> {
    pub fn new(rho: T, phi: T, eta0: T, eta_rho: T, eta_phi: T) -> Result<Self> {
        if !(rho > T::zero()) {
            return domain("cotangent point needs rho > 0");
        }
        Ok(Self { rho, phi, eta0, eta_rho, eta_phi })
    }
}

impl<T: Real> VelocityField<T> {
    pub fn constant(a: T, b: T) -> Result<Self> {
        if !(a < T::zero()) || !b.is_finite() {
            return precondition("constant field needs A < 0 and finite B");
        }
        Ok(Self { kind: FieldKind::Constant { a, b }, zeros: vec![] })
    }

    pub fn tangent(a: T, b: TrigPoly<T>) -> Result<Self> {
        if !(a < T::zero()) {
            return precondition("tangent field needs A < 0");
        }
        let zeros = b.simple_zeros()?;
        Ok(Self { kind: FieldKind::Tangent { a, b }, zeros })
    }

    pub fn corner(a0: T, eps: T) -> Result<Self> {
        if !(a0 < -T::one()) || !(eps > T::zero() && eps < T::one()) {
            return precondition("corner field needs A0 < -1 and 0 < eps < 1");
        }
        Ok(Self { kind: FieldKind::Corner { a0, eps }, zeros: vec![] })
    }

    /// Corner formulas with ε = 0 allowed; used for limit checks against the radial field.
    pub fn corner_unchecked(a0: T, eps: T) -> Self {
        Self { kind: FieldKind::Corner { a0, eps }, zeros: vec![] }
    }

    pub fn kind(&self) -> &FieldKind<T> {
        &self.kind
    }

    /// Zeros of B(φ) for tangent fields, sorted in [0, 2π).
    pub fn b_zeros(&self) -> &[T] {
        &self.zeros
    }

    #[inline]
    pub fn coefficients(&self, phi: T) -> AffineCoefficients<T> {
        let z = T::zero();
        match &self.kind {
            FieldKind::Constant { a, b } => AffineCoefficients { a0: *a, a1: z, b0: *b, b1: z },
            FieldKind::Tangent { a, b } => AffineCoefficients { a0: *a, a1: z, b0: b.eval(phi), b1: z },
            FieldKind::Corner { a0, eps } => {
                AffineCoefficients { a0: *a0, a1: *eps * phi.sin(), b0: z, b1: *eps * phi.cos() }
            }
        }
    }

    /// φ-derivatives of the affine coefficients.
    #[inline]
    pub fn coefficients_phi(&self, phi: T) -> AffineCoefficients<T> {
        let z = T::zero();
        match &self.kind {
            FieldKind::Constant { .. } => AffineCoefficients { a0: z, a1: z, b0: z, b1: z },
            FieldKind::Tangent { b, .. } => AffineCoefficients { a0: z, a1: z, b0: b.deriv(phi), b1: z },
            FieldKind::Corner { eps, .. } => {
                AffineCoefficients { a0: z, a1: *eps * phi.cos(), b0: z, b1: -*eps * phi.sin() }
            }
        }
    }

    /// (A, B) at (ρ, φ).
    pub fn eval(&self, rho: T, phi: T) -> Result<(T, T)> {
        if !(rho > T::zero()) {
            return domain("field evaluated at rho <= 0");
        }
        Ok(self.eval_unchecked(rho, phi))
    }

    #[inline]
    pub fn eval_unchecked(&self, rho: T, phi: T) -> (T, T) {
        let c = self.coefficients(phi);
        (c.a0 + c.a1 * rho, c.b0 + c.b1 * rho)
    }

    #[inline]
    pub fn jet(&self, rho: T, phi: T) -> FieldJet<T> {
        let c = self.coefficients(phi);
        let d = self.coefficients_phi(phi);
        FieldJet {
            a: c.a0 + c.a1 * rho,
            b: c.b0 + c.b1 * rho,
            a_rho: c.a1,
            b_rho: c.b1,
            a_phi: d.a0 + d.a1 * rho,
            b_phi: d.b0 + d.b1 * rho,
        }
    }

    /// (g^{0ρ}, g^{0φ}) = (A/ρ, B/ρ²).
    #[inline]
    pub fn drift(&self, rho: T, phi: T) -> (T, T) {
        let (a, b) = self.eval_unchecked(rho, phi);
        (a / rho, b / (rho * rho))
    }

    /// Difference quotients of (A/ρ, B/ρ²) between ρ and ρ_ref, free of cancellation.
    #[inline]
    pub fn drift_quotient(&self, rho: T, rho_ref: T, phi: T) -> (T, T) {
        let c = self.coefficients(phi);
        let inv = T::one() / (rho * rho_ref);
        (-c.a0 * inv, -c.b0 * (rho + rho_ref) * inv * inv - c.b1 * inv)
    }

    /// Flow speed squared (A² + B²)/ρ².
    #[inline]
    pub fn speed_sq(&self, rho: T, phi: T) -> T {
        let (a, b) = self.eval_unchecked(rho, phi);
        (a * a + b * b) / (rho * rho)
    }

    pub fn hamiltonian_symbol(&self, p: &CotangentPoint<T>) -> Result<T> {
        let (a, b) = self.eval(p.rho, p.phi)?;
        let r = p.rho;
        let lin = p.eta0 + a / r * p.eta_rho + b / (r * r) * p.eta_phi;
        Ok(lin * lin - p.eta_rho * p.eta_rho - p.eta_phi * p.eta_phi / (r * r))
    }

    /// (H⁺, H⁻) with H = H⁺H⁻.
    pub fn hamiltonian_factors(&self, p: &CotangentPoint<T>) -> Result<(T, T)> {
        let (a, b) = self.eval(p.rho, p.phi)?;
        let r = p.rho;
        let lin = p.eta0 + a / r * p.eta_rho + b / (r * r) * p.eta_phi;
        let root = (p.eta_rho * p.eta_rho + p.eta_phi * p.eta_phi / (r * r)).sqrt();
        Ok((lin + root, lin - root))
    }
}
