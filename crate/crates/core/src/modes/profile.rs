//! Angular profiles c(φ) and tabulated angular phases Θ(φ).

use crate::error::{precondition, Result};
use crate::geometry::QuinticHermite;
use crate::numerics::{gauss_kronrod, QuadratureSpec};
use crate::scalar::{lit, Real};

/// Smooth angular amplitude of a packet component.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AngularProfile<T> {
    /// amp · exp(1 − 1/(1 − x²)) with x = (2φ − lo − hi)/(hi − lo); peak value `amp`.
    Bump { lo: T, hi: T, amp: T },
    /// amp on the whole circle.
    Constant { amp: T },
}

impl<T: Real> AngularProfile<T> {
    pub fn bump(lo: T, hi: T, amp: T) -> Result<Self> {
        if !(hi > lo) || hi - lo > T::TAU() || !amp.is_finite() {
            return precondition("bump needs lo < hi <= lo + 2pi and finite amplitude");
        }
        Ok(AngularProfile::Bump { lo, hi, amp })
    }

    /// Closed support, `None` for the full circle.
    pub fn support(&self) -> Option<(T, T)> {
        match *self {
            AngularProfile::Bump { lo, hi, .. } => Some((lo, hi)),
            AngularProfile::Constant { .. } => None,
        }
    }

    /// (c, c′) at φ, with φ taken mod 2π.
    #[inline]
    pub fn eval(&self, phi: T) -> (T, T) {
        match *self {
            AngularProfile::Constant { amp } => (amp, T::zero()),
            AngularProfile::Bump { lo, hi, amp } => {
                let p = lo + wrap_from(phi - lo);
                let half = (hi - lo) * lit(0.5);
                let x = (p - lo - half) / half;
                let q = T::one() - x * x;
                if !(q > T::zero()) {
                    return (T::zero(), T::zero());
                }
                let c = amp * (T::one() - T::one() / q).exp();
                (c, c * (-(x + x) / (q * q)) / half)
            }
        }
    }

    /// ∫₀^{2π} |c|² dφ.
    pub fn l2_sq(&self) -> Result<T> {
        match *self {
            AngularProfile::Constant { amp } => Ok(amp * amp * T::TAU()),
            AngularProfile::Bump { lo, hi, .. } => {
                let spec = QuadratureSpec::smooth().with_rel_tol(lit(1e-13));
                let e = gauss_kronrod(|p: T| self.eval(p).0.powi(2), lo, hi, &spec);
                e.into_result("profile norm").map(|e| e.value)
            }
        }
    }

    /// The same profile scaled so that ∫|c|² = `target`.
    pub fn normalized(&self, target: T) -> Result<Self> {
        let scale = (target / self.l2_sq()?).sqrt();
        Ok(match *self {
            AngularProfile::Bump { lo, hi, amp } => AngularProfile::Bump { lo, hi, amp: amp * scale },
            AngularProfile::Constant { amp } => AngularProfile::Constant { amp: amp * scale },
        })
    }

    pub fn scaled(&self, k: T) -> Self {
        match *self {
            AngularProfile::Bump { lo, hi, amp } => AngularProfile::Bump { lo, hi, amp: amp * k },
            AngularProfile::Constant { amp } => AngularProfile::Constant { amp: amp * k },
        }
    }
}

/// x mod 2π in [0, 2π).
#[inline]
pub(crate) fn wrap_from<T: Real>(x: T) -> T {
    let tau = T::TAU();
    let r = x % tau;
    if r < T::zero() {
        r + tau
    } else {
        r
    }
}

/// Θ on [lo, hi] from Θ′, normalized by Θ(anchor) = offset; quintic Hermite between nodes.
#[derive(Debug, Clone)]
pub struct PhaseTable<T> {
    pub lo: T,
    pub hi: T,
    cells: Vec<QuinticHermite<T>>,
}

impl<T: Real> PhaseTable<T> {
    /// Tabulates Θ(φ) = offset + ∫_anchor^φ Θ′ on `n` cells.
    pub fn new<F: Fn(T) -> T>(theta_prime: F, lo: T, hi: T, anchor: T, offset: T, n: usize) -> Result<Self> {
        if !(hi > lo) || !(anchor >= lo && anchor <= hi) || n == 0 {
            return precondition("phase table needs lo < hi, anchor in [lo, hi] and n > 0");
        }
        let h = (hi - lo) / T::from_usize_lossy(n);
        let fd = h * lit(1e-3);
        let spec = QuadratureSpec::smooth().with_rel_tol(lit(1e-14)).with_abs_tol(lit(1e-16));
        let node = |i: usize| if i == n { hi } else { lo + h * T::from_usize_lossy(i) };
        let mut jets = Vec::with_capacity(n + 1);
        let mut theta = T::zero();
        for i in 0..=n {
            let x = node(i);
            if i > 0 {
                let cell = gauss_kronrod(&theta_prime, node(i - 1), x, &spec).into_result("phase table")?;
                theta += cell.value;
            }
            // one-sided differences at the table ends keep Θ′ inside its domain
            let (xa, xb) = (if i == 0 { x } else { x - fd }, if i == n { x } else { x + fd });
            let dd = (theta_prime(xb) - theta_prime(xa)) / (xb - xa);
            jets.push((theta, theta_prime(x), dd));
        }
        let cells: Vec<_> = (0..n).map(|i| QuinticHermite::new(node(i), node(i + 1), jets[i], jets[i + 1])).collect();
        let mut table = Self { lo, hi, cells };
        let shift = offset - table.raw(anchor).0;
        for (c, (i, j)) in table.cells.iter_mut().zip((0..n).map(|i| (i, i + 1))) {
            let (a, b) = (jets[i], jets[j]);
            *c = QuinticHermite::new(c.x0, c.x1, (a.0 + shift, a.1, a.2), (b.0 + shift, b.1, b.2));
        }
        Ok(table)
    }

    fn raw(&self, phi: T) -> (T, T) {
        let n = self.cells.len();
        let h = (self.hi - self.lo) / T::from_usize_lossy(n);
        let i = ((phi - self.lo) / h).floor().to_usize().unwrap_or(0).min(n - 1);
        let (v, d, _) = self.cells[i].eval(phi);
        (v, d)
    }

    /// (Θ, Θ′) at φ, taken mod 2π into [lo, lo + 2π); `None` outside [lo, hi].
    #[inline]
    pub fn eval(&self, phi: T) -> Option<(T, T)> {
        let p = self.lo + wrap_from(phi - self.lo);
        (p <= self.hi).then(|| self.raw(p))
    }
}
