//! Fourier coefficients γ_m = (1/2π)∫ f(φ) e^{imφ} dφ of periodic samples.

use rustfft::FftPlanner;

use crate::error::{precondition, Result};
use crate::scalar::{ordered_sum, Cx, Real};

#[derive(Debug, Clone)]
pub struct FourierSeries<T> {
    pub m_max: usize,
    /// γ_m for m = −m_max..=m_max.
    pub coeffs: Vec<Cx<T>>,
}

impl<T: Real> FourierSeries<T> {
    pub fn get(&self, m: i64) -> Cx<T> {
        let idx = m + self.m_max as i64;
        if idx < 0 || idx as usize >= self.coeffs.len() {
            return Cx::new(T::zero(), T::zero());
        }
        self.coeffs[idx as usize]
    }

    pub fn parseval_sum(&self) -> T {
        ordered_sum(self.coeffs.iter().map(|c| c.norm_sqr()))
    }
}

/// Coefficients from samples on the uniform grid φ_j = 2πj/N.
pub fn fourier_coefficients<T: Real>(samples: &[Cx<T>], m_max: usize) -> Result<FourierSeries<T>> {
    let n = samples.len();
    if n < 4 * m_max + 4 {
        return precondition(format!("grid of {n} points too coarse for |m| <= {m_max}"));
    }
    let mut buf = samples.to_vec();
    // The inverse transform carries e^{+2πijk/N}, matching e^{imφ_j}.
    FftPlanner::new().plan_fft_inverse(n).process(&mut buf);
    let scale = T::one() / T::from_usize_lossy(n);
    let coeffs = (-(m_max as i64)..=m_max as i64)
        .map(|m| buf[m.rem_euclid(n as i64) as usize] * scale)
        .collect();
    Ok(FourierSeries { m_max, coeffs })
}

/// Trapezoid value of (1/2π)∫|f|² on the same grid.
pub fn mean_square<T: Real>(samples: &[Cx<T>]) -> T {
    ordered_sum(samples.iter().map(|c| c.norm_sqr())) / T::from_usize_lossy(samples.len())
}

/// The uniform grid φ_j = 2πj/N.
pub fn uniform_grid<T: Real>(n: usize) -> Vec<T> {
    let h = T::TAU() / T::from_usize_lossy(n);
    (0..n).map(|j| h * T::from_usize_lossy(j)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{ci, cx};

    #[test]
    fn single_harmonic() {
        let grid = uniform_grid::<f64>(64);
        let s: Vec<_> = grid.iter().map(|&p| (-ci::<f64>() * 3.0 * p).exp()).collect();
        let f = fourier_coefficients(&s, 10).unwrap();
        for m in -10..=10 {
            let want = if m == 3 { cx(1.0, 0.0) } else { cx(0.0, 0.0) };
            assert!((f.get(m) - want).norm() < 1e-14, "m={m}");
        }
    }

    #[test]
    fn coarse_grid_rejected() {
        let s = vec![cx(1.0_f64, 0.0); 10];
        assert!(fourier_coefficients(&s, 2).is_err());
    }
}
