//! Angular Fourier coefficients of the packet windows.

use crate::error::{precondition, Result};
use crate::modes::PacketData;
use crate::numerics::{fourier_coefficients, uniform_grid, FourierSeries};
use crate::scalar::{cx, ordered_sum_cx, Cx, Real};

/// γ_m of c_j(φ)e^{iΘ_j(φ)} on `n` uniform nodes, |m| ≤ m_max.
pub fn window_coefficients<T: Real>(
    packet: &PacketData<T>,
    component: usize,
    n: usize,
    m_max: usize,
) -> Result<FourierSeries<T>> {
    let Some(c) = packet.components.get(component) else {
        return precondition("component index out of range");
    };
    let samples: Vec<Cx<T>> = uniform_grid::<T>(n)
        .into_iter()
        .map(|phi| match c.angular(phi) {
            Some((v, _, th, _)) => cx(th.cos(), th.sin()) * v,
            None => cx(T::zero(), T::zero()),
        })
        .collect();
    fourier_coefficients(&samples, m_max)
}

/// Σ_m γ_m conj(γ′_m) over the common range.
pub fn cross_window_sum<T: Real>(a: &FourierSeries<T>, b: &FourierSeries<T>) -> Cx<T> {
    let m = a.m_max.min(b.m_max) as i64;
    ordered_sum_cx((-m..=m).map(|k| a.get(k) * b.get(k).conj()))
}
