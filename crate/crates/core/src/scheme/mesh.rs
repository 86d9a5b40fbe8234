use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Regularized initial time as a fraction of the time step.
pub const DEFAULT_TAU0_FACTOR: f64 = 1e-3;

/// Uniform `(m+1) x (n+1)` node set on `[0, 1] x [0, tau*]`.
///
/// Time node `j = 0` is represented by the regularized instant `tau0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeshSpec<T> {
    pub m: usize,
    pub n: usize,
    pub delta_u: T,
    pub delta_tau: T,
    pub tau_star: T,
    pub tau0: T,
}

impl<T: Real> MeshSpec<T> {
    pub fn u(&self, i: usize) -> T {
        T::of(i) * self.delta_u
    }

    /// Time used by the scheme at layer `j`: `tau0` for `j = 0`, `j * delta_tau` after.
    pub fn tau(&self, j: usize) -> T {
        if j == 0 {
            self.tau0
        } else {
            T::of(j) * self.delta_tau
        }
    }

    /// Mesh node time `j * delta_tau` (exactly zero for `j = 0`).
    pub fn node_tau(&self, j: usize) -> T {
        T::of(j) * self.delta_tau
    }

    /// Index of the time layer closest to `tau`.
    pub fn nearest_layer(&self, tau: T) -> usize {
        let j = (tau / self.delta_tau).round();
        j.to_usize().unwrap_or(0).min(self.n)
    }
}

/// Mesh whose end time `tau* = p^(-2/alpha)` is when the front reaches `x = 1`.
pub fn build_mesh<T: Real>(
    m: usize,
    n: usize,
    p: T,
    alpha: T,
    tau0_factor: T,
) -> Result<MeshSpec<T>> {
    if m < 2 {
        return Err(Error::InvalidMesh(format!("need m >= 2, got {m}")));
    }
    if n < 1 {
        return Err(Error::InvalidMesh(format!("need n >= 1, got {n}")));
    }
    if !(p > T::zero()) || !p.is_finite() {
        return Err(Error::InvalidMesh(format!(
            "front coefficient must be positive, got {p}"
        )));
    }
    if !(alpha > T::zero() && alpha <= T::one()) {
        return Err(Error::InvalidMesh(format!(
            "alpha must lie in (0, 1], got {alpha}"
        )));
    }
    if !(tau0_factor > T::zero() && tau0_factor < T::one()) {
        return Err(Error::InvalidMesh(format!(
            "tau0 factor must lie in (0, 1), got {tau0_factor}"
        )));
    }
    let tau_star = p.powf(-T::lit(2.0) / alpha);
    if !tau_star.is_finite() {
        return Err(Error::InvalidMesh(format!(
            "end time overflows for p = {p}"
        )));
    }
    let delta_tau = tau_star / T::of(n);
    Ok(MeshSpec {
        m,
        n,
        delta_u: T::one() / T::of(m),
        delta_tau,
        tau_star,
        tau0: tau0_factor * delta_tau,
    })
}
