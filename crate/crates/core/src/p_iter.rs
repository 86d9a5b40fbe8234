//! Front coefficient from the numerical solution alone.
//!
//! For a trial `p` the scheme runs on the mesh ending at `tau* = p^(-2/alpha)`
//! and the Stefan condition, averaged over all time layers, yields a new
//! estimate `Phi(p)`. The accepted coefficient satisfies
//! `|1 - Phi(p) tau_n^(alpha/2)| = |1 - Phi(p) / p| < epsilon`. It is found by
//! bisection on `Phi(p) - p`.

use serde::{Deserialize, Serialize};

use crate::analytic::{FrontMethod, FrontResult, ModelParams};
use crate::error::{Error, Result};
use crate::phi_net::predict_phi;
use crate::scalar::Real;
use crate::scheme::{build_mesh, march, SolutionGrid, DEFAULT_TAU0_FACTOR};
use crate::special_fn::gamma_fn;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PIterConfig<T> {
    pub epsilon: T,
    pub bracket_lo: T,
    pub bracket_hi: T,
    pub max_iters: usize,
    pub tau0_factor: T,
    /// Include the regularized layer `j = 0` in the average (its jump is 0).
    pub include_initial_layer: bool,
}

impl<T: Real> Default for PIterConfig<T> {
    fn default() -> Self {
        PIterConfig {
            epsilon: T::lit(1e-3),
            bracket_lo: T::lit(0.1),
            bracket_hi: T::lit(3.0),
            max_iters: 60,
            tau0_factor: T::lit(DEFAULT_TAU0_FACTOR),
            include_initial_layer: true,
        }
    }
}

impl<T: Real> PIterConfig<T> {
    pub fn validate(&self) -> Result<()> {
        let (lo, hi) = (
            self.bracket_lo.min(self.bracket_hi),
            self.bracket_lo.max(self.bracket_hi),
        );
        if !(lo > T::zero() && lo < hi) {
            return Err(Error::Domain(format!(
                "bracket must satisfy 0 < lo < hi, got [{}, {}]",
                self.bracket_lo, self.bracket_hi
            )));
        }
        if !(self.epsilon > T::zero()) {
            return Err(Error::Domain(format!(
                "epsilon must be positive, got {}",
                self.epsilon
            )));
        }
        Ok(())
    }
}

/// Source of the blend parameter.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PhiMode<T> {
    Network,
    Fixed(T),
}

impl<T: Real> PhiMode<T> {
    pub fn resolve(&self, params: &ModelParams<T>, m: usize) -> T {
        match *self {
            PhiMode::Network => predict_phi(T::one() / T::of(m), params.lambda, params.alpha),
            PhiMode::Fixed(phi) => phi,
        }
    }
}

/// One bisection step.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IterStep<T> {
    pub p: T,
    pub phi_of_p: T,
    pub residual: T,
}

/// Layer-averaged front coefficient from the Stefan condition.
pub fn estimate_p_from_grid<T: Real>(grid: &SolutionGrid<T>, lambda: T) -> Result<T> {
    estimate_p_with(grid, lambda, true)
}

/// As [`estimate_p_from_grid`], optionally leaving out layer 0.
///
/// The jump is the one-sided difference `c_{m,j} - c_{m-1,j}` at the fixed
/// front `u = 1`; negative jumps are clamped to zero.
pub fn estimate_p_with<T: Real>(
    grid: &SolutionGrid<T>,
    lambda: T,
    include_initial: bool,
) -> Result<T> {
    let (m, n) = (grid.m(), grid.n());
    if grid.populated() < n + 1 {
        return Err(Error::UnpopulatedHistory {
            needed: n,
            populated: grid.populated(),
        });
    }
    let half = grid.alpha * T::lit(0.5);
    let factor =
        lambda * gamma_fn(T::one() - half)? / (gamma_fn(T::one() + half)? * grid.mesh.delta_u);
    let first = usize::from(!include_initial);
    let mut sum = T::zero();
    let mut any_positive = false;
    for j in first..=n {
        let jump = grid.concentration(m, j) - grid.concentration(m - 1, j);
        if jump > T::zero() {
            any_positive = true;
            sum = sum + (factor * jump).sqrt();
        }
    }
    if !any_positive {
        return Err(Error::DegenerateGrid);
    }
    Ok(sum / T::of(n + 1 - first))
}

/// `Phi(p)`: run the scheme on the mesh implied by `p` and re-estimate.
pub fn front_self_map<T: Real>(
    params: &ModelParams<T>,
    m: usize,
    n: usize,
    phi: T,
    p: T,
    cfg: &PIterConfig<T>,
) -> Result<T> {
    let mesh = build_mesh(m, n, p, params.alpha, cfg.tau0_factor)?;
    let grid = march(params, &mesh, p, phi)?;
    estimate_p_with(&grid, params.lambda, cfg.include_initial_layer)
}

/// Bisection for the fixed point of [`front_self_map`].
pub fn find_p<T: Real>(
    params: &ModelParams<T>,
    m: usize,
    n: usize,
    phi_mode: PhiMode<T>,
    cfg: &PIterConfig<T>,
) -> Result<FrontResult<T>> {
    cfg.validate()?;
    let phi = phi_mode.resolve(params, m);
    let map = |p: T| front_self_map(params, m, n, phi, p, cfg);

    let mut lo = cfg.bracket_lo.min(cfg.bracket_hi);
    let mut hi = cfg.bracket_lo.max(cfg.bracket_hi);
    let g_lo = map(lo)? - lo;
    let g_hi = map(hi)? - hi;
    if g_lo == T::zero() || g_hi == T::zero() || (g_lo > T::zero()) == (g_hi > T::zero()) {
        return Err(Error::BracketFailure {
            lo: lo.to_f64_lossy(),
            hi: hi.to_f64_lossy(),
            f_lo: g_lo.to_f64_lossy(),
            f_hi: g_hi.to_f64_lossy(),
        });
    }
    let lo_positive = g_lo > T::zero();

    let mut trace = Vec::new();
    for iter in 1..=cfg.max_iters {
        let mid = (lo + hi) * T::lit(0.5);
        let image = map(mid)?;
        let residual = (T::one() - image / mid).abs();
        trace.push(IterStep {
            p: mid,
            phi_of_p: image,
            residual,
        });
        if residual < cfg.epsilon {
            return Ok(FrontResult {
                p: mid,
                residual,
                method: FrontMethod::Iterative,
                iterations: iter,
                trace,
            });
        }
        if (image - mid > T::zero()) == lo_positive {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Err(Error::NonConvergence(cfg.max_iters))
}
