//! Similarity solution of the dimensionless one-phase problem.
//!
//! The front moves as `s(tau) = p * tau^(alpha/2)` and the concentration
//! behind it is a ratio of Wright functions. The front coefficient `p` is
//! the unique positive root of
//!
//! ```text
//! lambda * G(1 - a/2) * W(-p; -a/2, 1 - a/2) = p * G(1 + a/2) * (1 - W(-p; -a/2, 1))
//! ```
//!
//! which is the cross-multiplied form of the classical relation.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::special_fn::{gamma_fn, wright_with, WrightOptions};

/// Dimensional data of a release experiment.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhysicalParams<T> {
    /// generalized diffusivity, cm^2 s^-alpha
    pub d_alpha: T,
    /// initial drug loading
    pub c0: T,
    /// solubility
    pub cs: T,
    /// slab thickness, cm
    pub l: T,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams<T> {
    pub alpha: T,
    pub lambda: T,
    pub physical: Option<PhysicalParams<T>>,
}

impl<T: Real> ModelParams<T> {
    pub fn new(alpha: T, lambda: T) -> Result<Self> {
        if !(alpha > T::zero() && alpha <= T::one()) {
            return Err(Error::Domain(format!(
                "alpha must lie in (0, 1], got {alpha}"
            )));
        }
        if !(lambda > T::zero()) || !lambda.is_finite() {
            return Err(Error::Domain(format!(
                "lambda must be positive, got {lambda}"
            )));
        }
        Ok(ModelParams {
            alpha,
            lambda,
            physical: None,
        })
    }

    /// Builds the dimensionless instance of a physical experiment; the
    /// Stefan number is `CS / C0`.
    pub fn from_physical(alpha: T, physical: PhysicalParams<T>) -> Result<Self> {
        let PhysicalParams { d_alpha, c0, cs, l } = physical;
        if !(cs > T::zero() && c0 > cs) {
            return Err(Error::Domain(format!(
                "require C0 > CS > 0, got C0 = {c0}, CS = {cs}"
            )));
        }
        if !(l > T::zero() && d_alpha > T::zero()) {
            return Err(Error::Domain("require l > 0 and D_alpha > 0".into()));
        }
        let mut params = Self::new(alpha, cs / c0)?;
        params.physical = Some(physical);
        Ok(params)
    }

    /// Front exponent `alpha / 2`.
    pub fn half_alpha(&self) -> T {
        self.alpha * T::lit(0.5)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FrontMethod {
    Transcendental,
    Iterative,
}

/// Front coefficient together with how it was obtained.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrontResult<T> {
    pub p: T,
    pub residual: T,
    pub method: FrontMethod,
    pub iterations: usize,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub trace: Vec<crate::p_iter::IterStep<T>>,
}

/// Maps physical `(t, X, C)` to dimensionless `(tau, x, c)`.
pub fn to_dimensionless<T: Real>(t: T, x: T, c: T, params: &ModelParams<T>) -> Result<(T, T, T)> {
    let phys = params.physical.as_ref().ok_or(Error::MissingPhysical)?;
    let rate = (phys.d_alpha / (phys.l * phys.l)).powf(T::one() / params.alpha);
    Ok((t * rate, x / phys.l, c / phys.cs))
}

/// Left side minus right side of the cross-multiplied front equation.
pub fn front_equation_residual<T: Real>(
    p: T,
    params: &ModelParams<T>,
    opts: &WrightOptions,
) -> Result<T> {
    let h = params.half_alpha();
    let lhs = params.lambda * gamma_fn(T::one() - h)? * wright_with(-p, -h, T::one() - h, opts)?;
    let rhs = p * gamma_fn(T::one() + h)? * (T::one() - wright_with(-p, -h, T::one(), opts)?);
    Ok(lhs - rhs)
}

/// Newton iteration safeguarded by bisection; used for the similarity
/// coefficient.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NewtonConfig {
    pub bracket_lo: f64,
    pub bracket_hi: f64,
    pub max_iters: usize,
    pub wright: WrightOptions,
}

impl Default for NewtonConfig {
    fn default() -> Self {
        NewtonConfig {
            bracket_lo: 1e-6,
            bracket_hi: 6.0,
            max_iters: 200,
            wright: WrightOptions::default(),
        }
    }
}

/// Solves the transcendental front equation to residual `tol`.
pub fn solve_p_transcendental<T: Real>(params: &ModelParams<T>, tol: T) -> Result<FrontResult<T>> {
    let cfg = NewtonConfig {
        wright: WrightOptions::for_type::<T>(),
        ..NewtonConfig::default()
    };
    solve_p_transcendental_with(params, tol, &cfg)
}

pub fn solve_p_transcendental_with<T: Real>(
    params: &ModelParams<T>,
    tol: T,
    cfg: &NewtonConfig,
) -> Result<FrontResult<T>> {
    if !(tol > T::zero()) {
        return Err(Error::Domain(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    let f = |p: T| front_equation_residual(p, params, &cfg.wright);

    let mut lo = T::lit(cfg.bracket_lo);
    let mut hi = T::lit(cfg.bracket_hi);
    let f_lo = f(lo)?;
    let f_hi = f(hi)?;
    if !(f_lo > T::zero() && f_hi < T::zero()) {
        return Err(Error::BracketFailure {
            lo: cfg.bracket_lo,
            hi: cfg.bracket_hi,
            f_lo: f_lo.to_f64_lossy(),
            f_hi: f_hi.to_f64_lossy(),
        });
    }

    let mut p = (T::lit(2.0) * params.lambda).sqrt();
    if !(p > lo && p < hi) {
        p = (lo + hi) * T::lit(0.5);
    }
    for iter in 0..cfg.max_iters {
        let fp = f(p)?;
        if fp.abs() < tol {
            return Ok(FrontResult {
                p,
                residual: fp.abs(),
                method: FrontMethod::Transcendental,
                iterations: iter,
                trace: Vec::new(),
            });
        }
        // f is positive left of the root
        if fp > T::zero() {
            lo = p;
        } else {
            hi = p;
        }
        let h = T::lit(1e-7) * p.max(T::one());
        let slope = (f(p + h)? - f(p - h)?) / (h + h);
        let newton = p - fp / slope;
        p = if newton.is_finite() && newton > lo && newton < hi {
            newton
        } else {
            (lo + hi) * T::lit(0.5)
        };
        if hi - lo <= T::epsilon() * hi {
            break;
        }
    }
    Err(Error::NonConvergence(cfg.max_iters))
}

/// Concentration of the similarity solution at `(x, tau)`.
pub fn exact_concentration<T: Real>(x: T, tau: T, p: T, alpha: T) -> Result<T> {
    exact_concentration_with(x, tau, p, alpha, &WrightOptions::for_type::<T>())
}

pub fn exact_concentration_with<T: Real>(
    x: T,
    tau: T,
    p: T,
    alpha: T,
    opts: &WrightOptions,
) -> Result<T> {
    if !(tau > T::zero()) {
        return Err(Error::Domain(format!("tau must be positive, got {tau}")));
    }
    let scale = tau.powf(alpha * T::lit(0.5));
    let front = p * scale;
    let slack = T::lit(8.0) * T::epsilon() * front;
    if x < T::zero() || x > front + slack {
        return Err(Error::Domain(format!(
            "x = {x} outside [0, s(tau) = {front}]"
        )));
    }
    similarity_profile(x.min(front) / scale, p, alpha, opts)
}

/// The solution in similarity variable `eta = x / tau^(alpha/2)`, `0 <= eta <= p`.
pub fn similarity_profile<T: Real>(eta: T, p: T, alpha: T, opts: &WrightOptions) -> Result<T> {
    let g = -alpha * T::lit(0.5);
    let num = T::one() - wright_with(-eta, g, T::one(), opts)?;
    let den = T::one() - wright_with(-p, g, T::one(), opts)?;
    Ok(num / den)
}

/// Front position `s(tau) = p * tau^(alpha/2)`.
pub fn exact_front<T: Real>(tau: T, p: T, alpha: T) -> T {
    if tau == T::zero() {
        return T::zero();
    }
    p * tau.powf(alpha * T::lit(0.5))
}
