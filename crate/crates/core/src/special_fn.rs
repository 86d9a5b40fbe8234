//! Euler gamma function on the real line and the two-parameter Wright
//! function
//!
//! ```text
//! W(z; gamma, delta) = sum_{k>=0} z^k / (k! * Gamma(gamma*k + delta)),   gamma > -1
//! ```
//!
//! Reciprocal gamma is treated as entire, so series terms that land on a
//! pole of `Gamma` contribute exactly zero.

use crate::error::{Error, Result};
use crate::scalar::Real;

const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEFFS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

/// Largest integer argument for which the factorial product is used.
const EXACT_INT_LIMIT: usize = 170;

fn is_pole<T: Real>(x: T) -> bool {
    x <= T::zero() && x == x.round()
}

/// `sin(pi x)` with the argument reduced modulo 2 first, so that large
/// `|x|` keeps full relative accuracy near the zeros.
fn sin_pi<T: Real>(x: T) -> T {
    let two = T::lit(2.0);
    let r = x - two * (x / two).round();
    (T::PI() * r).sin()
}

/// Lanczos approximation, valid for `x >= 0.5`.
fn gamma_lanczos<T: Real>(x: T) -> T {
    let x = x - T::one();
    let mut acc = T::lit(LANCZOS_COEFFS[0]);
    for (i, &c) in LANCZOS_COEFFS.iter().enumerate().skip(1) {
        acc = acc + T::lit(c) / (x + T::of(i));
    }
    let t = x + T::lit(LANCZOS_G + 0.5);
    let half = T::lit(0.5);
    // split the power so that t^(x+1/2) does not overflow before e^-t damps it
    let sqrt_pow = t.powf((x + half) * half);
    (T::TAU()).sqrt() * sqrt_pow * ((-t).exp() * sqrt_pow) * acc
}

/// Euler gamma function for real `x`, including negative non-integers.
pub fn gamma_fn<T: Real>(x: T) -> Result<T> {
    if x.is_nan() {
        return Err(Error::Domain("gamma of NaN".into()));
    }
    if is_pole(x) {
        return Err(Error::Pole(x.to_f64_lossy()));
    }
    if x == x.round() && x <= T::of(EXACT_INT_LIMIT) {
        let n = x.to_usize().expect("positive integer");
        let mut prod = T::one();
        for k in 2..n {
            prod = prod * T::of(k);
        }
        return Ok(prod);
    }
    if x < T::lit(0.5) {
        // reflection: Gamma(x) Gamma(1-x) = pi / sin(pi x)
        Ok(T::PI() / (sin_pi(x) * gamma_lanczos(T::one() - x)))
    } else {
        Ok(gamma_lanczos(x))
    }
}

/// `1 / Gamma(x)`, extended by zero at the poles.
pub fn rgamma<T: Real>(x: T) -> T {
    if is_pole(x) {
        return T::zero();
    }
    if x < T::lit(0.5) {
        sin_pi(x) * gamma_lanczos(T::one() - x) / T::PI()
    } else {
        match gamma_fn(x) {
            Ok(g) if g.is_infinite() => T::zero(),
            Ok(g) => T::one() / g,
            Err(_) => T::zero(),
        }
    }
}

/// Truncation controls for [`wright_with`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WrightOptions {
    /// A term is negligible when `|term| < tol * max(1, |partial sum|)`.
    pub tol: f64,
    /// Number of consecutive negligible terms that ends the summation.
    pub consecutive: usize,
    pub max_terms: usize,
}

impl WrightOptions {
    pub fn for_type<T: Real>() -> Self {
        WrightOptions {
            tol: T::SERIES_TOL,
            consecutive: 3,
            max_terms: 1000,
        }
    }
}

impl Default for WrightOptions {
    fn default() -> Self {
        Self::for_type::<f64>()
    }
}

/// Two-parameter Wright function with the default truncation rule for `T`.
pub fn wright<T: Real>(z: T, gamma: T, delta: T) -> Result<T> {
    wright_with(z, gamma, delta, &WrightOptions::for_type::<T>())
}

pub fn wright_with<T: Real>(z: T, gamma: T, delta: T, opts: &WrightOptions) -> Result<T> {
    if !(gamma > -T::one()) {
        return Err(Error::Domain(format!(
            "Wright function requires gamma > -1, got {gamma}"
        )));
    }
    let tol = T::lit(opts.tol);
    let non_convergence = || Error::WrightNonConvergence {
        z: z.to_f64_lossy(),
        gamma: gamma.to_f64_lossy(),
        delta: delta.to_f64_lossy(),
        terms: opts.max_terms,
    };

    let mut sum = T::zero();
    // z^k / k!, built incrementally
    let mut power = T::one();
    let mut small_run = 0;
    for k in 0..opts.max_terms {
        let term = power * rgamma(gamma * T::of(k) + delta);
        if !term.is_finite() {
            return Err(non_convergence());
        }
        sum = sum + term;
        if term.abs() < tol * sum.abs().max(T::one()) {
            small_run += 1;
            if small_run >= opts.consecutive {
                return Ok(sum);
            }
        } else {
            small_run = 0;
        }
        power = power * z / T::of(k + 1);
    }
    Err(non_convergence())
}
