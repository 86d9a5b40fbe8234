//! Quadrature weights of the scheme.
//!
//! `q` discretizes the advective term produced by the front-fixing change
//! of variable (central difference in `u`, rectangle rule in time). `r`
//! is the product trapezoidal rule for the Riemann-Liouville integral of
//! order `alpha`, `w` the product rectangle rule. The scheme blends the
//! last two with the parameter `phi`.

use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::scheme::mesh::MeshSpec;
use crate::special_fn::gamma_fn;

/// `q_{i,j} = alpha * i * tau_j^(alpha-1) * dtau / 4`.
pub fn weight_q<T: Real>(i: usize, j: usize, mesh: &MeshSpec<T>, alpha: T) -> Result<T> {
    if i > mesh.m || j == 0 || j > mesh.n {
        return Err(Error::IndexOutOfRange(format!(
            "q weight needs 0 <= i <= {} and 1 <= j <= {}, got ({i}, {j})",
            mesh.m, mesh.n
        )));
    }
    Ok(q_base(j, mesh, alpha) * T::of(i))
}

/// `q_{i,j} / i`.
pub(crate) fn q_base<T: Real>(j: usize, mesh: &MeshSpec<T>, alpha: T) -> T {
    alpha * mesh.node_tau(j).powf(alpha - T::one()) * mesh.delta_tau * T::lit(0.25)
}

/// Bracketed factor of the trapezoid weight for node `j` on the interval
/// ending at `k + 1`, divided by `alpha (alpha + 1)`. Multiply by
/// `dtau^alpha / Gamma(alpha)` for the plain quadrature weight.
pub fn trapezoid_coeff<T: Real>(j: usize, k: usize, alpha: T) -> T {
    let a1 = alpha + T::one();
    let kk = T::of(k);
    let bracket = if j == 0 {
        kk.powf(a1) - (kk - alpha) * (kk + T::one()).powf(alpha)
    } else if j <= k {
        let d = T::of(k - j);
        (d + T::lit(2.0)).powf(a1) + d.powf(a1) - T::lit(2.0) * (d + T::one()).powf(a1)
    } else {
        T::one()
    };
    bracket / (alpha * a1)
}

/// `(k + 1 - j)^alpha - (k - j)^alpha`. Multiply by
/// `dtau^alpha / Gamma(alpha + 1)` for the plain quadrature weight.
pub fn rectangle_coeff<T: Real>(j: usize, k: usize, alpha: T) -> T {
    let d = T::of(k - j);
    (d + T::one()).powf(alpha) - d.powf(alpha)
}

/// Trapezoid weight `r_{j,k+1}` including `1 / (p^2 Gamma(alpha) du^2)`.
pub fn weight_r<T: Real>(j: usize, k: usize, mesh: &MeshSpec<T>, alpha: T, p: T) -> Result<T> {
    check_layer(k, mesh)?;
    if j > k + 1 {
        return Err(Error::IndexOutOfRange(format!(
            "r weight needs j <= k + 1 = {}, got j = {j}",
            k + 1
        )));
    }
    let scale =
        mesh.delta_tau.powf(alpha) / (p * p * gamma_fn(alpha)? * mesh.delta_u * mesh.delta_u);
    Ok(scale * trapezoid_coeff(j, k, alpha))
}

/// Rectangle weight `w_{j,k+1} = dtau^alpha / (p^2 Gamma(alpha+1)) * ((k+1-j)^alpha - (k-j)^alpha)`.
///
/// Unlike `r` this weight carries no `1 / du^2` factor; the blended scheme
/// uses it in exactly this form.
pub fn weight_w<T: Real>(j: usize, k: usize, mesh: &MeshSpec<T>, alpha: T, p: T) -> Result<T> {
    check_layer(k, mesh)?;
    if j > k {
        return Err(Error::IndexOutOfRange(format!(
            "w weight needs j <= k = {k}, got j = {j}"
        )));
    }
    let scale = mesh.delta_tau.powf(alpha) / (p * p * gamma_fn(alpha + T::one())?);
    Ok(scale * rectangle_coeff(j, k, alpha))
}

fn check_layer<T>(k: usize, mesh: &MeshSpec<T>) -> Result<()> {
    if k >= mesh.n {
        return Err(Error::IndexOutOfRange(format!(
            "layer k + 1 = {} beyond n = {}",
            k + 1,
            mesh.n
        )));
    }
    Ok(())
}

/// All weights needed to advance from layer `k` to `k + 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct LayerWeights<T> {
    /// `r_{j,k+1}` for `j = 0..=k+1`
    pub r: Vec<T>,
    /// `w_{j,k+1}` for `j = 0..=k`
    pub w: Vec<T>,
}

impl<T: Real> LayerWeights<T> {
    /// `phi r_j + (1 - phi) w_j` for the history nodes `j = 0..=k`.
    pub fn blended(&self, phi: T) -> Vec<T> {
        let psi = T::one() - phi;
        self.w
            .iter()
            .zip(&self.r)
            .map(|(&w, &r)| phi * r + psi * w)
            .collect()
    }

    /// Implicit weight `r_{k+1,k+1}`.
    pub fn implicit(&self) -> T {
        *self.r.last().expect("non-empty")
    }
}

pub fn layer_weights<T: Real>(
    k: usize,
    mesh: &MeshSpec<T>,
    alpha: T,
    p: T,
) -> Result<LayerWeights<T>> {
    check_layer(k, mesh)?;
    let dta = mesh.delta_tau.powf(alpha);
    let r_scale = dta / (p * p * gamma_fn(alpha)? * mesh.delta_u * mesh.delta_u);
    let w_scale = dta / (p * p * gamma_fn(alpha + T::one())?);
    Ok(LayerWeights {
        r: (0..=k + 1)
            .map(|j| r_scale * trapezoid_coeff(j, k, alpha))
            .collect(),
        w: (0..=k)
            .map(|j| w_scale * rectangle_coeff(j, k, alpha))
            .collect(),
    })
}
