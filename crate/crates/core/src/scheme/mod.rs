//! Front-fixing discretization.
//!
//! With `u = x / (p tau^(alpha/2))` the moving domain becomes `[0, 1]` and
//! the scaled unknown `cbar = c * tau^(-alpha)` satisfies an
//! integro-differential equation. Each time layer is an implicit
//! tridiagonal system whose right-hand side carries the whole history
//! through blended fractional quadrature weights.

mod march;
mod mesh;
mod tridiag;
mod weights;

pub use march::{assemble_system, march, recover, LayerSystem, PhysicalGrid, SolutionGrid};
pub use mesh::{build_mesh, MeshSpec, DEFAULT_TAU0_FACTOR};
pub use tridiag::{solve_tridiagonal, Tridiagonal};
pub use weights::{
    layer_weights, rectangle_coeff, trapezoid_coeff, weight_q, weight_r, weight_w, LayerWeights,
};
