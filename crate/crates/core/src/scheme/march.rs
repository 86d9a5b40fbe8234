use ndarray::{Array2, ArrayView1, ArrayView2, Axis};

use crate::analytic::ModelParams;
use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::scheme::mesh::MeshSpec;
use crate::scheme::tridiag::Tridiagonal;
use crate::scheme::weights::{layer_weights, q_base};

/// Scaled concentration `cbar_{i,j} = c_{i,j} tau_j^(-alpha)` on the mesh.
#[derive(Debug, Clone, PartialEq)]
pub struct SolutionGrid<T> {
    // one row per time layer: shape (n + 1, m + 1)
    layers: Array2<T>,
    populated: usize,
    pub mesh: MeshSpec<T>,
    pub p: T,
    pub alpha: T,
    pub phi: T,
}

impl<T: Real> SolutionGrid<T> {
    /// Grid holding only the regularized initial layer.
    ///
    /// Every node of layer 0, the one at `u = 0` included, is set to
    /// `tau0^(-alpha)` so that the recovered concentration is 1 there; the
    /// boundary value `cbar(0, tau) = 0` applies from layer 1 on.
    pub fn initial(mesh: MeshSpec<T>, p: T, alpha: T, phi: T) -> Self {
        let mut layers = Array2::zeros((mesh.n + 1, mesh.m + 1));
        let start = mesh.tau0.powf(-alpha);
        layers.row_mut(0).fill(start);
        SolutionGrid {
            layers,
            populated: 1,
            mesh,
            p,
            alpha,
            phi,
        }
    }

    pub fn m(&self) -> usize {
        self.mesh.m
    }

    pub fn n(&self) -> usize {
        self.mesh.n
    }

    /// Number of leading time layers that hold values.
    pub fn populated(&self) -> usize {
        self.populated
    }

    pub fn cbar(&self, i: usize, j: usize) -> T {
        self.layers[[j, i]]
    }

    /// `cbar` as an `(m+1) x (n+1)` view, space along rows.
    pub fn cbar_matrix(&self) -> ArrayView2<'_, T> {
        self.layers.t()
    }

    pub fn layer(&self, j: usize) -> ArrayView1<'_, T> {
        self.layers.index_axis(Axis(0), j)
    }

    pub fn tau(&self, j: usize) -> T {
        self.mesh.tau(j)
    }

    /// Recovered concentration `c_{i,j} = cbar_{i,j} tau_j^alpha`.
    pub fn concentration(&self, i: usize, j: usize) -> T {
        self.cbar(i, j) * self.tau(j).powf(self.alpha)
    }

    fn push_layer(&mut self, values: &[T]) {
        let j = self.populated;
        self.layers
            .row_mut(j)
            .iter_mut()
            .zip(values)
            .for_each(|(dst, &v)| *dst = v);
        self.populated += 1;
    }
}

/// Linear system `A cbar_{k+1} = B` for the interior nodes of one layer.
#[derive(Debug, Clone, PartialEq)]
pub struct LayerSystem<T> {
    pub matrix: Tridiagonal<T>,
    pub rhs: Vec<T>,
    /// Dirichlet values `(cbar_{0,k+1}, cbar_{m,k+1})` already folded into `rhs`.
    pub boundary: (T, T),
}

/// Assembles the system advancing `grid` from layer `k` to `k + 1`.
/// Layers `0..=k` must be populated.
pub fn assemble_system<T: Real>(grid: &SolutionGrid<T>, k: usize) -> Result<LayerSystem<T>> {
    let mesh = &grid.mesh;
    let (m, alpha, p, phi) = (mesh.m, grid.alpha, grid.p, grid.phi);
    if k >= mesh.n {
        return Err(Error::IndexOutOfRange(format!(
            "cannot advance past the last layer: k = {k}, n = {}",
            mesh.n
        )));
    }
    if grid.populated < k + 1 {
        return Err(Error::UnpopulatedHistory {
            needed: k,
            populated: grid.populated,
        });
    }

    let weights = layer_weights(k, mesh, alpha, p)?;
    let blend = weights.blended(phi);
    let r_implicit = weights.implicit();
    let tau_next = mesh.tau(k + 1);
    let q_next = q_base(k + 1, mesh, alpha);

    let two = T::lit(2.0);
    let diag_value = tau_next.powf(alpha) + two * phi * r_implicit;
    let interior = m - 1;
    let mut sub = Vec::with_capacity(interior - 1);
    let mut sup = Vec::with_capacity(interior - 1);
    for i in 1..m {
        let q = q_next * T::of(i);
        if i > 1 {
            sub.push(-phi * r_implicit + q);
        }
        if i < m - 1 {
            sup.push(-phi * r_implicit - q);
        }
    }

    // initial term: cbar_{i,0} tau0^alpha
    let tau0_pow = mesh.tau0.powf(alpha);
    let first = grid.layer(0);
    let mut rhs: Vec<T> = (1..m).map(|i| first[i] * tau0_pow).collect();

    for (j, &bw) in blend.iter().enumerate() {
        let col = grid.layer(j);
        for (i, b) in (1..m).zip(rhs.iter_mut()) {
            *b = *b + bw * (col[i + 1] - two * col[i] + col[i - 1]);
        }
    }
    for j in 1..=k {
        let qb = q_base(j, mesh, alpha);
        let col = grid.layer(j);
        for (i, b) in (1..m).zip(rhs.iter_mut()) {
            *b = *b + qb * T::of(i) * (col[i + 1] - col[i - 1]);
        }
    }

    let left = T::zero();
    let right = tau_next.powf(-alpha);
    let a1_first = -phi * r_implicit + q_next;
    let a3_last = -phi * r_implicit - q_next * T::of(m - 1);
    rhs[0] = rhs[0] - a1_first * left;
    rhs[interior - 1] = rhs[interior - 1] - a3_last * right;

    Ok(LayerSystem {
        matrix: Tridiagonal::new(sub, vec![diag_value; interior], sup)?,
        rhs,
        boundary: (left, right),
    })
}

/// Runs the scheme over every time layer of `mesh` with blend parameter `phi`.
pub fn march<T: Real>(
    params: &ModelParams<T>,
    mesh: &MeshSpec<T>,
    p: T,
    phi: T,
) -> Result<SolutionGrid<T>> {
    if !(phi >= T::zero() && phi <= T::one()) {
        return Err(Error::Domain(format!("phi must lie in [0, 1], got {phi}")));
    }
    if !(p > T::zero()) {
        return Err(Error::Domain(format!("p must be positive, got {p}")));
    }
    let mut grid = SolutionGrid::initial(*mesh, p, params.alpha, phi);
    let mut layer = vec![T::zero(); mesh.m + 1];
    for k in 0..mesh.n {
        let system = assemble_system(&grid, k)?;
        let interior = system.matrix.solve(&system.rhs)?;
        layer[0] = system.boundary.0;
        layer[1..mesh.m].copy_from_slice(&interior);
        layer[mesh.m] = system.boundary.1;
        grid.push_layer(&layer);
    }
    Ok(grid)
}

/// Physical coordinates and concentrations of a solved grid.
#[derive(Debug, Clone, PartialEq)]
pub struct PhysicalGrid<T> {
    pub u: Vec<T>,
    /// scheme times, `tau0` at `j = 0`
    pub tau: Vec<T>,
    /// `x_{i,j} = u_i p tau_j^(alpha/2)`, shape `(m+1, n+1)`
    pub x: Array2<T>,
    /// `c_{i,j} = cbar_{i,j} tau_j^alpha`, shape `(m+1, n+1)`
    pub c: Array2<T>,
}

pub fn recover<T: Real>(grid: &SolutionGrid<T>) -> PhysicalGrid<T> {
    let (m, n) = (grid.m(), grid.n());
    let u: Vec<T> = (0..=m).map(|i| grid.mesh.u(i)).collect();
    let tau: Vec<T> = (0..=n).map(|j| grid.tau(j)).collect();
    let half = grid.alpha * T::lit(0.5);
    let x = Array2::from_shape_fn((m + 1, n + 1), |(i, j)| u[i] * grid.p * tau[j].powf(half));
    let c = Array2::from_shape_fn((m + 1, n + 1), |(i, j)| {
        grid.cbar(i, j) * tau[j].powf(grid.alpha)
    });
    PhysicalGrid { u, tau, x, c }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scheme::mesh::build_mesh;
    use crate::scheme::weights::{weight_q, weight_r, weight_w};
    use approx::assert_relative_eq;

    fn setup(alpha: f64, m: usize, n: usize, p: f64) -> (ModelParams<f64>, MeshSpec<f64>) {
        let params = ModelParams::new(alpha, 1.0 / 3.0).unwrap();
        let mesh = build_mesh(m, n, p, alpha, 1e-3).unwrap();
        (params, mesh)
    }

    #[test]
    fn rectangle_only_decouples_diffusion() {
        let (_, mesh) = setup(0.5, 6, 10, 0.6);
        let grid = SolutionGrid::initial(mesh, 0.6, 0.5, 0.0);
        let sys = assemble_system(&grid, 0).unwrap();
        let tau1 = mesh.tau(1).powf(0.5);
        for &d in &sys.matrix.diag {
            assert_eq!(d, tau1);
        }
        for (idx, &a1) in sys.matrix.sub.iter().enumerate() {
            assert_relative_eq!(
                a1,
                weight_q(idx + 2, 1, &mesh, 0.5).unwrap(),
                max_relative = 1e-15
            );
        }
        for (idx, &a3) in sys.matrix.sup.iter().enumerate() {
            assert_relative_eq!(
                a3,
                -weight_q(idx + 1, 1, &mesh, 0.5).unwrap(),
                max_relative = 1e-15
            );
        }
    }

    #[test]
    fn first_layer_by_hand() {
        // m = 3, k = 0, alpha = 1, phi = 1: two interior unknowns
        let p = 0.9;
        let (_, mesh) = setup(1.0, 3, 5, p);
        let grid = SolutionGrid::initial(mesh, p, 1.0, 1.0);
        let sys = assemble_system(&grid, 0).unwrap();

        let dt = mesh.delta_tau;
        let tau1 = dt;
        let r11 = dt / 2.0 / (p * p * (1.0 / 3.0_f64).powi(2));
        let q = |i: f64| i * dt / 4.0;
        let dense = [
            [tau1 + 2.0 * r11, -r11 - q(1.0)],
            [-r11 + q(2.0), tau1 + 2.0 * r11],
        ];
        let d = sys.matrix.to_dense();
        for a in 0..2 {
            for b in 0..2 {
                assert_relative_eq!(d[a][b], dense[a][b], max_relative = 1e-14);
            }
        }
        // constant initial layer: every second difference vanishes, so the
        // history contributes only cbar tau0^alpha = 1
        let right = 1.0 / tau1;
        let b = [1.0, 1.0 - (-r11 - q(2.0)) * right];
        assert_relative_eq!(sys.rhs[0], b[0], max_relative = 1e-12);
        assert_relative_eq!(sys.rhs[1], b[1], max_relative = 1e-12);
        assert_eq!(sys.boundary, (0.0, right));
    }

    #[test]
    fn rhs_matches_pointwise_formula() {
        let (alpha, p, phi) = (0.5, 0.62, 0.4);
        let (params, mesh) = setup(alpha, 6, 9, p);
        let grid = march(&params, &mesh, p, phi).unwrap();
        let k = 5;
        let sys = assemble_system(&grid, k).unwrap();
        for i in 1..6usize {
            let sd = |j: usize| grid.cbar(i + 1, j) - 2.0 * grid.cbar(i, j) + grid.cbar(i - 1, j);
            let cd = |j: usize| grid.cbar(i + 1, j) - grid.cbar(i - 1, j);
            let mut b = grid.cbar(i, 0) * mesh.tau0.powf(alpha);
            for j in 0..=k {
                let wt = phi * weight_r(j, k, &mesh, alpha, p).unwrap()
                    + (1.0 - phi) * weight_w(j, k, &mesh, alpha, p).unwrap();
                b += wt * sd(j);
            }
            for j in 1..=k {
                b += weight_q(i, j, &mesh, alpha).unwrap() * cd(j);
            }
            if i == 5 {
                let r = weight_r(k + 1, k, &mesh, alpha, p).unwrap();
                let a3 = -phi * r - weight_q(5, k + 1, &mesh, alpha).unwrap();
                b -= a3 * grid.cbar(6, k + 1);
            }
            assert_relative_eq!(sys.rhs[i - 1], b, max_relative = 1e-11);
        }
    }

    #[test]
    fn unpopulated_history_rejected() {
        let (_, mesh) = setup(0.5, 4, 6, 0.6);
        let grid = SolutionGrid::initial(mesh, 0.6, 0.5, 1.0);
        assert!(matches!(
            assemble_system(&grid, 2),
            Err(Error::UnpopulatedHistory { .. })
        ));
        assert!(assemble_system(&grid, 6).is_err());
    }

    #[test]
    fn boundary_layers_imposed() {
        let (params, mesh) = setup(0.75, 10, 30, 0.67);
        let grid = march(&params, &mesh, 0.67, 0.8).unwrap();
        assert_eq!(grid.populated(), 31);
        for j in 1..=30 {
            assert_eq!(grid.cbar(0, j), 0.0);
            assert_relative_eq!(grid.concentration(10, j), 1.0, max_relative = 1e-14);
        }
    }

    #[test]
    fn recover_formulas() {
        let p = 0.67;
        let (params, mesh) = setup(0.75, 10, 30, p);
        let grid = march(&params, &mesh, p, 0.8).unwrap();
        let phys = recover(&grid);
        for j in 1..=30 {
            assert_eq!(phys.x[[0, j]], 0.0);
            assert_eq!(phys.c[[0, j]], 0.0);
            assert_relative_eq!(
                phys.x[[10, j]],
                p * mesh.tau(j).powf(0.375),
                max_relative = 1e-15
            );
        }
        let (i, j) = (4, 17);
        assert_eq!(phys.c[[i, j]], grid.cbar(i, j) * mesh.tau(j).powf(0.75));
        assert_eq!(grid.cbar_matrix()[[i, j]], grid.cbar(i, j));
    }

    #[test]
    fn phi_domain() {
        let (params, mesh) = setup(0.5, 4, 4, 0.6);
        assert!(march(&params, &mesh, 0.6, 1.5).is_err());
        assert!(march(&params, &mesh, 0.6, -0.1).is_err());
    }

    #[test]
    fn single_precision_march() {
        let params = ModelParams::new(0.5_f32, 1.0 / 3.0).unwrap();
        let mesh = build_mesh(20, 60, 0.598_f32, 0.5, 1e-3).unwrap();
        let grid = march(&params, &mesh, 0.598, 1.0).unwrap();
        let c = grid.concentration(10, 60);
        assert!(c > 0.0 && c < 1.0);
    }
}
