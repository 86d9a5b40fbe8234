use fstefan::scheme::{
    build_mesh, layer_weights, rectangle_coeff, trapezoid_coeff, weight_r, weight_w,
};
use fstefan::special_fn::gamma_fn;

const ALPHAS: [f64; 4] = [0.25, 0.5, 0.75, 1.0];

#[allow(clippy::too_many_arguments)]
fn simpson(
    f: &dyn Fn(f64) -> f64,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> f64 {
    let m = 0.5 * (a + b);
    let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
    let (flm, frm) = (f(lm), f(rm));
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let diff = left + right - whole;
    if depth == 0 || diff.abs() <= 15.0 * tol {
        return left + right + diff / 15.0;
    }
    simpson(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1)
        + simpson(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1)
}

fn adaptive(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    let (fa, fm, fb) = (f(a), f(0.5 * (a + b)), f(b));
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    simpson(f, a, b, fa, fm, fb, whole, tol, 50)
}

/// `int_0^t (t - xi)^(alpha - 1) g(xi) dxi`, with `s = (t - xi)^alpha` removing the singularity.
fn kernel_integral(g: &dyn Fn(f64) -> f64, t: f64, alpha: f64) -> f64 {
    let h = |s: f64| g(t - s.powf(1.0 / alpha)) / alpha;
    adaptive(&h, 0.0, t.powf(alpha), 1e-14)
}

#[test]
fn rectangle_coefficients_telescope() {
    for &alpha in &ALPHAS {
        for k in 0..=100usize {
            let sum: f64 = (0..=k).map(|j| rectangle_coeff(j, k, alpha)).sum();
            let exact = ((k + 1) as f64).powf(alpha);
            assert!(
                (sum - exact).abs() <= 1e-13 * exact,
                "alpha {alpha}, k {k}: {sum} vs {exact}"
            );
        }
    }
}

#[test]
fn rectangle_weights_telescope() {
    let (p, m, n) = (0.7, 10, 120);
    for &alpha in &ALPHAS {
        let mesh = build_mesh(m, n, p, alpha, 1e-3).unwrap();
        let unit = mesh.delta_tau.powf(alpha) / (p * p * gamma_fn(alpha + 1.0).unwrap());
        for k in 0..=100usize {
            let sum: f64 = (0..=k)
                .map(|j| weight_w(j, k, &mesh, alpha, p).unwrap())
                .sum();
            let exact = ((k + 1) as f64).powf(alpha);
            assert!((sum / unit - exact).abs() <= 1e-13 * exact);
        }
    }
}

#[test]
fn trapezoid_integrates_linear_functions() {
    let linears: [(f64, f64); 3] = [(1.0, 0.0), (0.0, 1.0), (2.5, -0.75)];
    for &alpha in &ALPHAS {
        for k in 0..=50usize {
            let t = (k + 1) as f64;
            for &(a, b) in &linears {
                let g = |xi: f64| a + b * xi;
                let quad: f64 = (0..=k + 1)
                    .map(|j| trapezoid_coeff(j, k, alpha) * g(j as f64))
                    .sum();
                let oracle = kernel_integral(&g, t, alpha);
                assert!(
                    (quad - oracle).abs() <= 1e-10 * oracle.abs().max(1.0),
                    "alpha {alpha}, k {k}, g = {a} + {b} xi: {quad} vs {oracle}"
                );
            }
        }
    }
}

#[test]
fn trapezoid_coefficients_sum_to_kernel_mass() {
    for &alpha in &ALPHAS {
        for k in 0..=50usize {
            let sum: f64 = (0..=k + 1).map(|j| trapezoid_coeff(j, k, alpha)).sum();
            let exact = ((k + 1) as f64).powf(alpha) / alpha;
            assert!((sum - exact).abs() <= 1e-12 * exact);
        }
    }
}

#[test]
fn layer_weights_agree_with_single_lookups() {
    let mesh = build_mesh(8, 30, 0.6, 0.5, 1e-3).unwrap();
    for k in [0usize, 1, 7, 29] {
        let lw = layer_weights(k, &mesh, 0.5, 0.6).unwrap();
        assert_eq!(lw.r.len(), k + 2);
        assert_eq!(lw.w.len(), k + 1);
        for j in 0..=k + 1 {
            assert_eq!(lw.r[j], weight_r(j, k, &mesh, 0.5, 0.6).unwrap());
        }
        for j in 0..=k {
            assert_eq!(lw.w[j], weight_w(j, k, &mesh, 0.5, 0.6).unwrap());
        }
        let pure = lw.blended(1.0);
        assert_eq!(&pure[..], &lw.r[..k + 1]);
    }
}
