use approx::assert_abs_diff_eq;
use fstefan::analytic::{
    exact_concentration, exact_front, front_equation_residual, solve_p_transcendental,
};
use fstefan::special_fn::WrightOptions;
use fstefan::ModelParams64;
use proptest::prelude::*;
use statrs::function::erf::erf;

const LAMBDAS: [f64; 3] = [1.0 / 3.0, 2.0 / 3.0, 1.0];
const ALPHAS: [f64; 4] = [0.25, 0.5, 0.75, 1.0];

fn p_of(alpha: f64, lambda: f64) -> f64 {
    solve_p_transcendental(&ModelParams64::new(alpha, lambda).unwrap(), 1e-12)
        .unwrap()
        .p
}

#[test]
fn classical_limit_satisfies_erf_relation() {
    // alpha = 1: lambda exp(-p^2/4) = p (sqrt(pi)/2) erf(p/2)
    for &lambda in &[0.1, 1.0 / 3.0, 2.0 / 3.0, 1.0, 2.0, 5.0] {
        let p = p_of(1.0, lambda);
        let g = |q: f64| {
            lambda * (-q * q / 4.0).exp() - q * std::f64::consts::PI.sqrt() / 2.0 * erf(q / 2.0)
        };
        // independent bisection on the erf form
        let (mut lo, mut hi) = (1e-6, 6.0);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if g(mid) > 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        assert_abs_diff_eq!(p, 0.5 * (lo + hi), epsilon = 1e-8);
    }
}

#[test]
fn root_is_monotone_across_the_table_grid() {
    for &lambda in &LAMBDAS {
        let row: Vec<f64> = ALPHAS.iter().map(|&a| p_of(a, lambda)).collect();
        assert!(
            row.windows(2).all(|w| w[0] < w[1]),
            "lambda {lambda}: {row:?}"
        );
    }
    for &alpha in &ALPHAS {
        let col: Vec<f64> = LAMBDAS.iter().map(|&l| p_of(alpha, l)).collect();
        assert!(
            col.windows(2).all(|w| w[0] < w[1]),
            "alpha {alpha}: {col:?}"
        );
    }
}

#[test]
fn residual_vanishes_at_root() {
    let opts = WrightOptions::default();
    for &lambda in &LAMBDAS {
        for &alpha in &ALPHAS {
            let params = ModelParams64::new(alpha, lambda).unwrap();
            let p = p_of(alpha, lambda);
            assert!(front_equation_residual(p, &params, &opts).unwrap().abs() < 1e-10);
        }
    }
}

#[test]
fn single_precision_root_is_close() {
    let params = fstefan::ModelParams32::new(0.5, 1.0 / 3.0).unwrap();
    let p32 = solve_p_transcendental(&params, 1e-5).unwrap().p;
    assert!((p32 as f64 - p_of(0.5, 1.0 / 3.0)).abs() < 1e-4);
}

#[test]
fn front_is_self_similar() {
    let (p, alpha) = (0.598238, 0.5);
    for &tau in &[0.01, 0.5, 1.0, 7.8] {
        let s = exact_front(tau, p, alpha);
        assert_abs_diff_eq!(exact_front(tau * 16.0, p, alpha), 2.0 * s, epsilon = 1e-12);
        assert_abs_diff_eq!(
            exact_concentration(s, tau, p, alpha).unwrap(),
            1.0,
            epsilon = 1e-12
        );
    }
}

proptest! {
    #[test]
    fn concentration_is_monotone_and_bounded(
        alpha in 0.2_f64..=1.0,
        lambda in 0.2_f64..3.0,
        tau in 0.01_f64..10.0,
        a in 0.0_f64..=1.0,
        b in 0.0_f64..=1.0,
    ) {
        let p = p_of(alpha, lambda);
        let s = exact_front(tau, p, alpha);
        let (lo, hi) = (a.min(b) * s, a.max(b) * s);
        let c_lo = exact_concentration(lo, tau, p, alpha).unwrap();
        let c_hi = exact_concentration(hi, tau, p, alpha).unwrap();
        prop_assert!(c_lo >= -1e-14 && c_hi <= 1.0 + 1e-12);
        prop_assert!(c_lo <= c_hi + 1e-14);
    }

    #[test]
    fn concentration_depends_on_similarity_variable(
        alpha in 0.2_f64..=1.0,
        u in 0.0_f64..=1.0,
        tau in 0.01_f64..5.0,
    ) {
        let p = p_of(alpha, 1.0);
        let c1 = exact_concentration(u * exact_front(tau, p, alpha), tau, p, alpha).unwrap();
        let c2 = exact_concentration(u * exact_front(4.0 * tau, p, alpha), 4.0 * tau, p, alpha).unwrap();
        prop_assert!((c1 - c2).abs() < 1e-12);
    }
}
