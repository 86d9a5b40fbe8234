use fstefan::scheme::{solve_tridiagonal, Tridiagonal};
use fstefan::Error;
use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_dominant(rng: &mut ChaCha8Rng, size: usize) -> Tridiagonal<f64> {
    let sub: Vec<f64> = (0..size - 1).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let sup: Vec<f64> = (0..size - 1).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let diag = (0..size)
        .map(|i| {
            let off = if i > 0 { sub[i - 1].abs() } else { 0.0 }
                + if i + 1 < size { sup[i].abs() } else { 0.0 };
            let sign = if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
            sign * (off + rng.gen_range(0.1..2.0))
        })
        .collect();
    Tridiagonal::new(sub, diag, sup).unwrap()
}

#[test]
fn matches_dense_elimination() {
    let mut rng = ChaCha8Rng::seed_from_u64(20);
    for case in 0..100 {
        let size = 1 + (case * 199) / 99;
        let a = random_dominant(&mut rng, size);
        let b: Vec<f64> = (0..size).map(|_| rng.gen_range(-10.0..10.0)).collect();
        let x = solve_tridiagonal(&a, &b).unwrap();

        let rows = a.to_dense();
        let dense = DMatrix::from_fn(size, size, |i, j| rows[i][j]);
        let oracle = dense
            .clone()
            .lu()
            .solve(&DVector::from_vec(b.clone()))
            .unwrap();
        let residual =
            (&dense * DVector::from_vec(x.clone()) - DVector::from_vec(b.clone())).amax();
        assert!(residual < 1e-12, "case {case}: residual {residual}");
        assert!(a.residual_inf(&x, &b) < 1e-12);
        for (xi, oi) in x.iter().zip(oracle.iter()) {
            assert!((xi - oi).abs() <= 1e-12 * oi.abs().max(1.0));
        }
    }
}

#[test]
fn identity_returns_rhs() {
    let b = vec![1.5, -2.0, 0.25];
    assert_eq!(Tridiagonal::<f64>::identity(3).solve(&b).unwrap(), b);
}

#[test]
fn zero_pivot_is_reported() {
    let a = Tridiagonal::new(vec![1.0], vec![0.0, 1.0], vec![1.0]).unwrap();
    assert!(matches!(a.solve(&[1.0, 1.0]), Err(Error::ZeroPivot(0))));
}

#[test]
fn mismatched_lengths_are_rejected() {
    assert!(Tridiagonal::new(vec![1.0, 2.0], vec![1.0, 1.0], vec![1.0]).is_err());
    let a = Tridiagonal::<f64>::identity(3);
    assert!(a.solve(&[1.0, 2.0]).is_err());
}
