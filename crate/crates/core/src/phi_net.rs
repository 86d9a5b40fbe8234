//! Fixed 3-5-5-1 feed-forward network predicting the quadrature blend
//! parameter `phi` from `(du, lambda, alpha)`, and the calibration
//! functional whose minimizers served as its training targets.
//!
//! The forward pass treats activations as row vectors multiplied on the
//! right by the weight matrices; the last row of every matrix is the bias
//! row, fed by the constant 1 that [`append_bias`] appends.

use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::analytic::{similarity_profile, ModelParams};
use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::scheme::{march, MeshSpec};
use crate::special_fn::WrightOptions;

/// Input layer `[du, lambda, alpha, 1]` to first hidden layer.
pub const W1: [[f64; 5]; 4] = [
    [6.02145, 2.14126, 0.677927, -13.8801, 1.52535],
    [-0.514316, 0.150222, -0.853299, 0.162208, -0.88522],
    [0.80747, -7.26578, -0.0383236, -0.307713, -5.98303],
    [-0.140854, 2.3685, 0.0361885, -0.284572, 5.68518],
];

pub const W2: [[f64; 5]; 6] = [
    [-7.18748, -2.4983, -0.72953, -1.40697, 0.748731],
    [-8.66802, -2.94062, 0.0381687, -0.909638, 0.268698],
    [-1.77908, 0.0049326, -4.28149, -0.264405, 0.382544],
    [11.2767, 2.75494, -1.16368, -2.87708, -1.78879],
    [-7.43406, -1.53303, -1.25246, -1.20859, 1.33437],
    [-0.590041, -0.72953, 1.50501, -2.31013, -0.662821],
];

pub const W3: [[f64; 1]; 6] = [
    [10.4966],
    [3.34645],
    [3.03464],
    [4.17581],
    [-3.59841],
    [-0.490178],
];

/// Entry sums of the published matrices, taken in exact decimal arithmetic.
pub const CHECKSUMS: [f64; 3] = [-10.5774521, -33.9016507, 16.964912];

/// Network weights in row-major form; serializes as
/// `{"W1": [[..]], "W2": [[..]], "W3": [[..]]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhiNetWeights {
    #[serde(rename = "W1")]
    pub w1: Vec<Vec<f64>>,
    #[serde(rename = "W2")]
    pub w2: Vec<Vec<f64>>,
    #[serde(rename = "W3")]
    pub w3: Vec<Vec<f64>>,
}

fn to_rows<const C: usize>(rows: &[[f64; C]]) -> Vec<Vec<f64>> {
    rows.iter().map(|r| r.to_vec()).collect()
}

fn check_shape(name: &str, w: &[Vec<f64>], rows: usize, cols: usize) -> Result<()> {
    if w.len() != rows || w.iter().any(|r| r.len() != cols) {
        return Err(Error::Domain(format!("{name} must be {rows}x{cols}")));
    }
    Ok(())
}

impl PhiNetWeights {
    pub fn published() -> Self {
        PhiNetWeights {
            w1: to_rows(&W1),
            w2: to_rows(&W2),
            w3: to_rows(&W3),
        }
    }

    pub fn validate(&self) -> Result<()> {
        check_shape("W1", &self.w1, 4, 5)?;
        check_shape("W2", &self.w2, 6, 5)?;
        check_shape("W3", &self.w3, 6, 1)
    }

    pub fn checksums(&self) -> [f64; 3] {
        let sum = |w: &[Vec<f64>]| w.iter().flatten().sum::<f64>();
        [sum(&self.w1), sum(&self.w2), sum(&self.w3)]
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain numeric arrays serialize")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let w: PhiNetWeights =
            serde_json::from_str(text).map_err(|e| Error::Domain(format!("weights JSON: {e}")))?;
        w.validate()?;
        Ok(w)
    }

    /// `Sig(psi(Sig(psi(Tanh([du, lambda, alpha, 1] W1)) W2)) W3)`
    pub fn forward<T: Real>(&self, delta_u: T, lambda: T, alpha: T) -> T {
        let input = append_bias(&[delta_u, lambda, alpha]);
        let h1 = act_tanh(&row_times(&input, &self.w1));
        let h2 = act_sig(&row_times(&append_bias(&h1), &self.w2));
        act_sig(&row_times(&append_bias(&h2), &self.w3))[0]
    }
}

fn published() -> &'static PhiNetWeights {
    static WEIGHTS: OnceLock<PhiNetWeights> = OnceLock::new();
    WEIGHTS.get_or_init(PhiNetWeights::published)
}

/// Row vector times matrix.
fn row_times<T: Real>(v: &[T], w: &[Vec<f64>]) -> Vec<T> {
    debug_assert_eq!(v.len(), w.len());
    let cols = w.first().map_or(0, Vec::len);
    (0..cols)
        .map(|c| {
            v.iter()
                .zip(w)
                .fold(T::zero(), |acc, (&x, row)| acc + x * T::lit(row[c]))
        })
        .collect()
}

pub fn act_tanh<T: Real>(v: &[T]) -> Vec<T> {
    v.iter().map(|x| x.tanh()).collect()
}

pub fn act_sig<T: Real>(v: &[T]) -> Vec<T> {
    v.iter()
        .map(|&x| T::one() / (T::one() + (-x).exp()))
        .collect()
}

pub fn append_bias<T: Real>(v: &[T]) -> Vec<T> {
    let mut out = Vec::with_capacity(v.len() + 1);
    out.extend_from_slice(v);
    out.push(T::one());
    out
}

/// Blend parameter predicted by the published network.
pub fn predict_phi<T: Real>(delta_u: T, lambda: T, alpha: T) -> T {
    published().forward(delta_u, lambda, alpha)
}

/// Sum over all mesh nodes of `|c_num(phi) - c_exact|`, with the scheme
/// run at the similarity coefficient `p_exact`.
pub fn calibration_objective<T: Real>(
    params: &ModelParams<T>,
    mesh: &MeshSpec<T>,
    p_exact: T,
    phi: T,
) -> Result<T> {
    let exact = exact_profile(params, mesh, p_exact)?;
    objective_against(params, mesh, p_exact, phi, &exact)
}

/// Exact concentration at `u_i`. The similarity solution does not depend
/// on time along lines of constant `u`, so one value per node suffices.
fn exact_profile<T: Real>(params: &ModelParams<T>, mesh: &MeshSpec<T>, p: T) -> Result<Vec<T>> {
    let opts = WrightOptions::for_type::<T>();
    (0..=mesh.m)
        .map(|i| similarity_profile(mesh.u(i) * p, p, params.alpha, &opts))
        .collect()
}

fn objective_against<T: Real>(
    params: &ModelParams<T>,
    mesh: &MeshSpec<T>,
    p: T,
    phi: T,
    exact: &[T],
) -> Result<T> {
    let grid = march(params, mesh, p, phi)?;
    let mut total = T::zero();
    for j in 0..=mesh.n {
        for (i, &e) in exact.iter().enumerate() {
            total = total + (grid.concentration(i, j) - e).abs();
        }
    }
    Ok(total)
}

/// Golden-section minimization of `f` between `a` and `b` (either order)
/// until the bracket is narrower than `tol`. Returns `(x, f(x))`.
pub fn golden_section_min<T, F>(mut f: F, a: T, b: T, tol: T) -> Result<(T, T)>
where
    T: Real,
    F: FnMut(T) -> Result<T>,
{
    let inv_phi = (T::lit(5.0).sqrt() - T::one()) * T::lit(0.5);
    let (mut a, mut b) = (a, b);
    let mut c = b - (b - a) * inv_phi;
    let mut d = a + (b - a) * inv_phi;
    let mut fc = f(c)?;
    let mut fd = f(d)?;
    while (b - a).abs() > tol {
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - (b - a) * inv_phi;
            fc = f(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + (b - a) * inv_phi;
            fd = f(d)?;
        }
    }
    Ok(if fc <= fd { (c, fc) } else { (d, fd) })
}

/// Outcome of [`calibrate_phi_detailed`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Calibration<T> {
    pub phi: T,
    pub objective: T,
    /// `(phi, F(phi))` on the coarse scan
    pub scan: Vec<(T, T)>,
}

pub const SCAN_POINTS: usize = 101;
pub const CALIBRATION_TOL: f64 = 1e-3;

/// Minimizer of the calibration functional over `phi` in `[0, 1]`.
pub fn calibrate_phi<T: Real>(
    params: &ModelParams<T>,
    mesh: &MeshSpec<T>,
    p_exact: T,
) -> Result<T> {
    calibrate_phi_detailed(params, mesh, p_exact).map(|c| c.phi)
}

/// Coarse scan with step 0.01 to pick the basin, then golden-section
/// refinement inside the neighbouring scan cells.
pub fn calibrate_phi_detailed<T: Real>(
    params: &ModelParams<T>,
    mesh: &MeshSpec<T>,
    p_exact: T,
) -> Result<Calibration<T>> {
    let exact = exact_profile(params, mesh, p_exact)?;
    let mut objective = |phi: T| objective_against(params, mesh, p_exact, phi, &exact);

    let step = T::one() / T::of(SCAN_POINTS - 1);
    let mut scan = Vec::with_capacity(SCAN_POINTS);
    for s in 0..SCAN_POINTS {
        let phi = (T::of(s) * step).min(T::one());
        scan.push((phi, objective(phi)?));
    }
    let (best_idx, &(best_phi, best_f)) = scan
        .iter()
        .enumerate()
        .min_by(|a, b| a.1 .1.partial_cmp(&b.1 .1).expect("finite objective"))
        .expect("non-empty scan");

    let lo = scan[best_idx.saturating_sub(1)].0;
    let hi = scan[(best_idx + 1).min(SCAN_POINTS - 1)].0;
    let (phi, f) = golden_section_min(&mut objective, lo, hi, T::lit(CALIBRATION_TOL))?;
    let (phi, objective) = if f <= best_f {
        (phi, f)
    } else {
        (best_phi, best_f)
    };
    Ok(Calibration {
        phi,
        objective,
        scan,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn shapes_and_checksums() {
        let w = PhiNetWeights::published();
        w.validate().unwrap();
        for (got, want) in w.checksums().iter().zip(CHECKSUMS) {
            assert_relative_eq!(*got, want, max_relative = 1e-12);
        }
    }

    #[test]
    fn json_round_trip() {
        let w = PhiNetWeights::published();
        let text = w.to_json();
        assert!(text.contains("\"W1\"") && text.contains("\"W3\""));
        assert_eq!(PhiNetWeights::from_json(&text).unwrap(), w);
        assert!(PhiNetWeights::from_json(r#"{"W1": [[1.0]], "W2": [], "W3": []}"#).is_err());
    }

    #[test]
    fn activations() {
        assert_eq!(act_tanh(&[0.0_f64, 0.0, 0.0]), vec![0.0, 0.0, 0.0]);
        let t = act_tanh(&[1e3_f64, -1e3]);
        assert!((t[0] - 1.0).abs() < 1e-12 && (t[1] + 1.0).abs() < 1e-12);
        let t = act_tanh(&[0.5_f64, -0.5]);
        assert_relative_eq!(t[0], 0.462_117_157_260_01, max_relative = 1e-13);
        assert_relative_eq!(t[1], -0.462_117_157_260_01, max_relative = 1e-13);

        assert_eq!(act_sig(&[0.0_f64]), vec![0.5]);
        assert_relative_eq!(
            act_sig(&[1.0_f64])[0],
            0.731_058_578_630_005,
            max_relative = 1e-14
        );
        for x in [-7.5_f64, -0.3, 0.0, 2.2, 30.0] {
            let s = act_sig(&[x, -x]);
            assert_relative_eq!(s[0] + s[1], 1.0, max_relative = 1e-15);
        }
    }

    #[test]
    fn bias_append() {
        assert_eq!(append_bias(&[2.0_f64, 3.0]), vec![2.0, 3.0, 1.0]);
        assert_eq!(append_bias::<f64>(&[]), vec![1.0]);
    }

    #[test]
    fn prediction_regressions() {
        // numpy row-vector chain
        assert_relative_eq!(
            predict_phi(0.005_f64, 2.0, 0.5),
            0.999_999_788_838_016_5,
            max_relative = 1e-12
        );
        assert_relative_eq!(
            predict_phi(1.0 / 25.0_f64, 0.25, 0.2),
            0.309_249_098_068_607_3,
            max_relative = 1e-12
        );
        let v = predict_phi(0.0125_f32, 1.0 / 3.0, 0.25);
        assert!((v - 0.377_451_17).abs() < 1e-5);
    }

    #[test]
    fn golden_section_quadratic_both_orientations() {
        let f = |x: f64| Ok((x - 0.37) * (x - 0.37));
        let (a, _) = golden_section_min(f, 0.0, 1.0, 1e-6).unwrap();
        let (b, _) = golden_section_min(f, 1.0, 0.0, 1e-6).unwrap();
        assert!((a - 0.37).abs() < 1e-6 && (b - 0.37).abs() < 1e-6);
    }
}
