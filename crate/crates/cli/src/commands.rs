//! Command implementations.

use rayon::prelude::*;
use serde::Serialize;

use fstefan::analytic::{exact_concentration, exact_front, solve_p_transcendental};
use fstefan::p_iter::{estimate_p_with, find_p};
use fstefan::phi_net::{calibrate_phi_detailed, predict_phi, Calibration, PhiNetWeights};
use fstefan::scheme::{build_mesh, march, recover};
use fstefan::special_fn::wright;
use fstefan::{FrontResult64, ModelParams64, PIterConfig64, PhiMode64};

use crate::config::{OutputFormat, PhiChoice, Settings};
use crate::format::{csv_document, json_document, sig9};
use crate::{CliError, Result};

pub const TABLE_LAMBDAS: [f64; 3] = [1.0 / 3.0, 2.0 / 3.0, 1.0];
pub const TABLE_ALPHAS: [f64; 4] = [0.25, 0.5, 0.75, 1.0];
/// Residual tolerance of the transcendental solve.
pub const NEWTON_TOL: f64 = 1e-10;

/// Rendered output of a command.
#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub body: String,
    /// false when any requested cell or row failed
    pub ok: bool,
}

fn render<T: Serialize>(
    format: OutputFormat,
    value: &T,
    header: &[&str],
    rows: impl FnOnce() -> Vec<Vec<String>>,
    ok: bool,
) -> Result<Report> {
    let body = match format {
        OutputFormat::Json => json_document(value)?,
        OutputFormat::Csv => csv_document(header, &rows())?,
    };
    Ok(Report { body, ok })
}

fn opt(x: Option<f64>) -> String {
    x.map(sig9).unwrap_or_default()
}

pub fn model(settings: &Settings) -> Result<ModelParams64> {
    Ok(ModelParams64::new(settings.alpha, settings.lambda)?)
}

pub fn p_iter_config(settings: &Settings) -> PIterConfig64 {
    PIterConfig64 {
        epsilon: settings.epsilon,
        tau0_factor: settings.tau0_factor,
        ..PIterConfig64::default()
    }
}

pub fn similarity_p(params: &ModelParams64) -> Result<f64> {
    Ok(solve_p_transcendental(params, NEWTON_TOL)?.p)
}

/// Concrete blend parameter for a run on an `m x n` mesh.
pub fn resolve_phi(
    choice: PhiChoice,
    params: &ModelParams64,
    m: usize,
    n: usize,
    tau0_factor: f64,
) -> Result<f64> {
    Ok(match choice {
        PhiChoice::Network => predict_phi(1.0 / m as f64, params.lambda, params.alpha),
        PhiChoice::Fixed(phi) => phi,
        PhiChoice::Calibrate => {
            let p = similarity_p(params)?;
            let mesh = build_mesh(m, n, p, params.alpha, tau0_factor)?;
            calibrate_phi_detailed(params, &mesh, p)?.phi
        }
    })
}

// ---------------------------------------------------------------- tables

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TableCell {
    pub lambda: f64,
    pub alpha: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub phi: Option<f64>,
    pub p: Option<f64>,
    pub residual: Option<f64>,
    pub iterations: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl TableCell {
    fn from_result(lambda: f64, alpha: f64, phi: Option<f64>, res: Result<FrontResult64>) -> Self {
        match res {
            Ok(r) => TableCell {
                lambda,
                alpha,
                phi,
                p: Some(r.p),
                residual: Some(r.residual),
                iterations: Some(r.iterations),
                error: None,
            },
            Err(e) => TableCell {
                lambda,
                alpha,
                phi,
                p: None,
                residual: None,
                iterations: None,
                error: Some(e.to_string()),
            },
        }
    }
}

fn grid_cells() -> Vec<(f64, f64)> {
    TABLE_LAMBDAS
        .iter()
        .flat_map(|&l| TABLE_ALPHAS.iter().map(move |&a| (l, a)))
        .collect()
}

/// Similarity coefficient for every `(lambda, alpha)` cell.
pub fn table1_cells() -> Vec<TableCell> {
    grid_cells()
        .into_par_iter()
        .map(|(lambda, alpha)| {
            let res = ModelParams64::new(alpha, lambda)
                .and_then(|p| solve_p_transcendental(&p, NEWTON_TOL))
                .map_err(CliError::from);
            TableCell::from_result(lambda, alpha, None, res)
        })
        .collect()
}

/// Iteratively recovered coefficient for every cell.
pub fn tables23_cells(
    choice: PhiChoice,
    m: usize,
    n: usize,
    cfg: &PIterConfig64,
) -> Vec<TableCell> {
    grid_cells()
        .into_par_iter()
        .map(|(lambda, alpha)| {
            let run = || -> Result<(f64, FrontResult64)> {
                let params = ModelParams64::new(alpha, lambda)?;
                let phi = resolve_phi(choice, &params, m, n, cfg.tau0_factor)?;
                Ok((phi, find_p(&params, m, n, PhiMode64::Fixed(phi), cfg)?))
            };
            match run() {
                Ok((phi, r)) => TableCell::from_result(lambda, alpha, Some(phi), Ok(r)),
                Err(e) => TableCell::from_result(lambda, alpha, None, Err(e)),
            }
        })
        .collect()
}

fn table_report(cells: &[TableCell], format: OutputFormat) -> Result<Report> {
    let ok = cells.iter().all(|c| c.error.is_none());
    render(
        format,
        &cells,
        &[
            "lambda",
            "alpha",
            "phi",
            "p",
            "residual",
            "iterations",
            "error",
        ],
        || {
            cells
                .iter()
                .map(|c| {
                    vec![
                        sig9(c.lambda),
                        sig9(c.alpha),
                        opt(c.phi),
                        opt(c.p),
                        opt(c.residual),
                        c.iterations.map(|i| i.to_string()).unwrap_or_default(),
                        c.error.clone().unwrap_or_default(),
                    ]
                })
                .collect()
        },
        ok,
    )
}

pub fn cmd_table1(settings: &Settings) -> Result<Report> {
    table_report(&table1_cells(), settings.format)
}

/// `Fixed(1)` gives the pure-trapezoid scheme, `Network` the blended one.
pub fn cmd_tables23(settings: &Settings, choice: PhiChoice) -> Result<Report> {
    let cfg = p_iter_config(settings);
    table_report(
        &tables23_cells(choice, settings.m, settings.n, &cfg),
        settings.format,
    )
}

// ------------------------------------------------------------ error grid

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ErrorNode {
    pub i: usize,
    pub j: usize,
    pub u: f64,
    pub tau: f64,
    pub x: f64,
    pub c_num: f64,
    pub c_exact: f64,
    pub abs_err: f64,
}

/// Statistics over the computed layers `j >= 1`; layer 0 is the
/// prescribed initial state and is listed but not summarized.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ErrorSummary {
    pub max_abs_err: f64,
    pub mean_abs_err: f64,
    pub argmax_i: usize,
    pub argmax_j: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ErrorGrid {
    pub alpha: f64,
    pub lambda: f64,
    pub m: usize,
    pub n: usize,
    pub p: f64,
    pub phi: f64,
    pub summary: ErrorSummary,
    pub nodes: Vec<ErrorNode>,
}

/// Scheme at the similarity coefficient against the exact solution on every node.
pub fn error_grid(
    params: &ModelParams64,
    m: usize,
    n: usize,
    phi: f64,
    tau0_factor: f64,
) -> Result<ErrorGrid> {
    let p = similarity_p(params)?;
    let mesh = build_mesh(m, n, p, params.alpha, tau0_factor)?;
    let grid = march(params, &mesh, p, phi)?;
    let phys = recover(&grid);

    let mut nodes = Vec::with_capacity((m + 1) * (n + 1));
    for j in 0..=n {
        for i in 0..=m {
            let (x, tau) = (phys.x[[i, j]], phys.tau[j]);
            let c_num = phys.c[[i, j]];
            let c_exact = exact_concentration(x, tau, p, params.alpha)?;
            nodes.push(ErrorNode {
                i,
                j,
                u: phys.u[i],
                tau,
                x,
                c_num,
                c_exact,
                abs_err: (c_num - c_exact).abs(),
            });
        }
    }
    let computed = &nodes[m + 1..];
    let worst = computed
        .iter()
        .max_by(|a, b| a.abs_err.total_cmp(&b.abs_err))
        .expect("n >= 1");
    let summary = ErrorSummary {
        max_abs_err: worst.abs_err,
        mean_abs_err: computed.iter().map(|e| e.abs_err).sum::<f64>() / computed.len() as f64,
        argmax_i: worst.i,
        argmax_j: worst.j,
    };
    Ok(ErrorGrid {
        alpha: params.alpha,
        lambda: params.lambda,
        m,
        n,
        p,
        phi,
        summary,
        nodes,
    })
}

pub fn cmd_error_grid(settings: &Settings) -> Result<Report> {
    let params = model(settings)?;
    let phi = resolve_phi(
        settings.phi,
        &params,
        settings.m,
        settings.n,
        settings.tau0_factor,
    )?;
    let eg = error_grid(&params, settings.m, settings.n, phi, settings.tau0_factor)?;
    render(
        settings.format,
        &eg,
        &[
            "kind", "i", "j", "u", "tau", "x", "c_num", "c_exact", "abs_err",
        ],
        || {
            let mut rows: Vec<Vec<String>> = eg
                .nodes
                .iter()
                .map(|e| {
                    vec![
                        "node".into(),
                        e.i.to_string(),
                        e.j.to_string(),
                        sig9(e.u),
                        sig9(e.tau),
                        sig9(e.x),
                        sig9(e.c_num),
                        sig9(e.c_exact),
                        sig9(e.abs_err),
                    ]
                })
                .collect();
            let s = eg.summary;
            let mut max_row = vec![String::new(); 9];
            max_row[0] = "max".into();
            max_row[1] = s.argmax_i.to_string();
            max_row[2] = s.argmax_j.to_string();
            max_row[8] = sig9(s.max_abs_err);
            let mut mean_row = vec![String::new(); 9];
            mean_row[0] = "mean".into();
            mean_row[8] = sig9(s.mean_abs_err);
            rows.push(max_row);
            rows.push(mean_row);
            rows
        },
        true,
    )
}

// -------------------------------------------------------------- profile

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProfileRow {
    pub x: f64,
    pub c_num: f64,
    pub c_exact: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Profile {
    pub j: usize,
    pub tau: f64,
    pub p: f64,
    pub phi: f64,
    pub rows: Vec<ProfileRow>,
}

/// Concentration along the time layer nearest `tau`.
pub fn profile(
    params: &ModelParams64,
    m: usize,
    n: usize,
    phi: f64,
    tau: f64,
    tau0_factor: f64,
) -> Result<Profile> {
    let p = similarity_p(params)?;
    let mesh = build_mesh(m, n, p, params.alpha, tau0_factor)?;
    if !(tau >= 0.0 && tau <= mesh.tau_star * (1.0 + 1e-12)) {
        return Err(CliError::Config(format!(
            "--tau must lie in [0, tau* = {}], got {tau}",
            mesh.tau_star
        )));
    }
    let grid = march(params, &mesh, p, phi)?;
    let phys = recover(&grid);
    let j = mesh.nearest_layer(tau);
    let rows = (0..=m)
        .map(|i| {
            let x = phys.x[[i, j]];
            Ok(ProfileRow {
                x,
                c_num: phys.c[[i, j]],
                c_exact: exact_concentration(x, phys.tau[j], p, params.alpha)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Profile {
        j,
        tau: phys.tau[j],
        p,
        phi,
        rows,
    })
}

pub fn cmd_profile(settings: &Settings) -> Result<Report> {
    let params = model(settings)?;
    let phi = resolve_phi(
        settings.phi,
        &params,
        settings.m,
        settings.n,
        settings.tau0_factor,
    )?;
    let tau = match settings.tau {
        Some(t) => t,
        None => {
            build_mesh(
                settings.m,
                settings.n,
                similarity_p(&params)?,
                params.alpha,
                settings.tau0_factor,
            )?
            .tau_star
        }
    };
    let prof = profile(
        &params,
        settings.m,
        settings.n,
        phi,
        tau,
        settings.tau0_factor,
    )?;
    render(
        settings.format,
        &prof,
        &["x", "c_num", "c_exact"],
        || {
            prof.rows
                .iter()
                .map(|r| vec![sig9(r.x), sig9(r.c_num), sig9(r.c_exact)])
                .collect()
        },
        true,
    )
}

// ---------------------------------------------------------------- front

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FrontRow {
    pub j: usize,
    pub tau: f64,
    pub s_num: f64,
    pub s_exact: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FrontTrack {
    pub p_found: f64,
    pub p_exact: f64,
    pub phi: f64,
    pub rows: Vec<FrontRow>,
}

/// Front positions on the exact mesh (`tau* = p_exact^(-2/alpha)`) for the
/// iteratively found and the similarity coefficient.
pub fn front_track(
    params: &ModelParams64,
    m: usize,
    n: usize,
    phi: f64,
    cfg: &PIterConfig64,
) -> Result<FrontTrack> {
    let p_exact = similarity_p(params)?;
    let p_found = find_p(params, m, n, PhiMode64::Fixed(phi), cfg)?.p;
    let mesh = build_mesh(m, n, p_exact, params.alpha, cfg.tau0_factor)?;
    let rows = (0..=n)
        .map(|j| {
            let tau = mesh.node_tau(j);
            FrontRow {
                j,
                tau,
                s_num: exact_front(tau, p_found, params.alpha),
                s_exact: exact_front(tau, p_exact, params.alpha),
            }
        })
        .collect();
    Ok(FrontTrack {
        p_found,
        p_exact,
        phi,
        rows,
    })
}

pub fn cmd_front(settings: &Settings) -> Result<Report> {
    let params = model(settings)?;
    let phi = resolve_phi(
        settings.phi,
        &params,
        settings.m,
        settings.n,
        settings.tau0_factor,
    )?;
    let track = front_track(
        &params,
        settings.m,
        settings.n,
        phi,
        &p_iter_config(settings),
    )?;
    render(
        settings.format,
        &track,
        &["j", "tau", "s_num", "s_exact"],
        || {
            track
                .rows
                .iter()
                .map(|r| vec![r.j.to_string(), sig9(r.tau), sig9(r.s_num), sig9(r.s_exact)])
                .collect()
        },
        true,
    )
}

// ------------------------------------------------------- single values

#[derive(Debug, Clone, PartialEq, Serialize)]
struct FindPOutput {
    alpha: f64,
    lambda: f64,
    phi: f64,
    #[serde(flatten)]
    result: FrontResult64,
    #[serde(skip_serializing_if = "Option::is_none")]
    p_without_initial_layer: Option<f64>,
}

pub fn cmd_find_p(settings: &Settings) -> Result<Report> {
    let params = model(settings)?;
    let phi = resolve_phi(
        settings.phi,
        &params,
        settings.m,
        settings.n,
        settings.tau0_factor,
    )?;
    let cfg = p_iter_config(settings);
    let result = find_p(&params, settings.m, settings.n, PhiMode64::Fixed(phi), &cfg)?;
    let p_without_initial_layer = if settings.verbose {
        let mesh = build_mesh(
            settings.m,
            settings.n,
            result.p,
            params.alpha,
            cfg.tau0_factor,
        )?;
        let grid = march(&params, &mesh, result.p, phi)?;
        let alt = estimate_p_with(&grid, params.lambda, false)?;
        eprintln!(
            "layer-0 sensitivity: estimator at p = {} is {} with layer 0, {} without",
            sig9(result.p),
            sig9(estimate_p_with(&grid, params.lambda, true)?),
            sig9(alt)
        );
        Some(alt)
    } else {
        None
    };
    let out = FindPOutput {
        alpha: params.alpha,
        lambda: params.lambda,
        phi,
        result,
        p_without_initial_layer,
    };
    render(
        settings.format,
        &out,
        &["iteration", "p", "phi_of_p", "residual"],
        || {
            out.result
                .trace
                .iter()
                .enumerate()
                .map(|(k, s)| {
                    vec![
                        (k + 1).to_string(),
                        sig9(s.p),
                        sig9(s.phi_of_p),
                        sig9(s.residual),
                    ]
                })
                .collect()
        },
        true,
    )
}

pub fn cmd_solve_p(settings: &Settings) -> Result<Report> {
    let params = model(settings)?;
    let res = solve_p_transcendental(&params, NEWTON_TOL)?;
    render(
        settings.format,
        &res,
        &["alpha", "lambda", "p", "residual", "iterations"],
        || {
            vec![vec![
                sig9(params.alpha),
                sig9(params.lambda),
                sig9(res.p),
                sig9(res.residual),
                res.iterations.to_string(),
            ]]
        },
        true,
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
struct PhiOutput {
    delta_u: f64,
    lambda: f64,
    alpha: f64,
    phi: f64,
}

pub fn cmd_predict_phi(settings: &Settings) -> Result<Report> {
    let delta_u = 1.0 / settings.m as f64;
    let out = PhiOutput {
        delta_u,
        lambda: settings.lambda,
        alpha: settings.alpha,
        phi: predict_phi(delta_u, settings.lambda, settings.alpha),
    };
    render(
        settings.format,
        &out,
        &["delta_u", "lambda", "alpha", "phi"],
        || {
            vec![vec![
                sig9(out.delta_u),
                sig9(out.lambda),
                sig9(out.alpha),
                sig9(out.phi),
            ]]
        },
        true,
    )
}

#[derive(Debug, Clone, PartialEq, Serialize)]
struct CalibrationOutput {
    alpha: f64,
    lambda: f64,
    m: usize,
    n: usize,
    p_exact: f64,
    phi: f64,
    objective: f64,
    scan: Vec<(f64, f64)>,
}

/// Similarity `p` and the blend calibrated on its mesh.
pub fn calibrate(
    params: &ModelParams64,
    m: usize,
    n: usize,
    tau0_factor: f64,
) -> Result<(f64, Calibration<f64>)> {
    let p = similarity_p(params)?;
    let mesh = build_mesh(m, n, p, params.alpha, tau0_factor)?;
    Ok((p, calibrate_phi_detailed(params, &mesh, p)?))
}

pub fn cmd_calibrate_phi(settings: &Settings) -> Result<Report> {
    let params = model(settings)?;
    let (p_exact, cal) = calibrate(&params, settings.m, settings.n, settings.tau0_factor)?;
    let out = CalibrationOutput {
        alpha: params.alpha,
        lambda: params.lambda,
        m: settings.m,
        n: settings.n,
        p_exact,
        phi: cal.phi,
        objective: cal.objective,
        scan: cal.scan,
    };
    render(
        settings.format,
        &out,
        &["alpha", "lambda", "m", "n", "p_exact", "phi", "objective"],
        || {
            vec![vec![
                sig9(out.alpha),
                sig9(out.lambda),
                out.m.to_string(),
                out.n.to_string(),
                sig9(out.p_exact),
                sig9(out.phi),
                sig9(out.objective),
            ]]
        },
        true,
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
struct WrightOutput {
    z: f64,
    gamma: f64,
    delta: f64,
    value: f64,
}

pub fn cmd_wright(z: f64, gamma: f64, delta: f64, format: OutputFormat) -> Result<Report> {
    let out = WrightOutput {
        z,
        gamma,
        delta,
        value: wright(z, gamma, delta)?,
    };
    render(
        format,
        &out,
        &["z", "gamma", "delta", "value"],
        || vec![vec![sig9(z), sig9(gamma), sig9(delta), sig9(out.value)]],
        true,
    )
}

/// Published network weights; always JSON.
pub fn cmd_weights() -> Result<Report> {
    let mut body = PhiNetWeights::published().to_json();
    body.push('\n');
    Ok(Report { body, ok: true })
}

// ---------------------------------------------------------- training set

pub const TRAINING_DELTA_U: [f64; 4] = [1.0 / 25.0, 1.0 / 50.0, 1.0 / 75.0, 1.0 / 100.0];
pub const TRAINING_LAMBDAS: [f64; 12] = [
    0.25, 0.5, 0.75, 1.0, 1.25, 1.5, 1.75, 2.0, 2.25, 2.5, 2.75, 3.0,
];
pub const TRAINING_ALPHAS: [f64; 5] = [0.2, 0.4, 0.6, 0.8, 1.0];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrainingRow {
    pub m: usize,
    pub lambda: f64,
    pub alpha: f64,
    pub phi: Option<f64>,
    pub objective: Option<f64>,
    pub error: Option<String>,
}

/// Calibrated blend parameters over the full training grid, `n = 4m`.
/// Long running.
pub fn cmd_training_set(settings: &Settings) -> Result<Report> {
    let mut jobs = Vec::new();
    for &du in &TRAINING_DELTA_U {
        for &lambda in &TRAINING_LAMBDAS {
            for &alpha in &TRAINING_ALPHAS {
                jobs.push(((1.0 / du).round() as usize, lambda, alpha));
            }
        }
    }
    let rows: Vec<TrainingRow> = jobs
        .into_par_iter()
        .map(|(m, lambda, alpha)| {
            let res = ModelParams64::new(alpha, lambda)
                .map_err(CliError::from)
                .and_then(|p| calibrate(&p, m, 4 * m, settings.tau0_factor));
            match res {
                Ok((_, cal)) => TrainingRow {
                    m,
                    lambda,
                    alpha,
                    phi: Some(cal.phi),
                    objective: Some(cal.objective),
                    error: None,
                },
                Err(e) => TrainingRow {
                    m,
                    lambda,
                    alpha,
                    phi: None,
                    objective: None,
                    error: Some(e.to_string()),
                },
            }
        })
        .collect();
    let ok = rows.iter().all(|r| r.error.is_none());
    render(
        settings.format,
        &rows,
        &["delta_u", "lambda", "alpha", "phi", "objective", "error"],
        || {
            rows.iter()
                .map(|r| {
                    vec![
                        sig9(1.0 / r.m as f64),
                        sig9(r.lambda),
                        sig9(r.alpha),
                        opt(r.phi),
                        opt(r.objective),
                        r.error.clone().unwrap_or_default(),
                    ]
                })
                .collect()
        },
        ok,
    )
}
