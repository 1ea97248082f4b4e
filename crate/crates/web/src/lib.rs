//! Browser bindings: convergence curves, a 3-point simplex projection and the
//! schedule calculator. Every export is a plain function so it also runs natively.

use wasm_bindgen::prelude::*;

use gsmm_core::data::parse_libsvm_str;
use gsmm_core::problems::{DroParams, NoiseModel, SyntheticProblem};
use gsmm_core::{
    derive_constants, project, run, schedule, Algorithm, DualDomain, HyperParams, MinimaxProblem, ProblemConstants,
    RunConfig, RunRecord, ScheduleRequest, ScheduleSource,
};

const DIABETES: &str = include_str!("../../../data/diabetes");
/// Curves are downsampled to at most this many points.
pub const MAX_POINTS: usize = 400;
pub const MAX_ITERS: u32 = 200_000;

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

fn problem(name: &str) -> Result<Box<dyn MinimaxProblem>, String> {
    match name {
        "diabetes" => {
            let d = parse_libsvm_str(DIABETES, "diabetes").map_err(err)?;
            Ok(Box::new(d.to_dro(DroParams::default()).map_err(err)?))
        }
        "synthetic" => Ok(Box::new(
            SyntheticProblem::identity(5, 1.0, 0.1)
                .and_then(|p| {
                    p.with_noise(
                        NoiseModel::Gaussian {
                            sigma_x: 1.0,
                            sigma_y: 1.0,
                        },
                        64,
                        0,
                    )
                })
                .map_err(err)?,
        )),
        other => Err(format!("unknown problem '{other}' (diabetes or synthetic)")),
    }
}

/// `‖∇Φ‖` curves for NSGDA-M (batch 1), NSGDA and SGDA (batch `batch`), laid out as
/// `[points, record_every, nsgda-m..., nsgda..., sgda...]`. Aborted runs pad with NaN.
#[wasm_bindgen]
#[allow(clippy::too_many_arguments)]
pub fn convergence_curves(
    problem_name: &str,
    iters: u32,
    eta_x: f64,
    eta_y: f64,
    beta: f64,
    batch: u32,
    seed: u32,
) -> Result<Vec<f64>, String> {
    if iters == 0 || iters > MAX_ITERS {
        return Err(format!("iterations must be in 1..={MAX_ITERS}"));
    }
    let p = problem(problem_name)?;
    let iters = iters as usize;
    let every = iters.div_ceil(MAX_POINTS);
    let points = iters.div_ceil(every);
    let x0 = match problem_name {
        "synthetic" => vec![1.0; p.dim_x()],
        _ => vec![0.0; p.dim_x()],
    };
    let y0 = p.dual_domain().center();
    let mut out = vec![points as f64, every as f64];
    for algo in Algorithm::ALL {
        let b = if algo == Algorithm::NsgdaM {
            1
        } else {
            batch.max(1) as usize
        };
        let hp = HyperParams {
            eta_x,
            eta_y,
            beta: if algo == Algorithm::NsgdaM { beta } else { 0.0 },
            bx: b,
            by: b,
            t_max: iters,
        };
        let mut cfg = RunConfig::new(hp, seed as u64);
        cfg.record_every = every;
        let mut rows: Vec<RunRecord> = Vec::with_capacity(points);
        run(p.as_ref(), algo, &cfg, &x0, &y0, &mut rows).map_err(err)?;
        out.extend(rows.iter().map(|r| r.grad_phi_norm));
        out.extend(std::iter::repeat_n(f64::NAN, points - rows.len()));
    }
    Ok(out)
}

/// Projection of `(a, b, c)` onto the 2-simplex: `[p0, p1, p2, active_count, shift]`.
#[wasm_bindgen]
pub fn project_simplex3(a: f64, b: f64, c: f64) -> Result<Vec<f64>, String> {
    let dom = DualDomain::simplex(3).map_err(err)?;
    let r = project(&[a, b, c], &dom).map_err(err)?;
    let mut out = r.output;
    out.push(r.active_count as f64);
    out.push(r.shift);
    Ok(out)
}

/// `key=value` lines for schedule `theorem` in statement mode.
#[wasm_bindgen]
#[allow(clippy::too_many_arguments)]
pub fn schedule_calc(
    theorem: u8,
    mu: f64,
    b: f64,
    lx0: f64,
    lx1: f64,
    ly0: f64,
    ly1: f64,
    sigma_x: f64,
    sigma_y: f64,
    epsilon: f64,
    delta: f64,
    delta_phi: f64,
    delta_y0: f64,
    m0_bias: f64,
) -> Result<String, String> {
    let pc = ProblemConstants {
        mu,
        b,
        lx0,
        lx1,
        ly0,
        ly1,
        sigma_x,
        sigma_y,
        c_abs: 1.0,
    };
    let req = ScheduleRequest {
        epsilon,
        delta,
        delta_phi,
        delta_y0,
        m0_bias,
    };
    let dc = derive_constants(&pc).map_err(err)?;
    let s = schedule(theorem, &pc, &dc, &req, ScheduleSource::Statement).map_err(err)?;
    let mut lines = vec![
        format!("kappa={}", dc.kappa),
        format!("l_y={}", dc.l_y),
        format!("eta_x={:e}", s.hyper.eta_x),
        format!("eta_y={:e}", s.hyper.eta_y),
        format!("beta={}", s.hyper.beta),
        format!("bx={}", s.hyper.bx),
        format!("by={}", s.hyper.by),
        format!("iterations={}", s.t_bound),
        format!("init_radius={:e}", s.init_radius),
    ];
    for (k, v) in &s.active_branch {
        lines.push(format!("active.{k}={v}"));
    }
    Ok(lines.join("\n"))
}
