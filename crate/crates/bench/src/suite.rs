//! The `verify` probe suite: gradient checks, best-response checks and the
//! empirical smoothness, unbiasedness and dual-gap probes.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use gsmm_core::linalg::{dist, dot, norm, spectral_norm, sub};
use gsmm_core::problems::{DroProblem, SyntheticProblem};
use gsmm_core::verify::{
    estimate_dual_gradient_bound, exhaustive_mean_gap, finite_diff, probe_dual_gap_bound, probe_generalized_smoothness,
    probe_lipschitz_best_response, probe_unbiasedness, ProbeReport,
};
use gsmm_core::{MinimaxProblem, Result};

use crate::csv::fmt_float;

pub const FD_STEP: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SuiteOptions {
    pub points: usize,
    pub draws: usize,
    pub seed: u64,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        Self {
            points: 20,
            draws: 10_000,
            seed: 0,
        }
    }
}

pub type Lines = Vec<(String, String)>;

fn push(out: &mut Lines, key: &str, v: f64) {
    out.push((key.to_string(), fmt_float(v)));
}

fn rel(a: &[f64], b: &[f64]) -> f64 {
    dist(a, b) / norm(b).max(1e-300)
}

/// Interior point of the simplex with every weight at least `0.1/n`.
pub fn random_simplex_point(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    let raw: Vec<f64> = (0..n).map(|_| 0.1 + rng.random::<f64>()).collect();
    let s: f64 = raw.iter().sum();
    raw.iter().map(|v| v / s).collect()
}

/// Uniform on `[-scale, scale]ⁿ`.
pub fn random_box_point(rng: &mut ChaCha8Rng, n: usize, scale: f64) -> Vec<f64> {
    (0..n).map(|_| scale * (2.0 * rng.random::<f64>() - 1.0)).collect()
}

/// Relative error of the analytic `y`-gradient projected onto the simplex's
/// tangent space against central differences along `e_i − 1/n`.
pub fn dual_gradient_fd_error(p: &DroProblem, x: &[f64], y: &[f64], h: f64) -> Result<f64> {
    let n = y.len();
    let g = p.full_grad_y(x, y)?;
    let mean = g.iter().sum::<f64>() / n as f64;
    let analytic: Vec<f64> = g.iter().map(|v| v - mean).collect();
    let mut fd = vec![0.0; n];
    for i in 0..n {
        let shifted = |s: f64| -> Vec<f64> {
            let mut z: Vec<f64> = y.iter().map(|v| v - s / n as f64).collect();
            z[i] += s;
            z
        };
        fd[i] = (p.loss(x, &shifted(h))? - p.loss(x, &shifted(-h))?) / (2.0 * h);
    }
    Ok(rel(&fd, &analytic))
}

fn report_lines(out: &mut Lines, prefix: &str, r: &ProbeReport) {
    push(out, &format!("{prefix}.max"), r.max_value);
    push(out, &format!("{prefix}.median"), r.quantiles[2]);
    if !r.max_violation.is_nan() {
        push(out, &format!("{prefix}.max_violation"), r.max_violation);
    }
    out.push((format!("{prefix}.points"), r.n_points.to_string()));
    out.push((format!("{prefix}.empirical_only"), r.empirical_only.to_string()));
}

pub fn dro_suite(p: &DroProblem, opts: &SuiteOptions) -> Result<Lines> {
    let mut out = Lines::new();
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let (d, n) = (p.dim_x(), p.sample_count());
    out.push(("dro.samples".into(), n.to_string()));
    out.push(("dro.features".into(), d.to_string()));

    let mut xs = Vec::new();
    let (mut ex, mut ey, mut ephi, mut vi) = (0.0f64, 0.0f64, 0.0f64, f64::NEG_INFINITY);
    for _ in 0..opts.points {
        let x = random_box_point(&mut rng, d, 0.05);
        let y = random_simplex_point(&mut rng, n);
        let gx = p.full_grad_x(&x, &y)?;
        let fx = finite_diff(|z| p.loss(z, &y).unwrap_or(f64::NAN), &x, FD_STEP)?;
        ex = ex.max(rel(&fx, &gx));
        ey = ey.max(dual_gradient_fd_error(p, &x, &y, FD_STEP)?);
        let ystar = p.best_response_exact(&x)?;
        let phi_fd = finite_diff(
            |z| {
                p.best_response_exact(z)
                    .and_then(|ys| p.loss(z, &ys))
                    .unwrap_or(f64::NAN)
            },
            &x,
            FD_STEP,
        )?;
        ephi = ephi.max(rel(&phi_fd, &p.full_grad_x(&x, &ystar)?));
        let gy = p.full_grad_y(&x, &ystar)?;
        vi = vi.max(dot(&gy, &sub(&y, &ystar)));
        xs.push(x);
    }
    push(&mut out, "dro.grad_x.fd_rel_err", ex);
    push(&mut out, "dro.grad_y.fd_rel_err", ey);
    push(&mut out, "dro.primal_grad.fd_rel_err", ephi);
    push(&mut out, "dro.best_response.max_vi", vi);

    let x = &xs[0];
    let y = random_simplex_point(&mut rng, n);
    push(&mut out, "dro.mean_gap", exhaustive_mean_gap(p, x, &y)?);
    let u = probe_unbiasedness(p, x, &y, opts.draws.max(100), opts.seed)?;
    push(&mut out, "dro.unbiased.max_z_x", u.max_z_x);
    push(&mut out, "dro.unbiased.max_z_y", u.max_z_y);
    push(&mut out, "dro.unbiased.sigma2_x", u.sigma2_x);
    push(&mut out, "dro.unbiased.sigma2_y", u.sigma2_y);

    let mut pair_rng = ChaCha8Rng::seed_from_u64(opts.seed ^ 0x9e37);
    let lip = probe_lipschitz_best_response(
        p,
        || {
            let a = random_box_point(&mut pair_rng, d, 0.5);
            let step = random_box_point(&mut pair_rng, d, 0.01);
            let b: Vec<f64> = a.iter().zip(&step).map(|(u, v)| u + v).collect();
            (a, b)
        },
        opts.points.max(1) * 10,
        1.0,
        None,
    )?;
    report_lines(&mut out, "dro.best_response_lipschitz", &lip);

    let mu = p.strong_concavity().unwrap_or(f64::NAN);
    let pts: Vec<(Vec<f64>, Vec<f64>)> = xs
        .iter()
        .map(|x| (x.clone(), random_simplex_point(&mut rng, n)))
        .collect();
    let gap = probe_dual_gap_bound(p, &pts, mu, 0.0)?;
    report_lines(&mut out, "dro.dual_gap_bound", &gap);
    push(&mut out, "dro.b_hat", estimate_dual_gradient_bound(p, &xs)?);
    Ok(out)
}

/// Point with `‖u‖∞` uniform in `[lo, hi]`.
pub fn sample_sup_shell(rng: &mut ChaCha8Rng, n: usize, lo: f64, hi: f64) -> Vec<f64> {
    let z = random_box_point(rng, n, 1.0);
    let zmax = z.iter().fold(0.0f64, |m, v| m.max(v.abs())).max(1e-300);
    let s = lo + (hi - lo) * rng.random::<f64>();
    z.iter().map(|v| s * v / zmax).collect()
}

pub fn synthetic_suite(p: &SyntheticProblem, opts: &SuiteOptions) -> Result<Lines> {
    let mut out = Lines::new();
    let n = p.dim_x();
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let pairs = opts.points.max(1) * 50;
    let smooth = probe_generalized_smoothness(
        |u| p.primal_grad(u).unwrap_or_else(|| vec![f64::NAN; n]),
        || {
            let u = sample_sup_shell(&mut rng, n, 5.0, 10.0);
            let step = random_box_point(&mut rng, n, 0.05);
            let v: Vec<f64> = u.iter().zip(&step).map(|(a, b)| a + b).collect();
            (u, v)
        },
        1.0,
        pairs,
        None,
    )?;
    if let Some(fit) = smooth.fitted {
        push(&mut out, "synthetic.smoothness.l0", fit.l0);
        push(&mut out, "synthetic.smoothness.l1", fit.l1);
        push(&mut out, "synthetic.smoothness.residual", fit.residual);
        push(&mut out, "synthetic.smoothness.lipschitz_l0", fit.lipschitz_l0);
        push(
            &mut out,
            "synthetic.smoothness.lipschitz_residual",
            fit.lipschitz_residual,
        );
        push(
            &mut out,
            "synthetic.smoothness.residual_ratio",
            fit.residual / fit.lipschitz_residual.max(1e-300),
        );
    }
    report_lines(&mut out, "synthetic.smoothness", &smooth);

    let kappa = spectral_norm(p.coupling(), n, p.dim_y(), 200) / p.mu();
    let lip = probe_lipschitz_best_response(
        p,
        || {
            let a = random_box_point(&mut rng, n, 10.0);
            let b = random_box_point(&mut rng, n, 10.0);
            (a, b)
        },
        pairs,
        f64::INFINITY,
        Some(kappa),
    )?;
    report_lines(&mut out, "synthetic.best_response_lipschitz", &lip);

    let pts: Vec<(Vec<f64>, Vec<f64>)> = (0..opts.points.max(1))
        .map(|_| {
            (
                random_box_point(&mut rng, n, 3.0),
                random_box_point(&mut rng, p.dim_y(), 3.0),
            )
        })
        .collect();
    let gap = probe_dual_gap_bound(p, &pts, p.mu(), 0.0)?;
    report_lines(&mut out, "synthetic.dual_gap_bound", &gap);
    Ok(out)
}
