//! Test oracles and empirical probes.
//!
//! Everything here is a diagnostic. Sampled probes can refute a constant but
//! never certify one, so every [`ProbeReport`] carries `empirical_only = true`.

use crate::error::{Error, Result};
use crate::linalg::{dist, norm};
use crate::problem::{check_len, MinimaxProblem};
use crate::projections::project;
use crate::rng::SampleStream;

const DEGENERATE_PAIR: f64 = 1e-12;

/// Central differences with per-coordinate step `h·(1 + |x_j|)`.
pub fn finite_diff<F: Fn(&[f64]) -> f64>(f: F, x: &[f64], h: f64) -> Result<Vec<f64>> {
    if !(h > 0.0 && h.is_finite()) {
        return Err(Error::InvalidArgument(format!("step must be positive, got {h}")));
    }
    let mut probe = x.to_vec();
    let mut out = Vec::with_capacity(x.len());
    for j in 0..x.len() {
        let hj = h * (1.0 + x[j].abs());
        probe[j] = x[j] + hj;
        let up = f(&probe);
        probe[j] = x[j] - hj;
        let down = f(&probe);
        probe[j] = x[j];
        if !up.is_finite() || !down.is_finite() {
            return Err(Error::NonFinite {
                what: "finite-difference evaluation",
                iteration: None,
            });
        }
        out.push((up - down) / (2.0 * hj));
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ApproxBestResponse {
    pub y: Vec<f64>,
    /// Accepted ascent steps.
    pub iterations: usize,
    /// Norm of the last attempted step.
    pub residual: f64,
    pub converged: bool,
}

/// Full-batch projected gradient ascent on `y ↦ L(x, y)` from `y0`, stopping once a
/// step would move less than `tol` or after `max_iters` accepted steps.
pub fn approx_best_response<P: MinimaxProblem + ?Sized>(
    problem: &P,
    x: &[f64],
    y0: &[f64],
    step: f64,
    tol: f64,
    max_iters: usize,
) -> Result<ApproxBestResponse> {
    if !(step > 0.0 && step.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "ascent step must be positive, got {step}"
        )));
    }
    let domain = problem.dual_domain();
    let mut y = y0.to_vec();
    let mut k = 0;
    loop {
        let g = problem.full_grad_y(x, &y)?;
        let raw: Vec<f64> = y.iter().zip(&g).map(|(a, b)| a + step * b).collect();
        let next = project(&raw, domain)?.output;
        let residual = dist(&next, &y);
        if !residual.is_finite() {
            return Err(Error::NonFinite {
                what: "inner ascent",
                iteration: Some(k),
            });
        }
        if residual <= tol || k == max_iters {
            return Ok(ApproxBestResponse {
                y,
                iterations: k,
                residual,
                converged: residual <= tol,
            });
        }
        y = next;
        k += 1;
    }
}

/// Fitted envelope `r ≤ L₀ + L₁·g`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SmoothnessFit {
    pub l0: f64,
    pub l1: f64,
    /// `Σ (L₀ + L₁g − r)²` over the probed pairs.
    pub residual: f64,
    /// Best envelope with `L₁ = 0`, i.e. `L₀ = max r`.
    pub lipschitz_l0: f64,
    pub lipschitz_residual: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProbeReport {
    pub n_points: usize,
    /// Pairs dropped as degenerate or outside the admissible step.
    pub skipped: usize,
    /// Largest probed statistic (ratio, residual, ...).
    pub max_value: f64,
    /// Largest excess over the supplied bound; NaN when no bound was given.
    pub max_violation: f64,
    /// Min, lower quartile, median, upper quartile, max of the statistic.
    pub quantiles: [f64; 5],
    pub fitted: Option<SmoothnessFit>,
    pub empirical_only: bool,
}

fn quantiles(values: &[f64]) -> [f64; 5] {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let at = |q: f64| {
        let pos = q * (v.len() - 1) as f64;
        let lo = pos.floor() as usize;
        let hi = pos.ceil() as usize;
        v[lo] + (v[hi] - v[lo]) * (pos - lo as f64)
    };
    [at(0.0), at(0.25), at(0.5), at(0.75), at(1.0)]
}

fn report(
    values: &[f64],
    violations: Option<&[f64]>,
    skipped: usize,
    fitted: Option<SmoothnessFit>,
) -> Result<ProbeReport> {
    if values.is_empty() {
        return Err(Error::Empty("probe (no admissible points)"));
    }
    let max_violation = violations.map_or(f64::NAN, |v| v.iter().copied().fold(f64::NEG_INFINITY, f64::max));
    Ok(ProbeReport {
        n_points: values.len(),
        skipped,
        max_value: values.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        max_violation,
        quantiles: quantiles(values),
        fitted,
        empirical_only: true,
    })
}

fn envelope_residual(g: &[f64], r: &[f64], l0: f64, l1: f64) -> f64 {
    g.iter().zip(r).map(|(gk, rk)| (l0 + l1 * gk - rk).powi(2)).sum()
}

/// Smallest mean envelope `L₀ + L₁·ḡ` subject to `L₀ + L₁g_k ≥ r_k` and `L₀, L₁ ≥ 0`.
///
/// The optimum of this two-variable LP lies on the upper convex hull of the
/// points `(g_k, r_k)`, on the flat line `L₀ = max r`, or on a ray through the origin.
pub fn fit_envelope(g: &[f64], r: &[f64]) -> SmoothnessFit {
    let n = g.len();
    let gbar = g.iter().sum::<f64>() / n as f64;
    let rmax = r.iter().copied().fold(0.0, f64::max);
    let feasible = |l0: f64, l1: f64| {
        l0 >= 0.0
            && l1 >= 0.0
            && g.iter()
                .zip(r)
                .all(|(gk, rk)| l0 + l1 * gk >= rk - 1e-12 * (1.0 + rk.abs()))
    };

    let mut candidates = vec![(rmax, 0.0)];
    if g.iter().zip(r).all(|(gk, rk)| *gk > 0.0 || *rk <= 0.0) {
        let slope = g
            .iter()
            .zip(r)
            .filter(|(gk, _)| **gk > 0.0)
            .map(|(gk, rk)| rk / gk)
            .fold(0.0, f64::max);
        candidates.push((0.0, slope));
    }

    let mut pts: Vec<(f64, f64)> = g.iter().copied().zip(r.iter().copied()).collect();
    pts.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
    let mut hull: Vec<(f64, f64)> = Vec::new();
    for p in pts {
        while hull.len() >= 2 {
            let (a, b) = (hull[hull.len() - 2], hull[hull.len() - 1]);
            let cross = (b.0 - a.0) * (p.1 - a.1) - (b.1 - a.1) * (p.0 - a.0);
            if cross >= 0.0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(p);
    }
    for w in hull.windows(2) {
        let (a, b) = (w[0], w[1]);
        if b.0 > a.0 {
            let l1 = (b.1 - a.1) / (b.0 - a.0);
            candidates.push((a.1 - l1 * a.0, l1));
        }
    }

    let (l0, l1) = candidates
        .into_iter()
        .filter(|&(l0, l1)| feasible(l0, l1))
        .min_by(|a, b| (a.0 + a.1 * gbar).total_cmp(&(b.0 + b.1 * gbar)))
        .unwrap_or((rmax, 0.0));
    SmoothnessFit {
        l0,
        l1,
        residual: envelope_residual(g, r, l0, l1),
        lipschitz_l0: rmax,
        lipschitz_residual: envelope_residual(g, r, rmax, 0.0),
    }
}

/// Samples `n` pairs and measures `r = ‖∇(u)−∇(u′)‖/‖u−u′‖` against `g = ‖∇(u)‖`.
///
/// Pairs closer than 1e-12 or farther than `radius` are skipped. With `bound =
/// Some((L₀, L₁))` the violation is `r − L₀ − L₁g`.
pub fn probe_generalized_smoothness<G, S>(
    grad: G,
    mut sampler: S,
    radius: f64,
    n: usize,
    bound: Option<(f64, f64)>,
) -> Result<ProbeReport>
where
    G: Fn(&[f64]) -> Vec<f64>,
    S: FnMut() -> (Vec<f64>, Vec<f64>),
{
    if n == 0 {
        return Err(Error::Empty("probe (n = 0)"));
    }
    let (mut rs, mut gs, mut viol) = (Vec::new(), Vec::new(), Vec::new());
    let mut skipped = 0;
    for _ in 0..n {
        let (u, v) = sampler();
        let d = dist(&u, &v);
        if d < DEGENERATE_PAIR || d > radius {
            skipped += 1;
            continue;
        }
        let gu = grad(&u);
        let gv = grad(&v);
        let r = dist(&gu, &gv) / d;
        let g = norm(&gu);
        if !r.is_finite() || !g.is_finite() {
            return Err(Error::NonFinite {
                what: "probed gradient",
                iteration: None,
            });
        }
        if let Some((l0, l1)) = bound {
            viol.push(r - l0 - l1 * g);
        }
        rs.push(r);
        gs.push(g);
    }
    if rs.is_empty() {
        return Err(Error::Empty("probe (every pair skipped)"));
    }
    let fit = fit_envelope(&gs, &rs);
    report(&rs, bound.map(|_| viol.as_slice()), skipped, Some(fit))
}

/// Measures `‖y*(x)−y*(x′)‖/‖x−x′‖` over sampled pairs with `‖x−x′‖ ≤ max_step`.
/// With `kappa` the violation is `ratio − κ`.
pub fn probe_lipschitz_best_response<P, S>(
    problem: &P,
    mut sampler: S,
    n: usize,
    max_step: f64,
    kappa: Option<f64>,
) -> Result<ProbeReport>
where
    P: MinimaxProblem + ?Sized,
    S: FnMut() -> (Vec<f64>, Vec<f64>),
{
    let mut ratios = Vec::new();
    let mut viol = Vec::new();
    let mut skipped = 0;
    for _ in 0..n {
        let (x, xp) = sampler();
        let d = dist(&x, &xp);
        if d < DEGENERATE_PAIR || d > max_step {
            skipped += 1;
            continue;
        }
        let a = problem.best_response(&x).ok_or(Error::NoBestResponse)?;
        let b = problem.best_response(&xp).ok_or(Error::NoBestResponse)?;
        let ratio = dist(&a, &b) / d;
        if let Some(k) = kappa {
            viol.push(ratio - k);
        }
        ratios.push(ratio);
    }
    report(&ratios, kappa.map(|_| viol.as_slice()), skipped, None)
}

#[derive(Debug, Clone, PartialEq)]
pub struct UnbiasednessReport {
    pub draws: usize,
    /// Largest componentwise `|mean − full|` in standard errors.
    pub max_z_x: f64,
    pub max_z_y: f64,
    /// `E‖g_i − ∇L‖²` estimates.
    pub sigma2_x: f64,
    pub sigma2_y: f64,
    pub empirical_only: bool,
}

fn z_scores(sum: &[f64], sumsq: &[f64], full: &[f64], draws: usize) -> f64 {
    let n = draws as f64;
    let mut worst: f64 = 0.0;
    for ((s, q), f) in sum.iter().zip(sumsq).zip(full) {
        let mean = s / n;
        let var = ((q / n - mean * mean) * n / (n - 1.0)).max(0.0);
        let se = (var / n).sqrt();
        let diff = (mean - f).abs();
        let z = if se > 0.0 {
            diff / se
        } else if diff <= 1e-12 * (1.0 + f.abs()) {
            0.0
        } else {
            f64::INFINITY
        };
        worst = worst.max(z);
    }
    worst
}

/// Monte-Carlo check of singleton-batch gradient means against the full gradient.
pub fn probe_unbiasedness<P: MinimaxProblem + ?Sized>(
    problem: &P,
    x: &[f64],
    y: &[f64],
    draws: usize,
    seed: u64,
) -> Result<UnbiasednessReport> {
    if draws < 100 {
        return Err(Error::InvalidArgument(format!("need at least 100 draws, got {draws}")));
    }
    let fx = problem.full_grad_x(x, y)?;
    let fy = problem.full_grad_y(x, y)?;
    let (mut sx, mut qx) = (vec![0.0; fx.len()], vec![0.0; fx.len()]);
    let (mut sy, mut qy) = (vec![0.0; fy.len()], vec![0.0; fy.len()]);
    let (mut vx, mut vy) = (0.0, 0.0);
    let mut stream = SampleStream::new(seed);
    let n = problem.sample_count();
    for _ in 0..draws {
        let i = stream.draw_batch(n, 1);
        let gx = problem.stoch_grad_x(x, y, &i)?;
        let gy = problem.stoch_grad_y(x, y, &i)?;
        for (j, v) in gx.iter().enumerate() {
            sx[j] += v;
            qx[j] += v * v;
        }
        for (j, v) in gy.iter().enumerate() {
            sy[j] += v;
            qy[j] += v * v;
        }
        vx += dist(&gx, &fx).powi(2);
        vy += dist(&gy, &fy).powi(2);
    }
    Ok(UnbiasednessReport {
        draws,
        max_z_x: z_scores(&sx, &qx, &fx, draws),
        max_z_y: z_scores(&sy, &qy, &fy, draws),
        sigma2_x: vx / draws as f64,
        sigma2_y: vy / draws as f64,
        empirical_only: true,
    })
}

/// Largest relative gap between the average of all singleton-batch gradients and
/// the full gradient, over both blocks.
pub fn exhaustive_mean_gap<P: MinimaxProblem + ?Sized>(problem: &P, x: &[f64], y: &[f64]) -> Result<f64> {
    let n = problem.sample_count();
    let fx = problem.full_grad_x(x, y)?;
    let fy = problem.full_grad_y(x, y)?;
    let mut mx = vec![0.0; fx.len()];
    let mut my = vec![0.0; fy.len()];
    for i in 0..n {
        let gx = problem.stoch_grad_x(x, y, &[i])?;
        let gy = problem.stoch_grad_y(x, y, &[i])?;
        mx.iter_mut().zip(gx).for_each(|(a, b)| *a += b);
        my.iter_mut().zip(gy).for_each(|(a, b)| *a += b);
    }
    let rel = |m: &[f64], f: &[f64]| {
        let mean: Vec<f64> = m.iter().map(|v| v / n as f64).collect();
        dist(&mean, f) / norm(f).max(1e-300)
    };
    Ok(rel(&mx, &fx).max(rel(&my, &fy)))
}

/// Checks `‖∇_yL(x,y)‖² ≤ 2(L_{y,0} + L_{y,1}‖∇_yL(x,y)‖)(L(x,y*) − L(x,y))` at the
/// supplied points. The statistic is `lhs − rhs`, so positive values are violations.
pub fn probe_dual_gap_bound<P: MinimaxProblem + ?Sized>(
    problem: &P,
    points: &[(Vec<f64>, Vec<f64>)],
    ly0: f64,
    ly1: f64,
) -> Result<ProbeReport> {
    let mut excess = Vec::with_capacity(points.len());
    for (x, y) in points {
        let ystar = problem.best_response(x).ok_or(Error::NoBestResponse)?;
        let gy = norm(&problem.full_grad_y(x, y)?);
        let gap = problem.loss(x, &ystar)? - problem.loss(x, y)?;
        excess.push(gy * gy - 2.0 * (ly0 + ly1 * gy) * gap);
    }
    report(&excess, Some(&excess), 0, None)
}

/// Empirical `B̂ = max ‖∇_yL(x, y*(x))‖` over the supplied primal points.
pub fn estimate_dual_gradient_bound<P: MinimaxProblem + ?Sized>(problem: &P, xs: &[Vec<f64>]) -> Result<f64> {
    let mut b: f64 = 0.0;
    for x in xs {
        check_len(x, problem.dim_x())?;
        let ystar = problem.best_response(x).ok_or(Error::NoBestResponse)?;
        b = b.max(norm(&problem.full_grad_y(x, &ystar)?));
    }
    Ok(b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problems::SyntheticProblem;

    #[test]
    fn finite_diff_examples() {
        let g = finite_diff(|x| x.iter().map(|v| v * v).sum(), &[1.0, 0.0], 1e-5).unwrap();
        assert!((g[0] - 2.0).abs() < 1e-9 && g[1].abs() < 1e-9);
        let s = finite_diff(|x| x[0].sin(), &[0.0], 1e-6).unwrap();
        assert!((s[0] - 1.0).abs() < 1e-10);
        assert!(finite_diff(|x| x[0], &[0.0], 0.0).is_err());
        assert!(finite_diff(|x| if x[0] > 0.0 { f64::INFINITY } else { 0.0 }, &[0.0], 1e-6).is_err());
    }

    #[test]
    fn ascent_fixed_point_and_budget() {
        let p = SyntheticProblem::identity(2, 2.0, 0.0).unwrap();
        let x = [1.0, -1.0];
        let ystar = p.best_response(&x).unwrap();
        let r = approx_best_response(&p, &x, &ystar, 0.5, 1e-12, 100).unwrap();
        assert_eq!(r.iterations, 0);
        assert!(r.converged);
        let y0 = [0.0, 0.0];
        let r = approx_best_response(&p, &x, &y0, 0.25, 1e-12, 0).unwrap();
        assert_eq!(r.y, y0.to_vec());
        assert!((r.residual - 0.25 * 2f64.sqrt()).abs() < 1e-15);
        let r = approx_best_response(&p, &x, &y0, 0.25, 1e-12, 1000).unwrap();
        assert!(dist(&r.y, &ystar) < 1e-11);
    }

    #[test]
    fn envelope_on_linear_field_is_flat() {
        let g = [1.0, 2.0, 3.0, 4.0];
        let r = [2.0, 2.0, 2.0, 2.0];
        let f = fit_envelope(&g, &r);
        assert_eq!((f.l0, f.l1), (2.0, 0.0));
        assert_eq!(f.residual, 0.0);
    }

    #[test]
    fn envelope_tracks_affine_growth() {
        let g: Vec<f64> = (1..=20).map(f64::from).collect();
        let r: Vec<f64> = g.iter().map(|v| 0.5 + 3.0 * v).collect();
        let f = fit_envelope(&g, &r);
        assert!((f.l0 - 0.5).abs() < 1e-9 && (f.l1 - 3.0).abs() < 1e-9);
        assert!(f.residual < 1e-12 && f.lipschitz_residual > 1.0);
    }

    #[test]
    fn empty_probe_rejected() {
        let r = probe_generalized_smoothness(|x| x.to_vec(), || (vec![0.0], vec![1.0]), 1.0, 0, None);
        assert!(r.is_err());
    }

    #[test]
    fn quantile_summary() {
        assert_eq!(quantiles(&[4.0, 1.0, 3.0, 2.0, 0.0]), [0.0, 1.0, 2.0, 3.0, 4.0]);
    }
}
