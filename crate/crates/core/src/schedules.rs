//! Closed-form hyperparameter schedules with their initialization radii.
//!
//! Each parameter is a minimum (stepsizes, `1 − β`) or maximum (batch sizes,
//! iteration bound) of several branches. A branch whose denominator vanishes is
//! `+∞`; a minimum whose branches are all infinite is unschedulable. The
//! `active_branch` list names the branch that decided each parameter.

use crate::constants::{DerivedConstants, ProblemConstants};
use crate::error::{Error, Result};
use crate::linalg::dist;
use crate::optimizers::HyperParams;
use crate::problem::MinimaxProblem;

/// Which constant set to use where the closed-form statements and their
/// derivations disagree.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ScheduleSource {
    #[default]
    Statement,
    Proof,
}

impl ScheduleSource {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "statement" => Ok(ScheduleSource::Statement),
            "proof" => Ok(ScheduleSource::Proof),
            other => Err(Error::InvalidArgument(format!(
                "schedule source must be 'statement' or 'proof', got '{other}'"
            ))),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            ScheduleSource::Statement => "statement",
            ScheduleSource::Proof => "proof",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScheduleRequest {
    pub epsilon: f64,
    pub delta: f64,
    /// `Φ(x⁰) − Φ*`
    pub delta_phi: f64,
    /// `‖y*(x⁰) − y⁰‖`
    pub delta_y0: f64,
    /// `‖m⁰ − ∇Φ(x⁰)‖`; with `m⁰ = 0` this is `‖∇Φ(x⁰)‖`.
    pub m0_bias: f64,
}

impl ScheduleRequest {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidArgument(m));
        if !(self.epsilon > 0.0 && self.epsilon.is_finite()) {
            return bad(format!("epsilon must be positive, got {}", self.epsilon));
        }
        if !(self.delta > 0.0 && self.delta < 1.0) {
            return bad(format!("delta must lie in (0, 1), got {}", self.delta));
        }
        if !(self.delta_phi > 0.0 && self.delta_phi.is_finite()) {
            return bad(format!("delta_phi must be positive, got {}", self.delta_phi));
        }
        for (name, v) in [("delta_y0", self.delta_y0), ("m0_bias", self.m0_bias)] {
            if !(v >= 0.0 && v.is_finite()) {
                return bad(format!("{name} must be nonnegative, got {v}"));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScheduleResult {
    pub hyper: HyperParams,
    /// `1 − β` before it is folded into `hyper.beta`.
    pub one_minus_beta: f64,
    /// Unrounded iteration bound.
    pub t_raw: f64,
    /// `⌈T⌉`, saturating.
    pub t_bound: u64,
    pub init_radius: f64,
    /// `(parameter, branch)` pairs.
    pub active_branch: Vec<(&'static str, &'static str)>,
}

fn ratio(num: f64, den: f64) -> f64 {
    if den == 0.0 {
        f64::INFINITY
    } else {
        num / den
    }
}

fn arg_min(param: &'static str, branches: &[(&'static str, f64)]) -> Result<(f64, &'static str)> {
    let mut best = (f64::INFINITY, "");
    for &(name, v) in branches {
        if v < best.0 {
            best = (v, name);
        }
    }
    if best.0.is_finite() {
        Ok(best)
    } else {
        Err(Error::Unschedulable(format!(
            "every branch of {param} is infinite; at least one constant in its formulas must be nonzero"
        )))
    }
}

fn arg_max(branches: &[(&'static str, f64)]) -> (f64, &'static str) {
    let mut best = (f64::NEG_INFINITY, branches[0].0);
    for &(name, v) in branches {
        if v > best.0 {
            best = (v, name);
        }
    }
    best
}

fn ceil_count(v: f64) -> u64 {
    if v.is_nan() || v <= 1.0 {
        1
    } else if v >= u64::MAX as f64 {
        u64::MAX
    } else {
        v.ceil() as u64
    }
}

fn to_usize(v: u64) -> usize {
    usize::try_from(v).unwrap_or(usize::MAX)
}

fn checks(pc: &ProblemConstants, req: &ScheduleRequest) -> Result<()> {
    pc.validate()?;
    req.validate()
}

/// Clamps `1 − β` into `(0, 1]`; a branch above one would mean negative momentum.
fn clamp_unit(v: f64, branch: &'static str) -> (f64, &'static str) {
    if v > 1.0 {
        (1.0, "clamped to 1")
    } else {
        (v, branch)
    }
}

#[allow(clippy::too_many_arguments)]
fn finish(
    eta_x: f64,
    eta_y: f64,
    one_minus_beta: f64,
    bx: u64,
    by: u64,
    t_raw: f64,
    init_radius: f64,
    active_branch: Vec<(&'static str, &'static str)>,
) -> ScheduleResult {
    let t_bound = ceil_count(t_raw);
    ScheduleResult {
        hyper: HyperParams {
            eta_x,
            eta_y,
            beta: 1.0 - one_minus_beta,
            bx: to_usize(bx),
            by: to_usize(by),
            t_max: to_usize(t_bound),
        },
        one_minus_beta,
        t_raw,
        t_bound,
        init_radius,
        active_branch,
    }
}

/// In-expectation schedule for NSGDA-M (batch size 1).
pub fn schedule_thm1(
    pc: &ProblemConstants,
    dc: &DerivedConstants,
    req: &ScheduleRequest,
    source: ScheduleSource,
) -> Result<ScheduleResult> {
    checks(pc, req)?;
    let (mu, eps, delta) = (pc.mu, req.epsilon, req.delta);
    let (lx0, lx1, sx, sy) = (pc.lx0, pc.lx1, pc.sigma_x, pc.sigma_y);
    let kappa = dc.kappa;

    let (omb, b_omb) = arg_min(
        "1-beta",
        &[
            (
                "mu^2 eps^2/(37632 lx0^2 sigma_y^2)",
                ratio(mu * mu * eps * eps, 37632.0 * lx0 * lx0 * sy * sy),
            ),
            ("mu eps/(336 lx0 sigma_y)", ratio(mu * eps, 336.0 * lx0 * sy)),
            ("mu/(6 L_y)", ratio(mu, 6.0 * dc.l_y)),
            ("eps^2/(784 sigma_x^2)", ratio(eps * eps, 784.0 * sx * sx)),
            (
                "mu^2 delta/(3888 lx1^2 sigma_y^2)",
                ratio(mu * mu * delta, 3888.0 * lx1 * lx1 * sy * sy),
            ),
            (
                "mu sqrt(delta)/(108 lx1 sigma_y)",
                ratio(mu * delta.sqrt(), 108.0 * lx1 * sy),
            ),
        ],
    )?;
    let (omb, b_omb) = clamp_unit(omb, b_omb);

    let mut eta_branches = vec![
        (
            "eps(1-beta)/(56(kappa+1) lx0)",
            ratio(eps * omb, 56.0 * (kappa + 1.0) * lx0),
        ),
        (
            "5 sqrt(delta)(1-beta)/(36 kappa lx1)",
            ratio(5.0 * delta.sqrt() * omb, 36.0 * kappa * lx1),
        ),
    ];
    if source == ScheduleSource::Proof {
        eta_branches.push(("(1-beta)/(8(kappa+1) lx1)", ratio(omb, 8.0 * (kappa + 1.0) * lx1)));
    }
    let (eta_x, b_eta_x) = arg_min("eta_x", &eta_branches)?;
    let eta_y = 5.0 * omb / mu;

    let (t_raw, b_t) = arg_max(&[
        ("14 Delta_Phi/(eps eta_x)", 14.0 * req.delta_phi / (eps * eta_x)),
        (
            "112 lx0 Delta_y0/((1-beta) eps)",
            112.0 * lx0 * req.delta_y0 / (omb * eps),
        ),
        ("14 m0_bias/((1-beta) eps)", 14.0 * req.m0_bias / (omb * eps)),
    ]);

    Ok(finish(
        eta_x,
        eta_y,
        omb,
        1,
        1,
        t_raw,
        ratio(delta.sqrt(), 18.0 * lx1),
        vec![
            ("one_minus_beta", b_omb),
            ("eta_x", b_eta_x),
            ("eta_y", "5(1-beta)/mu"),
            ("t_bound", b_t),
            ("init_radius", "sqrt(delta)/(18 lx1)"),
        ],
    ))
}

/// High-probability schedule for NSGDA-M (batch size 1).
pub fn schedule_thm2(
    pc: &ProblemConstants,
    dc: &DerivedConstants,
    req: &ScheduleRequest,
    _source: ScheduleSource,
) -> Result<ScheduleResult> {
    checks(pc, req)?;
    let (mu, eps, delta) = (pc.mu, req.epsilon, req.delta);
    let (lx0, lx1, sx) = (pc.lx0, pc.lx1, pc.sigma_x);
    let csy = pc.c_abs * pc.sigma_y;
    let kappa = dc.kappa;
    let l4 = (4.0 / delta).ln();
    let l2e = (2.0 * std::f64::consts::E / delta).ln();

    let (omb, b_omb) = arg_min(
        "1-beta",
        &[
            (
                "eps^2/(12544 sigma_x^2 log(4/delta))",
                ratio(eps * eps, 12544.0 * sx * sx * l4),
            ),
            (
                "eps^2 mu^2/(762048 lx0^2 (c sigma_y)^2 log(2e/delta))",
                ratio(eps * eps * mu * mu, 762048.0 * lx0 * lx0 * csy * csy * l2e),
            ),
            (
                "mu^2/(82944 lx1^2 (c sigma_y)^2 log(2e/delta))",
                ratio(mu * mu, 82944.0 * lx1 * lx1 * csy * csy * l2e),
            ),
            ("mu/(18 L_y)", ratio(mu, 18.0 * dc.l_y)),
        ],
    )?;
    let (omb, b_omb) = clamp_unit(omb, b_omb);

    let s6 = 6f64.sqrt();
    let (eta_x, b_eta_x) = arg_min(
        "eta_x",
        &[
            ("(1-beta)/(8(kappa+1) lx1)", ratio(omb, 8.0 * (kappa + 1.0) * lx1)),
            (
                "eps(1-beta)/(28(kappa+1) lx0)",
                ratio(eps * omb, 28.0 * (kappa + 1.0) * lx0),
            ),
            (
                "9(1-beta)/(32 sqrt2 lx1 kappa sqrt(log(2e/delta)))",
                ratio(9.0 * omb, 32.0 * std::f64::consts::SQRT_2 * lx1 * kappa * l2e.sqrt()),
            ),
            (
                "9 eps(1-beta)/(56 sqrt6 lx0 kappa sqrt(log(2e/delta)))",
                ratio(9.0 * eps * omb, 56.0 * s6 * lx0 * kappa * l2e.sqrt()),
            ),
        ],
    )?;
    let eta_y = 9.0 * omb / mu;

    let (t_raw, b_t) = arg_max(&[
        ("14 Delta_Phi/(eta_x eps)", 14.0 * req.delta_phi / (eta_x * eps)),
        (
            "224 lx0 Delta_y0/((1-beta) eps)",
            224.0 * lx0 * req.delta_y0 / (omb * eps),
        ),
        ("28 m0_bias/((1-beta) eps)", 28.0 * req.m0_bias / (omb * eps)),
    ]);

    Ok(finish(
        eta_x,
        eta_y,
        omb,
        1,
        1,
        t_raw,
        ratio(1.0, 16.0 * lx1),
        vec![
            ("one_minus_beta", b_omb),
            ("eta_x", b_eta_x),
            ("eta_y", "9(1-beta)/mu"),
            ("t_bound", b_t),
            ("init_radius", "1/(16 lx1)"),
        ],
    ))
}

/// In-expectation schedule for minibatch NSGDA.
pub fn schedule_thm3(
    pc: &ProblemConstants,
    dc: &DerivedConstants,
    req: &ScheduleRequest,
    source: ScheduleSource,
) -> Result<ScheduleResult> {
    checks(pc, req)?;
    let (eps, delta) = (req.epsilon, req.delta);
    let (lx0, lx1, sx, sy) = (pc.lx0, pc.lx1, pc.sigma_x, pc.sigma_y);
    let (kt, ly) = (dc.kappa_tilde, dc.l_y);
    let proof = source == ScheduleSource::Proof;

    let mut eta_branches = vec![
        ("eps/(48 kappa_tilde^2 lx0)", ratio(eps, 48.0 * kt * kt * lx0)),
        (
            "sqrt(delta)/(32 kappa_tilde^2 lx1)",
            ratio(delta.sqrt(), 32.0 * kt * kt * lx1),
        ),
    ];
    if proof {
        eta_branches.push(("1/(2 L1)", ratio(1.0, 2.0 * dc.l1)));
    }
    let (eta_x, b_eta_x) = arg_min("eta_x", &eta_branches)?;
    let (eta_y, _) = arg_min("eta_y", &[("1/L_y", ratio(1.0, ly))])?;

    let (bx_raw, b_bx) = if proof {
        (sx * sx * 576.0 / (eps * eps), "576 sigma_x^2/eps^2")
    } else {
        (48.0 * sx * sx / eps, "48 sigma_x^2/eps")
    };
    let (by_raw, b_by) = if proof {
        arg_max(&[
            (
                "2304 kappa_tilde sigma_y^2/(eps^2 L_y^2)",
                ratio(2304.0 * kt * sy * sy, eps * eps * ly * ly),
            ),
            (
                "512 kappa_tilde lx1^2 sigma_y^2/(delta L_y^2)",
                ratio(512.0 * kt * lx1 * lx1 * sy * sy, delta * ly * ly),
            ),
        ])
    } else {
        arg_max(&[
            (
                "576 kappa_tilde sigma_y^2/(eps^2 L_y^2)",
                ratio(576.0 * kt * sy * sy, eps * eps * ly * ly),
            ),
            (
                "384 lx1^2 sigma_y^2/(delta L_y^2)",
                ratio(384.0 * lx1 * lx1 * sy * sy, delta * ly * ly),
            ),
        ])
    };

    let (t_raw, b_t) = arg_max(&[
        ("12 Delta_Phi/(eta_x eps)", 12.0 * req.delta_phi / (eta_x * eps)),
        ("96 lx0 kappa_tilde Delta_y0/eps", 96.0 * lx0 * kt * req.delta_y0 / eps),
    ]);

    Ok(finish(
        eta_x,
        eta_y,
        1.0,
        ceil_count(bx_raw),
        ceil_count(by_raw),
        t_raw,
        ratio(delta.sqrt(), 16.0 * lx1),
        vec![
            ("eta_x", b_eta_x),
            ("eta_y", "1/L_y"),
            ("bx", b_bx),
            ("by", b_by),
            ("t_bound", b_t),
            ("init_radius", "sqrt(delta)/(16 lx1)"),
        ],
    ))
}

/// High-probability schedule for minibatch NSGDA.
pub fn schedule_thm4(
    pc: &ProblemConstants,
    dc: &DerivedConstants,
    req: &ScheduleRequest,
    source: ScheduleSource,
) -> Result<ScheduleResult> {
    checks(pc, req)?;
    let (mu, eps, delta) = (pc.mu, req.epsilon, req.delta);
    let (lx0, lx1, sx) = (pc.lx0, pc.lx1, pc.sigma_x);
    let csy = pc.c_abs * pc.sigma_y;
    let (kt, ly) = (dc.kappa_tilde, dc.l_y);
    let proof = source == ScheduleSource::Proof;
    let l4 = (4.0 / delta).ln();
    let l2e = (2.0 * std::f64::consts::E / delta).ln();
    let sl = l2e.sqrt();

    let mut eta_branches = vec![
        (
            "eps/(96 lx0 kappa_tilde^2 sqrt(log(2e/delta)))",
            ratio(eps, 96.0 * lx0 * kt * kt * sl),
        ),
        ("eps/(6(kappa_tilde+1) lx0)", ratio(eps, 6.0 * (kt + 1.0) * lx0)),
    ];
    if proof {
        eta_branches.push((
            "1/(80 lx1 kappa_tilde^2 sqrt(log(2e/delta)))",
            ratio(1.0, 80.0 * lx1 * kt * kt * sl),
        ));
        eta_branches.push(("1/(2 L1)", ratio(1.0, 2.0 * dc.l1)));
    } else {
        eta_branches.push((
            "1/(16 lx1 kappa_tilde^2 sqrt(log(2e/delta)))",
            ratio(1.0, 16.0 * lx1 * kt * kt * sl),
        ));
    }
    let (eta_x, b_eta_x) = arg_min("eta_x", &eta_branches)?;
    let (eta_y, b_eta_y) = if proof {
        (arg_min("eta_y", &[("1/(2 L_y)", ratio(1.0, 2.0 * ly))])?.0, "1/(2 L_y)")
    } else {
        (arg_min("eta_y", &[("1/L_y", ratio(1.0, ly))])?.0, "1/L_y")
    };

    let (bx_raw, b_bx) = if proof {
        (
            46656.0 * sx * sx * l4 / (eps * eps),
            "46656 sigma_x^2 log(4/delta)/eps^2",
        )
    } else {
        (
            36864.0 * sx * sx * l4 / (eps * eps),
            "36864 sigma_x^2 log(4/delta)/eps^2",
        )
    };
    let (by_raw, b_by) = arg_max(&[
        (
            "8192 lx1^2 (c sigma_y)^2 log(2e/delta)/mu^2",
            8192.0 * lx1 * lx1 * csy * csy * l2e / (mu * mu),
        ),
        (
            "12288 lx0^2 (c sigma_y)^2 log(2e/delta)/(mu^2 eps^2)",
            12288.0 * lx0 * lx0 * csy * csy * l2e / (mu * mu * eps * eps),
        ),
    ]);

    let (t_raw, b_t) = arg_max(&[
        ("12 Delta_Phi/(eta_x eps)", 12.0 * req.delta_phi / (eta_x * eps)),
        ("36 lx0 kappa_tilde Delta_y0/eps", 36.0 * lx0 * kt * req.delta_y0 / eps),
    ]);

    Ok(finish(
        eta_x,
        eta_y,
        1.0,
        ceil_count(bx_raw),
        ceil_count(by_raw),
        t_raw,
        ratio(1.0, 16.0 * lx1),
        vec![
            ("eta_x", b_eta_x),
            ("eta_y", b_eta_y),
            ("bx", b_bx),
            ("by", b_by),
            ("t_bound", b_t),
            ("init_radius", "1/(16 lx1)"),
        ],
    ))
}

/// Dispatches on the schedule number `1..=4`.
pub fn schedule(
    which: u8,
    pc: &ProblemConstants,
    dc: &DerivedConstants,
    req: &ScheduleRequest,
    source: ScheduleSource,
) -> Result<ScheduleResult> {
    match which {
        1 => schedule_thm1(pc, dc, req, source),
        2 => schedule_thm2(pc, dc, req, source),
        3 => schedule_thm3(pc, dc, req, source),
        4 => schedule_thm4(pc, dc, req, source),
        k => Err(Error::InvalidArgument(format!(
            "schedule must be 1, 2, 3 or 4, got {k}"
        ))),
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InitCheck {
    pub radius: f64,
    pub bound: f64,
    pub pass: bool,
}

/// Measures `‖y*(x⁰) − y⁰‖` against the schedule's initialization radius (inclusive).
pub fn check_init<P: MinimaxProblem + ?Sized>(
    problem: &P,
    x0: &[f64],
    y0: &[f64],
    sched: &ScheduleResult,
) -> Result<InitCheck> {
    let ystar = problem.best_response(x0).ok_or(Error::NoBestResponse)?;
    crate::problem::check_len(y0, ystar.len())?;
    let radius = dist(&ystar, y0);
    Ok(InitCheck {
        radius,
        bound: sched.init_radius,
        pass: radius <= sched.init_radius,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constants::derive_constants;

    fn req(eps: f64, delta: f64) -> ScheduleRequest {
        ScheduleRequest {
            epsilon: eps,
            delta,
            delta_phi: 1.0,
            delta_y0: 0.0,
            m0_bias: 0.0,
        }
    }

    fn unit_constants(sigma: f64) -> ProblemConstants {
        ProblemConstants {
            mu: 1.0,
            b: 0.0,
            lx0: 1.0,
            lx1: 1.0,
            ly0: 1.0,
            ly1: 0.0,
            sigma_x: sigma,
            sigma_y: sigma,
            c_abs: 1.0,
        }
    }

    fn run(k: u8, pc: &ProblemConstants, r: &ScheduleRequest) -> ScheduleResult {
        schedule(k, pc, &derive_constants(pc).unwrap(), r, ScheduleSource::Statement).unwrap()
    }

    fn branch(s: &ScheduleResult, key: &str) -> &'static str {
        s.active_branch.iter().find(|(k, _)| *k == key).unwrap().1
    }

    #[test]
    fn noiseless_limits() {
        let pc = unit_constants(0.0);
        let s1 = run(1, &pc, &req(0.1, 0.1));
        assert!((s1.one_minus_beta - 1.0 / 6.0).abs() < 1e-15);
        let s2 = run(2, &pc, &req(0.1, 0.1));
        assert!((s2.one_minus_beta - 1.0 / 18.0).abs() < 1e-15);
        assert_eq!(run(3, &pc, &req(0.1, 0.1)).hyper.bx, 1);
        assert_eq!(run(4, &pc, &req(0.1, 0.1)).hyper.bx, 1);
    }

    #[test]
    fn first_schedule_noisy_example() {
        let s = run(1, &unit_constants(1.0), &req(0.1, 0.1));
        let expected = 0.01 / 37632.0;
        assert!((s.one_minus_beta - expected).abs() <= 1e-12 * expected);
        assert!((s.hyper.eta_y - 5.0 * expected).abs() <= 1e-12 * expected);
        assert_eq!(branch(&s, "one_minus_beta"), "mu^2 eps^2/(37632 lx0^2 sigma_y^2)");
    }

    #[test]
    fn second_schedule_noisy_example() {
        let s = run(2, &unit_constants(1.0), &req(0.1, 0.1));
        let l2e = (20.0 * std::f64::consts::E).ln();
        let expected = 0.01 / (762048.0 * l2e);
        assert!((s.one_minus_beta - expected).abs() <= 1e-12 * expected);
        assert!(branch(&s, "one_minus_beta").starts_with("eps^2 mu^2/(762048"));
    }

    #[test]
    fn rejects_bad_delta() {
        let pc = unit_constants(1.0);
        let dc = derive_constants(&pc).unwrap();
        let r = req(0.1, 2.0);
        for k in 1..=4 {
            assert!(schedule(k, &pc, &dc, &r, ScheduleSource::Statement).is_err());
        }
    }

    #[test]
    fn minibatch_sizes() {
        let s = run(3, &unit_constants(1.0), &req(0.1, 0.1));
        assert_eq!(s.hyper.bx, 480);
        let s = run(4, &unit_constants(1.0), &req(1.0, 0.5));
        assert_eq!(s.hyper.bx as f64, (36864.0 * 8f64.ln()).ceil());
    }

    #[test]
    fn minibatch_dual_batch_example() {
        // L_y = kappa_tilde = 2 and sigma_y^2/L_y^2 = 1.
        let mut pc = unit_constants(1.0);
        pc.ly0 = 2.0;
        pc.sigma_y = 2.0;
        let s = run(3, &pc, &req(0.1, 0.1));
        let a: f64 = 576.0 * 2.0 * 4.0 / (0.01 * 4.0);
        let b = 384.0 * 4.0 / (0.1 * 4.0);
        assert_eq!(s.hyper.by as f64, a.max(b).ceil());
    }

    #[test]
    fn unschedulable_when_all_branches_infinite() {
        let mut pc = unit_constants(0.0);
        pc.lx0 = 0.0;
        pc.ly1 = 0.0;
        let mut dc = derive_constants(&pc).unwrap();
        dc.kappa = 0.0;
        let r = schedule_thm1(&pc, &dc, &req(0.1, 0.1), ScheduleSource::Statement);
        assert!(matches!(r, Err(Error::Unschedulable(_))));
    }

    #[test]
    fn t_bound_rounds_up() {
        let s = run(1, &unit_constants(0.0), &req(0.1, 0.1));
        assert_eq!(s.t_bound as f64, s.t_raw.ceil().max(1.0));
        assert!(s.t_bound >= 1);
    }

    #[test]
    fn init_check_is_inclusive() {
        let p = crate::problems::SyntheticProblem::identity(2, 1.0, 0.0).unwrap();
        let mut s = run(1, &unit_constants(1.0), &req(0.1, 0.1));
        let c = check_init(&p, &[1.0, 2.0], &[1.0, 2.0], &s).unwrap();
        assert_eq!(c.radius, 0.0);
        assert!(c.pass);
        s.init_radius = 1.0;
        assert!(check_init(&p, &[1.0, 2.0], &[1.0, 3.0], &s).unwrap().pass);
        assert!(!check_init(&p, &[1.0, 2.0], &[1.0, 3.5], &s).unwrap().pass);
    }
}
