//! NSGDA-M, NSGDA and SGDA.
//!
//! All three share one driver. Each iteration draws a single batch of
//! `max(bx, by)` indices with replacement; the primal estimate uses the first
//! `bx` of them and the dual estimate the first `by`. With `bx = by` this makes
//! NSGDA-M at `β = 0` and NSGDA consume identical samples.

use crate::domain::{membership_check, DualDomain};
use crate::error::{Error, Result};
use crate::linalg::{all_finite, dist, norm};
use crate::problem::{check_len, IterateState, MinimaxProblem, RunRecord};
use crate::projections::project;
use crate::rng::{select_iterate, SampleStream};
use crate::verify::approx_best_response;

const INIT_FEASIBILITY_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HyperParams {
    pub eta_x: f64,
    pub eta_y: f64,
    /// Momentum weight; ignored by NSGDA and SGDA.
    pub beta: f64,
    pub bx: usize,
    pub by: usize,
    pub t_max: usize,
}

impl HyperParams {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidHyper(msg));
        if !(self.eta_x > 0.0 && self.eta_x.is_finite()) {
            return bad(format!("eta_x must be positive and finite, got {}", self.eta_x));
        }
        if !(self.eta_y > 0.0 && self.eta_y.is_finite()) {
            return bad(format!("eta_y must be positive and finite, got {}", self.eta_y));
        }
        if !(0.0..1.0).contains(&self.beta) {
            return bad(format!("beta must lie in [0, 1), got {}", self.beta));
        }
        if self.bx == 0 || self.by == 0 {
            return bad(format!("batch sizes must be >= 1, got bx={} by={}", self.bx, self.by));
        }
        if self.t_max == 0 {
            return bad("t_max must be >= 1".into());
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Algorithm {
    NsgdaM,
    Nsgda,
    Sgda,
}

impl Algorithm {
    pub const ALL: [Algorithm; 3] = [Algorithm::NsgdaM, Algorithm::Nsgda, Algorithm::Sgda];

    pub fn name(&self) -> &'static str {
        match self {
            Algorithm::NsgdaM => "nsgda-m",
            Algorithm::Nsgda => "nsgda",
            Algorithm::Sgda => "sgda",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace('_', "-").as_str() {
            "nsgda-m" | "nsgdam" => Ok(Algorithm::NsgdaM),
            "nsgda" => Ok(Algorithm::Nsgda),
            "sgda" => Ok(Algorithm::Sgda),
            other => Err(Error::InvalidArgument(format!("unknown algorithm '{other}'"))),
        }
    }
}

/// How `∇Φ` and `y*` are obtained for the metric columns.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EvalMode {
    /// Closed-form oracles; NaN when the problem has none.
    Exact,
    /// Projected inner ascent from `y_t`; `step = None` uses `1/μ` when known.
    Approx {
        tol: f64,
        max_iters: usize,
        step: Option<f64>,
    },
    /// Only the loss and step norms are recorded.
    None,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunConfig {
    pub hyper: HyperParams,
    pub seed: u64,
    /// Record every `record_every`-th iteration, starting at 0.
    pub record_every: usize,
    pub eval: EvalMode,
}

impl RunConfig {
    pub fn new(hyper: HyperParams, seed: u64) -> Self {
        Self {
            hyper,
            seed,
            record_every: 1,
            eval: EvalMode::Exact,
        }
    }
}

pub trait Recorder {
    fn record(&mut self, row: &RunRecord);
}

impl Recorder for Vec<RunRecord> {
    fn record(&mut self, row: &RunRecord) {
        self.push(*row);
    }
}

/// Discards every row.
pub struct NullRecorder;

impl Recorder for NullRecorder {
    fn record(&mut self, _row: &RunRecord) {}
}

#[derive(Debug)]
pub struct RunOutput {
    pub final_state: IterateState,
    /// Uniformly selected iterate `x_k`, `k ∈ 1..=t_max`; `None` if the run aborted first.
    pub x_bar: Option<Vec<f64>>,
    pub x_bar_index: usize,
    /// Error that stopped the run early; rows up to that point were recorded.
    pub abort: Option<Error>,
}

fn check_gradients(gx: &[f64], gy: &[f64], t: usize) -> Result<()> {
    if !all_finite(gx) {
        return Err(Error::NonFinite {
            what: "primal gradient",
            iteration: Some(t),
        });
    }
    if !all_finite(gy) {
        return Err(Error::NonFinite {
            what: "dual gradient",
            iteration: Some(t),
        });
    }
    Ok(())
}

fn normalized_descent(x: &[f64], d: &[f64], eta: f64) -> Vec<f64> {
    let n = norm(d);
    if n > 0.0 {
        let s = eta / n;
        x.iter().zip(d).map(|(xi, di)| xi - s * di).collect()
    } else {
        x.to_vec()
    }
}

fn dual_ascent(y: &[f64], gy: &[f64], eta: f64, domain: &DualDomain) -> Result<Vec<f64>> {
    let raw: Vec<f64> = y.iter().zip(gy).map(|(a, b)| a + eta * b).collect();
    Ok(project(&raw, domain)?.output)
}

/// One NSGDA-M iteration from explicit gradient estimates.
pub fn nsgda_m_step(
    state: &IterateState,
    gx: &[f64],
    gy: &[f64],
    hp: &HyperParams,
    domain: &DualDomain,
) -> Result<IterateState> {
    check_len(gx, state.x.len())?;
    check_len(&state.m, state.x.len())?;
    check_len(gy, state.y.len())?;
    check_gradients(gx, gy, state.t)?;
    let b = hp.beta;
    let m: Vec<f64> = state.m.iter().zip(gx).map(|(mi, gi)| b * mi + (1.0 - b) * gi).collect();
    let x = normalized_descent(&state.x, &m, hp.eta_x);
    let y = dual_ascent(&state.y, gy, hp.eta_y, domain)?;
    Ok(IterateState {
        x,
        y,
        m,
        t: state.t + 1,
    })
}

fn plain_step(
    algo: Algorithm,
    state: &IterateState,
    gx: &[f64],
    gy: &[f64],
    hp: &HyperParams,
    domain: &DualDomain,
) -> Result<IterateState> {
    check_gradients(gx, gy, state.t)?;
    let x = match algo {
        Algorithm::Nsgda => normalized_descent(&state.x, gx, hp.eta_x),
        _ => state.x.iter().zip(gx).map(|(a, g)| a - hp.eta_x * g).collect(),
    };
    let y = dual_ascent(&state.y, gy, hp.eta_y, domain)?;
    Ok(IterateState {
        x,
        y,
        m: state.m.clone(),
        t: state.t + 1,
    })
}

struct Metrics {
    grad_phi: Option<Vec<f64>>,
    tracking_error: f64,
}

fn evaluate<P: MinimaxProblem + ?Sized>(problem: &P, state: &IterateState, mode: EvalMode) -> Metrics {
    let none = Metrics {
        grad_phi: None,
        tracking_error: f64::NAN,
    };
    let ystar = match mode {
        EvalMode::None => return none,
        EvalMode::Exact => match problem.best_response(&state.x) {
            Some(y) => y,
            None => return none,
        },
        EvalMode::Approx { tol, max_iters, step } => {
            let step = step.or(problem.strong_concavity().map(|mu| 1.0 / mu));
            let Some(step) = step else { return none };
            match approx_best_response(problem, &state.x, &state.y, step, tol, max_iters) {
                Ok(r) => r.y,
                Err(_) => return none,
            }
        }
    };
    let grad_phi = match mode {
        EvalMode::Exact => problem.primal_grad(&state.x),
        _ => problem.full_grad_x(&state.x, &ystar).ok(),
    };
    Metrics {
        grad_phi,
        tracking_error: dist(&state.y, &ystar),
    }
}

/// Runs `hyper.t_max` iterations of `algo`. Setup errors are returned as `Err`;
/// failures during the run stop it and are reported in [`RunOutput::abort`].
pub fn run<P: MinimaxProblem + ?Sized>(
    problem: &P,
    algo: Algorithm,
    config: &RunConfig,
    x0: &[f64],
    y0: &[f64],
    recorder: &mut dyn Recorder,
) -> Result<RunOutput> {
    let hp = config.hyper;
    hp.validate()?;
    if config.record_every == 0 {
        return Err(Error::InvalidArgument("record_every must be >= 1".into()));
    }
    check_len(x0, problem.dim_x())?;
    let domain = problem.dual_domain();
    check_len(y0, domain.dim())?;
    if !all_finite(x0) || !all_finite(y0) {
        return Err(Error::NonFinite {
            what: "initial point",
            iteration: None,
        });
    }
    if !membership_check(y0, domain, INIT_FEASIBILITY_TOL)? {
        return Err(Error::Infeasible { domain: domain.name() });
    }

    let n = problem.sample_count();
    let draw = hp.bx.max(hp.by);
    let mut stream = SampleStream::new(config.seed);
    let k = select_iterate(config.seed, hp.t_max);
    let mut state = IterateState::new(x0.to_vec(), y0.to_vec());
    let mut x_bar = None;
    let mut abort = None;

    while state.t < hp.t_max {
        let t = state.t;
        let batch = stream.draw_batch(n, draw);
        let step = (|| -> Result<IterateState> {
            let gx = problem.stoch_grad_x(&state.x, &state.y, &batch[..hp.bx])?;
            let gy = problem.stoch_grad_y(&state.x, &state.y, &batch[..hp.by])?;
            match algo {
                Algorithm::NsgdaM => nsgda_m_step(&state, &gx, &gy, &hp, domain),
                _ => plain_step(algo, &state, &gx, &gy, &hp, domain),
            }
        })();
        let next = match step {
            Ok(s) if all_finite(&s.x) && all_finite(&s.y) => s,
            Ok(_) => {
                abort = Some(Error::NonFinite {
                    what: "iterate",
                    iteration: Some(t),
                });
                break;
            }
            Err(e) => {
                abort = Some(e);
                break;
            }
        };

        if t.is_multiple_of(config.record_every) {
            let loss = match problem.loss(&state.x, &state.y) {
                Ok(l) => l,
                Err(e) => {
                    abort = Some(e);
                    break;
                }
            };
            let m = evaluate(problem, &state, config.eval);
            let grad_phi_norm = m.grad_phi.as_deref().map_or(f64::NAN, norm);
            let momentum_bias = match (algo, &m.grad_phi) {
                (Algorithm::NsgdaM, Some(g)) => dist(&next.m, g),
                _ => f64::NAN,
            };
            recorder.record(&RunRecord {
                t,
                grad_phi_norm,
                tracking_error: m.tracking_error,
                momentum_bias,
                loss,
                step_x: dist(&next.x, &state.x),
                step_y: dist(&next.y, &state.y),
            });
        }

        state = next;
        if state.t == k {
            x_bar = Some(state.x.clone());
        }
    }

    Ok(RunOutput {
        final_state: state,
        x_bar,
        x_bar_index: k,
        abort,
    })
}

fn plain_run<P: MinimaxProblem + ?Sized>(
    problem: &P,
    algo: Algorithm,
    hp: &HyperParams,
    x0: &[f64],
    y0: &[f64],
    seed: u64,
    recorder: &mut dyn Recorder,
) -> Result<RunOutput> {
    run(problem, algo, &RunConfig::new(*hp, seed), x0, y0, recorder)
}

pub fn nsgda_m_run<P: MinimaxProblem + ?Sized>(
    problem: &P,
    hp: &HyperParams,
    x0: &[f64],
    y0: &[f64],
    seed: u64,
    recorder: &mut dyn Recorder,
) -> Result<RunOutput> {
    plain_run(problem, Algorithm::NsgdaM, hp, x0, y0, seed, recorder)
}

pub fn nsgda_run<P: MinimaxProblem + ?Sized>(
    problem: &P,
    hp: &HyperParams,
    x0: &[f64],
    y0: &[f64],
    seed: u64,
    recorder: &mut dyn Recorder,
) -> Result<RunOutput> {
    plain_run(problem, Algorithm::Nsgda, hp, x0, y0, seed, recorder)
}

pub fn sgda_run<P: MinimaxProblem + ?Sized>(
    problem: &P,
    hp: &HyperParams,
    x0: &[f64],
    y0: &[f64],
    seed: u64,
    recorder: &mut dyn Recorder,
) -> Result<RunOutput> {
    plain_run(problem, Algorithm::Sgda, hp, x0, y0, seed, recorder)
}
