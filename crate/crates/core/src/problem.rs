//! The oracle contract every minimax problem implements, plus the iterate and
//! per-iteration record types the solvers produce.

use crate::domain::DualDomain;
use crate::error::{Error, Result};

/// A finite-sum stochastic minimax problem `min_x max_{y ∈ Y} L(x, y)`,
/// nonconvex in `x` and strongly concave in `y`.
///
/// Stochastic gradients are minibatch means over sample indices; averaging
/// them over the full index set reproduces the full gradient. Implementations
/// are immutable after construction and may be shared across threads.
pub trait MinimaxProblem: Send + Sync {
    fn dim_x(&self) -> usize;

    fn dual_domain(&self) -> &DualDomain;

    fn dim_y(&self) -> usize {
        self.dual_domain().dim()
    }

    fn sample_count(&self) -> usize;

    fn loss(&self, x: &[f64], y: &[f64]) -> Result<f64>;

    fn stoch_grad_x(&self, x: &[f64], y: &[f64], batch: &[usize]) -> Result<Vec<f64>>;

    fn stoch_grad_y(&self, x: &[f64], y: &[f64], batch: &[usize]) -> Result<Vec<f64>>;

    fn full_grad_x(&self, x: &[f64], y: &[f64]) -> Result<Vec<f64>>;

    fn full_grad_y(&self, x: &[f64], y: &[f64]) -> Result<Vec<f64>>;

    /// Exact maximizer `y*(x)` over the dual domain, when available in closed form.
    fn best_response(&self, _x: &[f64]) -> Option<Vec<f64>> {
        None
    }

    /// `∇Φ(x) = ∇_x L(x, y*(x))`.
    fn primal_grad(&self, x: &[f64]) -> Option<Vec<f64>> {
        let y = self.best_response(x)?;
        self.full_grad_x(x, &y).ok()
    }

    /// Strong-concavity modulus in `y`, when known exactly.
    fn strong_concavity(&self) -> Option<f64> {
        None
    }
}

pub(crate) fn check_batch(batch: &[usize], len: usize) -> Result<()> {
    if batch.is_empty() {
        return Err(Error::Empty("sample batch"));
    }
    if let Some(&index) = batch.iter().find(|&&i| i >= len) {
        return Err(Error::IndexOutOfRange { index, len });
    }
    Ok(())
}

pub(crate) fn check_len(v: &[f64], expected: usize) -> Result<()> {
    if v.len() != expected {
        return Err(Error::DimensionMismatch {
            expected,
            found: v.len(),
        });
    }
    Ok(())
}

/// Solver state `(x, y, m)` after `t` iterations.
#[derive(Debug, Clone, PartialEq)]
pub struct IterateState {
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    /// Momentum buffer; stays zero for the solvers without momentum.
    pub m: Vec<f64>,
    pub t: usize,
}

impl IterateState {
    pub fn new(x: Vec<f64>, y: Vec<f64>) -> Self {
        let m = vec![0.0; x.len()];
        Self { x, y, m, t: 0 }
    }
}

/// Metrics for iteration `t`, i.e. the step from `(x_t, y_t)` to `(x_{t+1}, y_{t+1})`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunRecord {
    pub t: usize,
    /// `‖∇Φ(x_t)‖`.
    pub grad_phi_norm: f64,
    /// `‖y_t − y*(x_t)‖`, NaN without a best response.
    pub tracking_error: f64,
    /// `‖m_{t+1} − ∇Φ(x_t)‖` for the momentum solver, NaN otherwise.
    pub momentum_bias: f64,
    /// `L(x_t, y_t)`.
    pub loss: f64,
    pub step_x: f64,
    pub step_y: f64,
}

impl RunRecord {
    /// Bitwise equality, treating NaN fields as equal to each other.
    pub fn bit_eq(&self, other: &RunRecord) -> bool {
        let a = [
            self.grad_phi_norm,
            self.tracking_error,
            self.momentum_bias,
            self.loss,
            self.step_x,
            self.step_y,
        ];
        let b = [
            other.grad_phi_norm,
            other.tracking_error,
            other.momentum_bias,
            other.loss,
            other.step_x,
            other.step_y,
        ];
        self.t == other.t && a.iter().zip(&b).all(|(p, q)| p.to_bits() == q.to_bits())
    }
}
