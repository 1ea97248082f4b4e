use super::features::FeatureMatrix;
use crate::domain::{membership_check, DualDomain};
use crate::error::{Error, Result};
use crate::problem::{check_batch, check_len, MinimaxProblem};
use crate::projections::project;

const SIGMOID_CLAMP: f64 = 500.0;
const FEASIBILITY_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DroParams {
    pub lambda1: f64,
    /// `None` selects `1/N²`, which gives `μ = 1`.
    pub lambda2: Option<f64>,
    pub alpha: f64,
}

impl Default for DroParams {
    fn default() -> Self {
        Self {
            lambda1: 0.001,
            lambda2: None,
            alpha: 10.0,
        }
    }
}

/// Distributionally robust logistic regression:
///
/// `L(x, y) = (1/N) Σ y_i ℓ_i(x) + λ₁ Σ_j αx_j²/(1+αx_j²) − ½λ₂‖Ny − 1‖²`
/// over the probability simplex in `y`, with `ℓ_i(x) = log(1 + exp(−b_i a_iᵀx))`.
#[derive(Debug, Clone)]
pub struct DroProblem {
    features: FeatureMatrix,
    labels: Vec<f64>,
    lambda1: f64,
    lambda2: f64,
    alpha: f64,
    domain: DualDomain,
}

fn logistic_loss(z: f64) -> f64 {
    (-z.abs()).exp().ln_1p() + (-z).max(0.0)
}

// σ(−z) = 1/(1 + e^z)
fn sigmoid_neg(z: f64) -> f64 {
    let z = z.clamp(-SIGMOID_CLAMP, SIGMOID_CLAMP);
    1.0 / (1.0 + z.exp())
}

impl DroProblem {
    pub fn new(features: FeatureMatrix, labels: Vec<f64>, params: DroParams) -> Result<Self> {
        let n = features.rows();
        if n == 0 {
            return Err(Error::Empty("sample set"));
        }
        if labels.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: labels.len(),
            });
        }
        if let Some(bad) = labels.iter().find(|b| **b != 1.0 && **b != -1.0) {
            return Err(Error::Labels(format!("labels must be -1 or +1, found {bad}")));
        }
        let lambda2 = params.lambda2.unwrap_or(1.0 / (n as f64 * n as f64));
        if !(lambda2 > 0.0 && lambda2.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "lambda2 must be positive, got {lambda2}"
            )));
        }
        if !(params.lambda1 >= 0.0 && params.lambda1.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "lambda1 must be nonnegative, got {}",
                params.lambda1
            )));
        }
        if !(params.alpha > 0.0 && params.alpha.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "alpha must be positive, got {}",
                params.alpha
            )));
        }
        Ok(Self {
            features,
            labels,
            lambda1: params.lambda1,
            lambda2,
            alpha: params.alpha,
            domain: DualDomain::Simplex(n),
        })
    }

    pub fn features(&self) -> &FeatureMatrix {
        &self.features
    }

    pub fn labels(&self) -> &[f64] {
        &self.labels
    }

    pub fn lambda1(&self) -> f64 {
        self.lambda1
    }

    pub fn lambda2(&self) -> f64 {
        self.lambda2
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    fn margin(&self, i: usize, x: &[f64]) -> f64 {
        self.labels[i] * self.features.row_dot(i, x)
    }

    /// Per-sample logistic losses `ℓ_i(x)`.
    pub fn sample_losses(&self, x: &[f64]) -> Result<Vec<f64>> {
        check_len(x, self.features.cols())?;
        Ok((0..self.labels.len())
            .map(|i| logistic_loss(self.margin(i, x)))
            .collect())
    }

    pub fn regularizer(&self, x: &[f64]) -> f64 {
        let a = self.alpha;
        self.lambda1 * x.iter().map(|v| a * v * v / (1.0 + a * v * v)).sum::<f64>()
    }

    fn regularizer_grad(&self, x: &[f64]) -> Vec<f64> {
        let a = self.alpha;
        x.iter()
            .map(|v| {
                let d = 1.0 + a * v * v;
                2.0 * self.lambda1 * a * v / (d * d)
            })
            .collect()
    }

    fn dual_penalty(&self, y: &[f64]) -> f64 {
        let n = y.len() as f64;
        0.5 * self.lambda2 * y.iter().map(|v| (n * v - 1.0).powi(2)).sum::<f64>()
    }

    fn dual_penalty_grad(&self, y: &[f64]) -> Vec<f64> {
        let n = y.len() as f64;
        y.iter().map(|v| -self.lambda2 * n * (n * v - 1.0)).collect()
    }

    fn check_point(&self, x: &[f64], y: &[f64]) -> Result<()> {
        check_len(x, self.features.cols())?;
        check_len(y, self.labels.len())
    }

    fn accumulate_grad_x(&self, x: &[f64], y: &[f64], i: usize, weight: f64, out: &mut [f64]) {
        let z = self.margin(i, x);
        let coef = -self.labels[i] * sigmoid_neg(z) * y[i] * weight;
        if coef != 0.0 {
            self.features.add_row_scaled(i, coef, out);
        }
    }

    /// Simplex projection of `ℓ(x)/(λ₂N³) + 1/N`.
    pub fn best_response_exact(&self, x: &[f64]) -> Result<Vec<f64>> {
        let n = self.labels.len() as f64;
        let scale = 1.0 / (self.lambda2 * n * n * n);
        let c: Vec<f64> = self
            .sample_losses(x)?
            .into_iter()
            .map(|l| l * scale + 1.0 / n)
            .collect();
        Ok(project(&c, &self.domain)?.output)
    }
}

impl MinimaxProblem for DroProblem {
    fn dim_x(&self) -> usize {
        self.features.cols()
    }

    fn dual_domain(&self) -> &DualDomain {
        &self.domain
    }

    fn sample_count(&self) -> usize {
        self.labels.len()
    }

    fn loss(&self, x: &[f64], y: &[f64]) -> Result<f64> {
        self.check_point(x, y)?;
        if !membership_check(y, &self.domain, FEASIBILITY_TOL)? {
            return Err(Error::Infeasible { domain: "simplex" });
        }
        let n = self.labels.len() as f64;
        let data: f64 = (0..self.labels.len())
            .map(|i| y[i] * logistic_loss(self.margin(i, x)))
            .sum();
        Ok(data / n + self.regularizer(x) - self.dual_penalty(y))
    }

    fn stoch_grad_x(&self, x: &[f64], y: &[f64], batch: &[usize]) -> Result<Vec<f64>> {
        self.check_point(x, y)?;
        check_batch(batch, self.labels.len())?;
        let mut g = vec![0.0; x.len()];
        let w = 1.0 / batch.len() as f64;
        for &i in batch {
            self.accumulate_grad_x(x, y, i, w, &mut g);
        }
        for (gj, rj) in g.iter_mut().zip(self.regularizer_grad(x)) {
            *gj += rj;
        }
        Ok(g)
    }

    fn stoch_grad_y(&self, x: &[f64], y: &[f64], batch: &[usize]) -> Result<Vec<f64>> {
        self.check_point(x, y)?;
        check_batch(batch, self.labels.len())?;
        let mut g = self.dual_penalty_grad(y);
        let w = 1.0 / batch.len() as f64;
        for &i in batch {
            g[i] += w * logistic_loss(self.margin(i, x));
        }
        Ok(g)
    }

    fn full_grad_x(&self, x: &[f64], y: &[f64]) -> Result<Vec<f64>> {
        self.check_point(x, y)?;
        let mut g = vec![0.0; x.len()];
        let w = 1.0 / self.labels.len() as f64;
        for i in 0..self.labels.len() {
            self.accumulate_grad_x(x, y, i, w, &mut g);
        }
        for (gj, rj) in g.iter_mut().zip(self.regularizer_grad(x)) {
            *gj += rj;
        }
        Ok(g)
    }

    fn full_grad_y(&self, x: &[f64], y: &[f64]) -> Result<Vec<f64>> {
        self.check_point(x, y)?;
        let n = self.labels.len() as f64;
        let mut g = self.dual_penalty_grad(y);
        for (i, gi) in g.iter_mut().enumerate() {
            *gi += logistic_loss(self.margin(i, x)) / n;
        }
        Ok(g)
    }

    fn best_response(&self, x: &[f64]) -> Option<Vec<f64>> {
        self.best_response_exact(x).ok()
    }

    fn strong_concavity(&self) -> Option<f64> {
        let n = self.labels.len() as f64;
        Some(self.lambda2 * n * n)
    }
}
