use crate::domain::DualDomain;
use crate::error::{Error, Result};
use crate::problem::{check_batch, check_len, MinimaxProblem};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

/// Additive gradient noise. Each model is realized as a finite table of
/// antithetic pairs `(v, −v)`, so the full-index mean is exactly zero.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NoiseModel {
    None,
    /// Gaussian with `E‖ξ_x‖² = sigma_x²` and `E‖ξ_y‖² = sigma_y²`.
    Gaussian {
        sigma_x: f64,
        sigma_y: f64,
    },
    /// Uniform direction with norm exactly `radius_x` (resp. `radius_y`).
    Bounded {
        radius_x: f64,
        radius_y: f64,
    },
}

pub const DEFAULT_SAMPLES: usize = 64;

/// `L(x, y) = w·Σ x_i⁴ + xᵀAy − (μ/2)‖y‖²` over `y ∈ ℝᵐ`.
#[derive(Debug, Clone)]
pub struct SyntheticProblem {
    coupling: Vec<f64>,
    n: usize,
    m: usize,
    mu: f64,
    quartic_weight: f64,
    samples: usize,
    noise_x: Vec<f64>,
    noise_y: Vec<f64>,
    domain: DualDomain,
}

impl SyntheticProblem {
    /// `coupling` is the row-major `n × m` matrix `A`.
    pub fn new(coupling: Vec<f64>, n: usize, m: usize, mu: f64, quartic_weight: f64) -> Result<Self> {
        if n == 0 || m == 0 {
            return Err(Error::Empty("synthetic dimensions"));
        }
        check_len(&coupling, n * m)?;
        if !(mu > 0.0 && mu.is_finite()) {
            return Err(Error::InvalidArgument(format!("mu must be positive, got {mu}")));
        }
        if !quartic_weight.is_finite() || coupling.iter().any(|a| !a.is_finite()) {
            return Err(Error::NonFinite {
                what: "synthetic coefficients",
                iteration: None,
            });
        }
        Ok(Self {
            coupling,
            n,
            m,
            mu,
            quartic_weight,
            samples: DEFAULT_SAMPLES,
            noise_x: vec![0.0; DEFAULT_SAMPLES * n],
            noise_y: vec![0.0; DEFAULT_SAMPLES * m],
            domain: DualDomain::FullSpace(m),
        })
    }

    /// `A = I_n`.
    pub fn identity(n: usize, mu: f64, quartic_weight: f64) -> Result<Self> {
        let mut a = vec![0.0; n * n];
        for i in 0..n {
            a[i * n + i] = 1.0;
        }
        Self::new(a, n, n, mu, quartic_weight)
    }

    /// Replaces the noise table with `samples` draws (must be even) from `model`.
    pub fn with_noise(mut self, model: NoiseModel, samples: usize, seed: u64) -> Result<Self> {
        if samples < 2 || !samples.is_multiple_of(2) {
            return Err(Error::InvalidArgument(format!(
                "noise table needs an even sample count >= 2, got {samples}"
            )));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        self.samples = samples;
        self.noise_x = noise_table(&mut rng, model, samples, self.n, true)?;
        self.noise_y = noise_table(&mut rng, model, samples, self.m, false)?;
        Ok(self)
    }

    pub fn coupling(&self) -> &[f64] {
        &self.coupling
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn quartic_weight(&self) -> f64 {
        self.quartic_weight
    }

    /// `Aᵀx`
    fn at_x(&self, x: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.m];
        for (i, xi) in x.iter().enumerate() {
            let row = &self.coupling[i * self.m..(i + 1) * self.m];
            for (o, a) in out.iter_mut().zip(row) {
                *o += xi * a;
            }
        }
        out
    }

    /// `Ay`
    fn a_y(&self, y: &[f64]) -> Vec<f64> {
        (0..self.n)
            .map(|i| {
                self.coupling[i * self.m..(i + 1) * self.m]
                    .iter()
                    .zip(y)
                    .map(|(a, b)| a * b)
                    .sum()
            })
            .collect()
    }

    fn exact_grad_x(&self, x: &[f64], y: &[f64]) -> Vec<f64> {
        let ay = self.a_y(y);
        x.iter()
            .zip(ay)
            .map(|(xi, a)| 4.0 * self.quartic_weight * xi * xi * xi + a)
            .collect()
    }

    fn exact_grad_y(&self, x: &[f64], y: &[f64]) -> Vec<f64> {
        self.at_x(x)
            .into_iter()
            .zip(y)
            .map(|(a, yi)| a - self.mu * yi)
            .collect()
    }

    fn check_point(&self, x: &[f64], y: &[f64]) -> Result<()> {
        check_len(x, self.n)?;
        check_len(y, self.m)
    }
}

fn noise_table(rng: &mut ChaCha8Rng, model: NoiseModel, samples: usize, dim: usize, primal: bool) -> Result<Vec<f64>> {
    let mut table = vec![0.0; samples * dim];
    let (scale, bounded) = match model {
        NoiseModel::None => return Ok(table),
        NoiseModel::Gaussian { sigma_x, sigma_y } => (if primal { sigma_x } else { sigma_y }, false),
        NoiseModel::Bounded { radius_x, radius_y } => (if primal { radius_x } else { radius_y }, true),
    };
    if !(scale >= 0.0 && scale.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "noise scale must be nonnegative, got {scale}"
        )));
    }
    for pair in 0..samples / 2 {
        let mut v: Vec<f64> = (0..dim).map(|_| StandardNormal.sample(rng)).collect();
        if bounded {
            let norm = crate::linalg::norm(&v);
            let s = if norm > 0.0 { scale / norm } else { 0.0 };
            v.iter_mut().for_each(|c| *c *= s);
        } else {
            let s = scale / (dim as f64).sqrt();
            v.iter_mut().for_each(|c| *c *= s);
        }
        let a = 2 * pair * dim;
        table[a..a + dim].copy_from_slice(&v);
        for (t, c) in table[a + dim..a + 2 * dim].iter_mut().zip(&v) {
            *t = -c;
        }
    }
    Ok(table)
}

fn add_noise_mean(g: &mut [f64], table: &[f64], batch: &[usize]) {
    let dim = g.len();
    let mut acc = vec![0.0; dim];
    for &i in batch {
        for (a, v) in acc.iter_mut().zip(&table[i * dim..(i + 1) * dim]) {
            *a += v;
        }
    }
    let w = 1.0 / batch.len() as f64;
    for (gj, a) in g.iter_mut().zip(acc) {
        *gj += w * a;
    }
}

impl MinimaxProblem for SyntheticProblem {
    fn dim_x(&self) -> usize {
        self.n
    }

    fn dual_domain(&self) -> &DualDomain {
        &self.domain
    }

    fn sample_count(&self) -> usize {
        self.samples
    }

    fn loss(&self, x: &[f64], y: &[f64]) -> Result<f64> {
        self.check_point(x, y)?;
        let quartic: f64 = x.iter().map(|v| v.powi(4)).sum();
        let bilinear: f64 = self.a_y(y).iter().zip(x).map(|(a, b)| a * b).sum();
        let quad: f64 = y.iter().map(|v| v * v).sum();
        Ok(self.quartic_weight * quartic + bilinear - 0.5 * self.mu * quad)
    }

    fn stoch_grad_x(&self, x: &[f64], y: &[f64], batch: &[usize]) -> Result<Vec<f64>> {
        self.check_point(x, y)?;
        check_batch(batch, self.samples)?;
        let mut g = self.exact_grad_x(x, y);
        add_noise_mean(&mut g, &self.noise_x, batch);
        Ok(g)
    }

    fn stoch_grad_y(&self, x: &[f64], y: &[f64], batch: &[usize]) -> Result<Vec<f64>> {
        self.check_point(x, y)?;
        check_batch(batch, self.samples)?;
        let mut g = self.exact_grad_y(x, y);
        add_noise_mean(&mut g, &self.noise_y, batch);
        Ok(g)
    }

    fn full_grad_x(&self, x: &[f64], y: &[f64]) -> Result<Vec<f64>> {
        self.check_point(x, y)?;
        Ok(self.exact_grad_x(x, y))
    }

    fn full_grad_y(&self, x: &[f64], y: &[f64]) -> Result<Vec<f64>> {
        self.check_point(x, y)?;
        Ok(self.exact_grad_y(x, y))
    }

    fn best_response(&self, x: &[f64]) -> Option<Vec<f64>> {
        if x.len() != self.n {
            return None;
        }
        Some(self.at_x(x).into_iter().map(|v| v / self.mu).collect())
    }

    fn primal_grad(&self, x: &[f64]) -> Option<Vec<f64>> {
        let ystar = self.best_response(x)?;
        let aat = self.a_y(&ystar);
        Some(
            x.iter()
                .zip(aat)
                .map(|(xi, a)| 4.0 * self.quartic_weight * xi * xi * xi + a)
                .collect(),
        )
    }

    fn strong_concavity(&self) -> Option<f64> {
        Some(self.mu)
    }
}
