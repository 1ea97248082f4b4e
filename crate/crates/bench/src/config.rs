//! Experiment configuration and the problem it describes.

use std::path::PathBuf;

use gsmm_core::data::load_dataset;
use gsmm_core::problems::{DroParams, DroProblem, NoiseModel, SyntheticProblem, DEFAULT_SAMPLES};
use gsmm_core::{Algorithm, EvalMode, HyperParams, MinimaxProblem, ProblemConstants, ScheduleSource};

use crate::error::{BenchError, BenchResult};

pub const DEFAULT_ITERS: usize = 5000;
pub const DEFAULT_APPROX_ITERS: usize = 10_000;

#[derive(Debug, Clone, PartialEq)]
pub enum DatasetSpec {
    Synthetic(SyntheticSpec),
    /// Benchmark name or path, resolved through `GSMM_DATA_DIR` and `./data`.
    Named(String),
}

impl DatasetSpec {
    pub fn label(&self) -> String {
        match self {
            DatasetSpec::Synthetic(_) => "synthetic".into(),
            DatasetSpec::Named(n) => n.clone(),
        }
    }
}

/// Quartic synthetic problem with `A = I`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SyntheticSpec {
    pub dim: usize,
    pub mu: f64,
    pub quartic_weight: f64,
    /// Gaussian noise scale for both blocks; 0 disables noise.
    pub noise_sigma: f64,
    pub samples: usize,
    pub noise_seed: u64,
}

impl Default for SyntheticSpec {
    fn default() -> Self {
        Self {
            dim: 5,
            mu: 1.0,
            quartic_weight: 0.1,
            noise_sigma: 0.0,
            samples: DEFAULT_SAMPLES,
            noise_seed: 0,
        }
    }
}

/// `auto:thmK` hyperparameters. Unset request fields are measured at the start point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AutoSchedule {
    pub which: u8,
    pub source: ScheduleSource,
    /// `mu = None` takes the problem's own strong-concavity modulus.
    pub constants: ProblemConstants,
    pub mu: Option<f64>,
    pub epsilon: f64,
    pub delta: f64,
    pub delta_phi: Option<f64>,
    pub delta_y0: Option<f64>,
    pub m0_bias: Option<f64>,
}

impl AutoSchedule {
    pub fn new(which: u8) -> Self {
        Self {
            which,
            source: ScheduleSource::Statement,
            constants: ProblemConstants::default(),
            mu: None,
            epsilon: 0.1,
            delta: 0.1,
            delta_phi: None,
            delta_y0: None,
            m0_bias: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum HyperSource {
    Manual(HyperParams),
    Auto(AutoSchedule),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub algo: Algorithm,
    pub dataset: DatasetSpec,
    pub hyper: HyperSource,
    pub seed: u64,
    /// Overrides `t_max` from either hyperparameter source.
    pub iters: Option<usize>,
    pub record_every: usize,
    pub eval_mode: EvalMode,
    pub take: Option<usize>,
    /// Output directory, or a file path ending in `.csv`.
    pub out: PathBuf,
    pub dro: DroParams,
    /// Fill value for `x0`; defaults to 0 for datasets and 1 for the synthetic problem.
    pub x0_fill: Option<f64>,
}

impl ExperimentConfig {
    pub fn new(algo: Algorithm, dataset: DatasetSpec, hyper: HyperParams) -> Self {
        Self {
            algo,
            dataset,
            hyper: HyperSource::Manual(hyper),
            seed: 0,
            iters: None,
            record_every: 1,
            eval_mode: EvalMode::Exact,
            take: None,
            out: PathBuf::from("out"),
            dro: DroParams::default(),
            x0_fill: None,
        }
    }

    pub fn validate(&self) -> BenchResult<()> {
        if self.record_every == 0 {
            return Err(BenchError::Config("record_every must be >= 1".into()));
        }
        if self.iters == Some(0) {
            return Err(BenchError::Config("iters must be >= 1".into()));
        }
        if self.take == Some(0) {
            return Err(BenchError::Config("take must be >= 1".into()));
        }
        if let HyperSource::Manual(hp) = &self.hyper {
            hp.validate().map_err(BenchError::from_core)?;
        }
        Ok(())
    }
}

/// Default manual hyperparameters: batch 1 for NSGDA-M, 50 otherwise.
pub fn default_hyper(algo: Algorithm) -> HyperParams {
    let b = default_batch(algo);
    HyperParams {
        eta_x: 1e-3,
        eta_y: 1e-2,
        beta: 0.9,
        bx: b,
        by: b,
        t_max: DEFAULT_ITERS,
    }
}

pub fn default_batch(algo: Algorithm) -> usize {
    match algo {
        Algorithm::NsgdaM => 1,
        Algorithm::Nsgda | Algorithm::Sgda => 50,
    }
}

/// `exact`, `none`, `approx:TOL` or `approx:TOL:MAX_ITERS`.
pub fn parse_eval_mode(s: &str) -> BenchResult<EvalMode> {
    let bad = || {
        BenchError::Config(format!(
            "eval mode must be exact, none or approx:TOL[:MAX_ITERS], got '{s}'"
        ))
    };
    match s {
        "exact" => return Ok(EvalMode::Exact),
        "none" => return Ok(EvalMode::None),
        _ => {}
    }
    let rest = s.strip_prefix("approx").ok_or_else(bad)?;
    let mut parts = rest.trim_start_matches(':').split(':').filter(|p| !p.is_empty());
    let tol = match parts.next() {
        Some(t) => t.parse::<f64>().map_err(|_| bad())?,
        None => 1e-8,
    };
    let max_iters = match parts.next() {
        Some(k) => k.parse::<usize>().map_err(|_| bad())?,
        None => DEFAULT_APPROX_ITERS,
    };
    if parts.next().is_some() || !(tol > 0.0 && tol.is_finite()) {
        return Err(bad());
    }
    Ok(EvalMode::Approx {
        tol,
        max_iters,
        step: None,
    })
}

pub fn eval_mode_label(mode: &EvalMode) -> String {
    match mode {
        EvalMode::Exact => "exact".into(),
        EvalMode::None => "none".into(),
        EvalMode::Approx { tol, max_iters, step } => match step {
            Some(s) => format!("approx(tol={tol:e},max_iters={max_iters},step={s:e})"),
            None => format!("approx(tol={tol:e},max_iters={max_iters})"),
        },
    }
}

/// `auto:thmK` or `thmK`, `K ∈ 1..=4`.
pub fn parse_auto(s: &str) -> BenchResult<u8> {
    let k = s.strip_prefix("auto:").unwrap_or(s);
    k.strip_prefix("thm")
        .and_then(|d| d.parse::<u8>().ok())
        .filter(|d| (1..=4).contains(d))
        .ok_or_else(|| BenchError::Config(format!("schedule must be auto:thm1 .. auto:thm4, got '{s}'")))
}

/// A problem built from a config, with its default start point.
pub enum LoadedProblem {
    Dro(DroProblem),
    Synthetic(SyntheticProblem),
}

impl LoadedProblem {
    pub fn as_dyn(&self) -> &dyn MinimaxProblem {
        match self {
            LoadedProblem::Dro(p) => p,
            LoadedProblem::Synthetic(p) => p,
        }
    }

    pub fn default_x0(&self, fill: Option<f64>) -> Vec<f64> {
        let p = self.as_dyn();
        let v = fill.unwrap_or(match self {
            LoadedProblem::Dro(_) => 0.0,
            LoadedProblem::Synthetic(_) => 1.0,
        });
        vec![v; p.dim_x()]
    }

    /// Uniform weights on the simplex, the origin otherwise.
    pub fn default_y0(&self) -> Vec<f64> {
        self.as_dyn().dual_domain().center()
    }
}

pub fn build_synthetic(spec: &SyntheticSpec) -> BenchResult<SyntheticProblem> {
    let p = SyntheticProblem::identity(spec.dim, spec.mu, spec.quartic_weight).map_err(BenchError::from_core)?;
    if spec.noise_sigma == 0.0 {
        return Ok(p);
    }
    let model = NoiseModel::Gaussian {
        sigma_x: spec.noise_sigma,
        sigma_y: spec.noise_sigma,
    };
    p.with_noise(model, spec.samples, spec.noise_seed)
        .map_err(BenchError::from_core)
}

pub fn load_problem(cfg: &ExperimentConfig) -> BenchResult<LoadedProblem> {
    match &cfg.dataset {
        DatasetSpec::Synthetic(spec) => Ok(LoadedProblem::Synthetic(build_synthetic(spec)?)),
        DatasetSpec::Named(name) => {
            let mut d = load_dataset(name).map_err(|e| BenchError::Data(e.to_string()))?;
            if let Some(take) = cfg.take {
                if take < d.len() {
                    d = d.subsample(take, cfg.seed);
                }
            }
            let p = d.to_dro(cfg.dro).map_err(|e| match e {
                gsmm_core::Error::InvalidArgument(_) => BenchError::Config(e.to_string()),
                _ => BenchError::Data(e.to_string()),
            })?;
            Ok(LoadedProblem::Dro(p))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eval_mode_strings() {
        assert_eq!(parse_eval_mode("exact").unwrap(), EvalMode::Exact);
        assert_eq!(parse_eval_mode("none").unwrap(), EvalMode::None);
        assert_eq!(
            parse_eval_mode("approx:1e-6").unwrap(),
            EvalMode::Approx {
                tol: 1e-6,
                max_iters: DEFAULT_APPROX_ITERS,
                step: None
            }
        );
        assert_eq!(
            parse_eval_mode("approx:1e-6:50").unwrap(),
            EvalMode::Approx {
                tol: 1e-6,
                max_iters: 50,
                step: None
            }
        );
        for bad in ["approx:-1", "approx:x", "fast", "approx:1:2:3"] {
            assert!(parse_eval_mode(bad).is_err(), "{bad}");
        }
        let label = eval_mode_label(&parse_eval_mode("approx:1e-6:50").unwrap());
        assert_eq!(label, "approx(tol=1e-6,max_iters=50)");
    }

    #[test]
    fn auto_strings() {
        assert_eq!(parse_auto("auto:thm3").unwrap(), 3);
        assert_eq!(parse_auto("thm1").unwrap(), 1);
        assert!(parse_auto("auto:thm5").is_err());
        assert!(parse_auto("auto").is_err());
    }

    #[test]
    fn stride_and_budget_checked() {
        let mut cfg = ExperimentConfig::new(
            Algorithm::NsgdaM,
            DatasetSpec::Synthetic(SyntheticSpec::default()),
            default_hyper(Algorithm::NsgdaM),
        );
        assert!(cfg.validate().is_ok());
        cfg.record_every = 0;
        assert_eq!(cfg.validate().unwrap_err().exit_code(), 2);
        cfg.record_every = 1;
        cfg.iters = Some(0);
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn default_start_points() {
        let p = LoadedProblem::Synthetic(build_synthetic(&SyntheticSpec::default()).unwrap());
        assert_eq!(p.default_x0(None), vec![1.0; 5]);
        assert_eq!(p.default_y0(), vec![0.0; 5]);
    }
}
