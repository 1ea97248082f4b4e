//! Single runs: hyperparameter resolution, CSV output and the summary line.

use std::fmt;
use std::fs::{self, File};
use std::io::BufWriter;
use std::path::{Path, PathBuf};

use gsmm_core::linalg::{dist, norm};
use gsmm_core::rng::select_iterate;
use gsmm_core::{
    derive_constants, run, schedule, HyperParams, MinimaxProblem, RunConfig, RunOutput, ScheduleRequest, ScheduleResult,
};

use crate::config::{eval_mode_label, load_problem, ExperimentConfig, HyperSource, LoadedProblem};
use crate::csv::{fmt_float, CsvRecorder};
use crate::error::{BenchError, BenchResult};

/// Schedules asking for more than this many iterations need an explicit `--iters`.
pub const MAX_SCHEDULED_ITERS: u64 = 100_000_000;
/// Minibatches larger than this are rejected.
pub const MAX_BATCH: usize = 10_000_000;

#[derive(Debug, Clone, PartialEq)]
pub struct ResolvedHyper {
    pub hyper: HyperParams,
    pub schedule: Option<ScheduleResult>,
}

/// Turns the config's hyperparameter source into concrete values for this problem.
pub fn resolve_hyper(
    cfg: &ExperimentConfig,
    problem: &dyn MinimaxProblem,
    x0: &[f64],
    y0: &[f64],
) -> BenchResult<ResolvedHyper> {
    let core = BenchError::from_core;
    let (mut hyper, sched) = match &cfg.hyper {
        HyperSource::Manual(hp) => (*hp, None),
        HyperSource::Auto(auto) => {
            let mut pc = auto.constants;
            pc.mu = match auto.mu.or(problem.strong_concavity()) {
                Some(mu) => mu,
                None => return Err(BenchError::Config("schedule needs --mu for this problem".into())),
            };
            let dc = derive_constants(&pc).map_err(core)?;
            let from_start = |what: &str| {
                BenchError::Config(format!(
                    "{what} cannot be measured without a best-response oracle; pass it explicitly"
                ))
            };
            let ystar = problem.best_response(x0);
            let delta_phi = match auto.delta_phi {
                Some(v) => v,
                None => {
                    let ys = ystar.as_ref().ok_or_else(|| from_start("delta_phi"))?;
                    problem.loss(x0, ys).map_err(core)?
                }
            };
            let delta_y0 = match auto.delta_y0 {
                Some(v) => v,
                None => dist(ystar.as_ref().ok_or_else(|| from_start("delta_y0"))?, y0),
            };
            let m0_bias = match auto.m0_bias {
                Some(v) => v,
                None => norm(&problem.primal_grad(x0).ok_or_else(|| from_start("m0_bias"))?),
            };
            let req = ScheduleRequest {
                epsilon: auto.epsilon,
                delta: auto.delta,
                delta_phi,
                delta_y0,
                m0_bias,
            };
            let s = schedule(auto.which, &pc, &dc, &req, auto.source).map_err(core)?;
            if cfg.iters.is_none() && s.t_bound > MAX_SCHEDULED_ITERS {
                return Err(BenchError::Config(format!(
                    "schedule asks for T={} iterations; pass --iters to cap the budget",
                    s.t_bound
                )));
            }
            (s.hyper, Some(s))
        }
    };
    if let Some(t) = cfg.iters {
        hyper.t_max = t;
    }
    if hyper.bx > MAX_BATCH || hyper.by > MAX_BATCH {
        return Err(BenchError::Config(format!(
            "batch sizes bx={} by={} exceed the limit {MAX_BATCH}",
            hyper.bx, hyper.by
        )));
    }
    hyper.validate().map_err(core)?;
    Ok(ResolvedHyper { hyper, schedule: sched })
}

pub fn hyper_fields(hp: &HyperParams) -> Vec<(String, String)> {
    vec![
        ("eta_x".into(), format!("{:e}", hp.eta_x)),
        ("eta_y".into(), format!("{:e}", hp.eta_y)),
        ("beta".into(), format!("{}", hp.beta)),
        ("bx".into(), hp.bx.to_string()),
        ("by".into(), hp.by.to_string()),
        ("t_max".into(), hp.t_max.to_string()),
    ]
}

/// Default file name inside an output directory.
pub fn csv_file_name(cfg: &ExperimentConfig) -> String {
    let stem = match &cfg.dataset {
        crate::config::DatasetSpec::Synthetic(_) => "synthetic".to_string(),
        crate::config::DatasetSpec::Named(n) => Path::new(n)
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| "data".into()),
    };
    format!("{stem}_{}_seed{}.csv", cfg.algo.name(), cfg.seed)
}

/// `out` is a `.csv` file path or a directory that is created on demand.
pub fn csv_path(cfg: &ExperimentConfig) -> BenchResult<PathBuf> {
    let out = &cfg.out;
    if out.extension().is_some_and(|e| e == "csv") {
        if let Some(parent) = out.parent().filter(|p| !p.as_os_str().is_empty()) {
            fs::create_dir_all(parent)?;
        }
        return Ok(out.clone());
    }
    fs::create_dir_all(out)?;
    Ok(out.join(csv_file_name(cfg)))
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentSummary {
    pub csv: PathBuf,
    pub rows: usize,
    pub initial_grad_phi: f64,
    pub final_grad_phi: f64,
    pub best_grad_phi: f64,
    pub wall_ms: f64,
    pub algo: &'static str,
    pub hyper: HyperParams,
    pub x_bar_index: usize,
}

impl fmt::Display for ExperimentSummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "csv={} rows={} algo={} final_grad_phi_norm={} best_grad_phi_norm={} wall_ms={:.1}",
            self.csv.display(),
            self.rows,
            self.algo,
            fmt_float(self.final_grad_phi),
            fmt_float(self.best_grad_phi),
            self.wall_ms
        )?;
        for (k, v) in hyper_fields(&self.hyper) {
            write!(f, " {k}={v}")?;
        }
        write!(f, " x_bar_index={}", self.x_bar_index)
    }
}

fn metadata(cfg: &ExperimentConfig, problem: &dyn MinimaxProblem, resolved: &ResolvedHyper) -> Vec<(String, String)> {
    let mut m: Vec<(String, String)> = vec![
        ("algo".into(), cfg.algo.name().into()),
        ("dataset".into(), cfg.dataset.label()),
        ("samples".into(), problem.sample_count().to_string()),
        ("dim_x".into(), problem.dim_x().to_string()),
        ("seed".into(), cfg.seed.to_string()),
        ("record_every".into(), cfg.record_every.to_string()),
        ("eval_mode".into(), eval_mode_label(&cfg.eval_mode)),
    ];
    if let Some(take) = cfg.take {
        m.push(("take".into(), take.to_string()));
    }
    m.extend(hyper_fields(&resolved.hyper));
    if let (HyperSource::Auto(auto), Some(s)) = (&cfg.hyper, &resolved.schedule) {
        m.push(("schedule".into(), format!("thm{} {}", auto.which, auto.source.name())));
        m.push(("schedule_t_bound".into(), s.t_bound.to_string()));
    }
    m.push((
        "x_bar_index".into(),
        select_iterate(cfg.seed, resolved.hyper.t_max).to_string(),
    ));
    m
}

/// Runs `cfg` on an already loaded problem, streaming rows to `recorder`.
pub fn run_loaded(
    cfg: &ExperimentConfig,
    loaded: &LoadedProblem,
    hyper: HyperParams,
    recorder: &mut dyn gsmm_core::Recorder,
) -> BenchResult<RunOutput> {
    let p = loaded.as_dyn();
    let x0 = loaded.default_x0(cfg.x0_fill);
    let y0 = loaded.default_y0();
    let rc = RunConfig {
        hyper,
        seed: cfg.seed,
        record_every: cfg.record_every,
        eval: cfg.eval_mode,
    };
    run(p, cfg.algo, &rc, &x0, &y0, recorder).map_err(BenchError::from_core)
}

/// Runs one experiment and writes its CSV. A non-finite abort keeps the rows written so far.
pub fn run_experiment(cfg: &ExperimentConfig) -> BenchResult<ExperimentSummary> {
    cfg.validate()?;
    let loaded = load_problem(cfg)?;
    let p = loaded.as_dyn();
    let x0 = loaded.default_x0(cfg.x0_fill);
    let y0 = loaded.default_y0();
    let resolved = resolve_hyper(cfg, p, &x0, &y0)?;
    let path = csv_path(cfg)?;
    let file = BufWriter::new(File::create(&path)?);
    let mut rec = CsvRecorder::new(file, &metadata(cfg, p, &resolved))?;
    let mut first = f64::NAN;
    let out = {
        let mut tap = FirstRow {
            inner: &mut rec,
            first: &mut first,
        };
        run_loaded(cfg, &loaded, resolved.hyper, &mut tap)?
    };
    if let Some(e) = &out.abort {
        rec.comment("abort", &e.to_string());
        let rows = rec.rows();
        rec.finish()?;
        return Err(BenchError::Numerical(format!(
            "{e}; {rows} rows kept in {}",
            path.display()
        )));
    }
    let summary = ExperimentSummary {
        csv: path,
        rows: rec.rows(),
        initial_grad_phi: first,
        final_grad_phi: rec.last().map_or(f64::NAN, |r| r.grad_phi_norm),
        best_grad_phi: rec.best_grad_phi(),
        wall_ms: rec.elapsed_ms(),
        algo: cfg.algo.name(),
        hyper: resolved.hyper,
        x_bar_index: out.x_bar_index,
    };
    rec.finish()?;
    Ok(summary)
}

struct FirstRow<'a> {
    inner: &'a mut dyn gsmm_core::Recorder,
    first: &'a mut f64,
}

impl gsmm_core::Recorder for FirstRow<'_> {
    fn record(&mut self, row: &gsmm_core::RunRecord) {
        if row.t == 0 {
            *self.first = row.grad_phi_norm;
        }
        self.inner.record(row);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::{default_hyper, AutoSchedule, DatasetSpec, SyntheticSpec};
    use gsmm_core::Algorithm;

    fn synthetic_cfg() -> ExperimentConfig {
        let mut hp = default_hyper(Algorithm::NsgdaM);
        hp.t_max = 20;
        ExperimentConfig::new(Algorithm::NsgdaM, DatasetSpec::Synthetic(SyntheticSpec::default()), hp)
    }

    #[test]
    fn iters_override_manual_budget() {
        let mut cfg = synthetic_cfg();
        cfg.iters = Some(7);
        let loaded = load_problem(&cfg).unwrap();
        let x0 = loaded.default_x0(None);
        let y0 = loaded.default_y0();
        let r = resolve_hyper(&cfg, loaded.as_dyn(), &x0, &y0).unwrap();
        assert_eq!(r.hyper.t_max, 7);
        assert!(r.schedule.is_none());
    }

    #[test]
    fn auto_schedule_measures_start_point() {
        let mut cfg = synthetic_cfg();
        let mut auto = AutoSchedule::new(1);
        auto.epsilon = 0.5;
        auto.constants.lx0 = 2.0;
        auto.constants.lx1 = 1.0;
        cfg.hyper = HyperSource::Auto(auto);
        cfg.iters = Some(10);
        let loaded = load_problem(&cfg).unwrap();
        let x0 = loaded.default_x0(None);
        let y0 = loaded.default_y0();
        let r = resolve_hyper(&cfg, loaded.as_dyn(), &x0, &y0).unwrap();
        let s = r.schedule.unwrap();
        assert_eq!(r.hyper.t_max, 10);
        assert_eq!(r.hyper.eta_x, s.hyper.eta_x);
        assert_eq!(r.hyper.beta, s.hyper.beta);
    }

    #[test]
    fn huge_schedule_needs_explicit_budget() {
        let mut cfg = synthetic_cfg();
        let mut auto = AutoSchedule::new(1);
        auto.epsilon = 1e-6;
        auto.constants.sigma_x = 1.0;
        auto.constants.sigma_y = 1.0;
        cfg.hyper = HyperSource::Auto(auto);
        let loaded = load_problem(&cfg).unwrap();
        let x0 = loaded.default_x0(None);
        let y0 = loaded.default_y0();
        let err = resolve_hyper(&cfg, loaded.as_dyn(), &x0, &y0).unwrap_err();
        assert_eq!(err.exit_code(), 2);
    }

    #[test]
    fn file_names() {
        let mut cfg = synthetic_cfg();
        assert_eq!(csv_file_name(&cfg), "synthetic_nsgda-m_seed0.csv");
        cfg.dataset = DatasetSpec::Named("data/diabetes".into());
        cfg.seed = 3;
        assert_eq!(csv_file_name(&cfg), "diabetes_nsgda-m_seed3.csv");
    }
}
