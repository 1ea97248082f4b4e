//! Command-line front end.

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use gsmm_core::data::{benchmark_info, load_dataset};
use gsmm_core::problems::{DroParams, DEFAULT_SAMPLES};
use gsmm_core::{
    derive_constants, schedule, Algorithm, HyperParams, ProblemConstants, ScheduleRequest, ScheduleSource,
};

use crate::config::{
    build_synthetic, default_hyper, load_problem, parse_auto, parse_eval_mode, AutoSchedule, DatasetSpec,
    ExperimentConfig, HyperSource, LoadedProblem, SyntheticSpec, DEFAULT_ITERS,
};
use crate::csv::fmt_float;
use crate::error::{BenchError, BenchResult};
use crate::experiment::{hyper_fields, run_experiment};
use crate::grid::{grid_search, GridSpec, Selection, BETA_GRID, STEP_GRID};
use crate::suite::{dro_suite, synthetic_suite, SuiteOptions};

#[derive(Debug, Parser)]
#[command(
    name = "gsmm",
    version,
    about = "Stochastic minimax solvers: runs, grid search, schedules and probes"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run one experiment and write its trajectory CSV.
    Run(RunArgs),
    /// Search learning rates and momentum, then rerun the winner.
    Grid(GridArgs),
    /// Print a closed-form schedule as key=value lines.
    Schedule(ScheduleArgs),
    /// Run the probe suite on a dataset and on the synthetic problem.
    Verify(VerifyArgs),
    /// Print dataset statistics.
    Parse(ParseArgs),
}

#[derive(Debug, Clone, Args)]
pub struct ConstantArgs {
    /// Strong-concavity modulus; defaults to the problem's own when it has one.
    #[arg(long)]
    pub mu: Option<f64>,
    #[arg(long = "b", default_value_t = 0.0)]
    pub b: f64,
    #[arg(long, default_value_t = 1.0)]
    pub lx0: f64,
    #[arg(long, default_value_t = 1.0)]
    pub lx1: f64,
    #[arg(long, default_value_t = 1.0)]
    pub ly0: f64,
    #[arg(long, default_value_t = 0.0)]
    pub ly1: f64,
    #[arg(long, default_value_t = 0.0)]
    pub sigma_x: f64,
    #[arg(long, default_value_t = 0.0)]
    pub sigma_y: f64,
    #[arg(long, default_value_t = 1.0)]
    pub c_abs: f64,
}

impl ConstantArgs {
    fn constants(&self, mu: f64) -> ProblemConstants {
        ProblemConstants {
            mu,
            b: self.b,
            lx0: self.lx0,
            lx1: self.lx1,
            ly0: self.ly0,
            ly1: self.ly1,
            sigma_x: self.sigma_x,
            sigma_y: self.sigma_y,
            c_abs: self.c_abs,
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct RequestArgs {
    #[arg(long, default_value_t = 0.1)]
    pub epsilon: f64,
    #[arg(long, default_value_t = 0.1)]
    pub delta: f64,
    /// Initial primal gap; measured as Φ(x0) when omitted.
    #[arg(long)]
    pub delta_phi: Option<f64>,
    /// Initial tracking error; measured when omitted.
    #[arg(long)]
    pub delta_y0: Option<f64>,
    /// Initial momentum bias; ‖∇Φ(x0)‖ when omitted.
    #[arg(long)]
    pub m0_bias: Option<f64>,
    #[arg(long, default_value = "statement")]
    pub schedule_source: String,
}

#[derive(Debug, Clone, Args)]
pub struct ExperimentArgs {
    #[arg(long, default_value = "nsgda-m")]
    pub algo: String,
    /// Benchmark name, LIBSVM path, or `synthetic`.
    #[arg(long, default_value = "diabetes")]
    pub dataset: String,
    /// `auto:thm1` .. `auto:thm4`; excludes the manual step flags.
    #[arg(long)]
    pub hyper: Option<String>,
    #[arg(long)]
    pub eta_x: Option<f64>,
    #[arg(long)]
    pub eta_y: Option<f64>,
    #[arg(long)]
    pub beta: Option<f64>,
    /// Sets both batch sizes.
    #[arg(long)]
    pub batch: Option<usize>,
    #[arg(long)]
    pub bx: Option<usize>,
    #[arg(long)]
    pub by: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Iteration budget; overrides a schedule's T.
    #[arg(long)]
    pub iters: Option<usize>,
    #[arg(long, default_value_t = 1)]
    pub record_every: usize,
    /// `exact`, `none` or `approx:TOL[:MAX_ITERS]`.
    #[arg(long, default_value = "exact")]
    pub eval_mode: String,
    /// Subsample this many samples (seeded).
    #[arg(long)]
    pub take: Option<usize>,
    /// Output directory, or a path ending in `.csv`.
    #[arg(long, default_value = "out")]
    pub out: PathBuf,
    #[arg(long)]
    pub lambda1: Option<f64>,
    #[arg(long)]
    pub lambda2: Option<f64>,
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Fill value for the initial primal point.
    #[arg(long)]
    pub x0: Option<f64>,
    #[arg(long, default_value_t = 5)]
    pub synthetic_dim: usize,
    #[arg(long, default_value_t = 1.0)]
    pub synthetic_mu: f64,
    #[arg(long, default_value_t = 0.1)]
    pub quartic_weight: f64,
    #[arg(long, default_value_t = 0.0)]
    pub noise_sigma: f64,
    #[arg(long, default_value_t = DEFAULT_SAMPLES)]
    pub noise_samples: usize,
    #[command(flatten)]
    pub constants: ConstantArgs,
    #[command(flatten)]
    pub request: RequestArgs,
}

#[derive(Debug, Clone, Args)]
pub struct RunArgs {
    #[command(flatten)]
    pub exp: ExperimentArgs,
}

#[derive(Debug, Clone, Args)]
pub struct GridArgs {
    #[command(flatten)]
    pub exp: ExperimentArgs,
    /// Comma-separated list.
    #[arg(long, value_delimiter = ',')]
    pub eta_x_grid: Option<Vec<f64>>,
    #[arg(long, value_delimiter = ',')]
    pub eta_y_grid: Option<Vec<f64>>,
    #[arg(long, value_delimiter = ',')]
    pub beta_grid: Option<Vec<f64>>,
    /// `mean-last-10` or `final`.
    #[arg(long, default_value = "mean-last-10")]
    pub selection_metric: String,
    #[arg(long)]
    pub workers: Option<usize>,
}

#[derive(Debug, Clone, Args)]
pub struct ScheduleArgs {
    /// 1 to 4.
    #[arg(long)]
    pub theorem: u8,
    #[command(flatten)]
    pub constants: ConstantArgs,
    #[command(flatten)]
    pub request: RequestArgs,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    #[arg(long, default_value = "diabetes")]
    pub dataset: String,
    #[arg(long)]
    pub take: Option<usize>,
    #[arg(long, default_value_t = 20)]
    pub points: usize,
    #[arg(long, default_value_t = 100_000)]
    pub draws: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 1)]
    pub synthetic_dim: usize,
    #[arg(long, default_value_t = 2.0)]
    pub synthetic_mu: f64,
    #[arg(long, default_value_t = 0.1)]
    pub quartic_weight: f64,
}

#[derive(Debug, Clone, Args)]
pub struct ParseArgs {
    /// Benchmark name or LIBSVM path.
    pub dataset: String,
    /// Declared feature count, when the file's highest index is lower.
    #[arg(long)]
    pub n_features: Option<usize>,
}

fn config_err(msg: impl Into<String>) -> BenchError {
    BenchError::Config(msg.into())
}

pub fn experiment_config(a: &ExperimentArgs) -> BenchResult<ExperimentConfig> {
    let algo = Algorithm::parse(&a.algo).map_err(|e| config_err(e.to_string()))?;
    let dataset = if a.dataset == "synthetic" {
        DatasetSpec::Synthetic(SyntheticSpec {
            dim: a.synthetic_dim,
            mu: a.synthetic_mu,
            quartic_weight: a.quartic_weight,
            noise_sigma: a.noise_sigma,
            samples: a.noise_samples,
            noise_seed: a.seed,
        })
    } else {
        DatasetSpec::Named(a.dataset.clone())
    };
    let manual_flags = a.eta_x.is_some() || a.eta_y.is_some() || a.beta.is_some();
    let hyper = match &a.hyper {
        Some(h) => {
            if manual_flags {
                return Err(config_err(
                    "--hyper auto:thmK cannot be combined with --eta-x, --eta-y or --beta",
                ));
            }
            let mut auto = AutoSchedule::new(parse_auto(h)?);
            auto.source = ScheduleSource::parse(&a.request.schedule_source).map_err(|e| config_err(e.to_string()))?;
            auto.constants = a.constants.constants(a.constants.mu.unwrap_or(1.0));
            auto.mu = a.constants.mu;
            auto.epsilon = a.request.epsilon;
            auto.delta = a.request.delta;
            auto.delta_phi = a.request.delta_phi;
            auto.delta_y0 = a.request.delta_y0;
            auto.m0_bias = a.request.m0_bias;
            HyperSource::Auto(auto)
        }
        None => {
            let d = default_hyper(algo);
            let b = a.batch;
            HyperSource::Manual(HyperParams {
                eta_x: a.eta_x.unwrap_or(d.eta_x),
                eta_y: a.eta_y.unwrap_or(d.eta_y),
                beta: a.beta.unwrap_or(d.beta),
                bx: a.bx.or(b).unwrap_or(d.bx),
                by: a.by.or(b).unwrap_or(d.by),
                t_max: a.iters.unwrap_or(DEFAULT_ITERS),
            })
        }
    };
    let defaults = DroParams::default();
    let mut cfg = ExperimentConfig::new(algo, dataset, default_hyper(algo));
    cfg.hyper = hyper;
    cfg.seed = a.seed;
    cfg.iters = a.iters;
    cfg.record_every = a.record_every;
    cfg.eval_mode = parse_eval_mode(&a.eval_mode)?;
    cfg.take = a.take;
    cfg.out = a.out.clone();
    cfg.dro = DroParams {
        lambda1: a.lambda1.unwrap_or(defaults.lambda1),
        lambda2: a.lambda2.or(defaults.lambda2),
        alpha: a.alpha.unwrap_or(defaults.alpha),
    };
    cfg.x0_fill = a.x0;
    cfg.validate()?;
    Ok(cfg)
}

pub fn grid_spec(a: &GridArgs) -> BenchResult<GridSpec> {
    let d = GridSpec::default();
    let g = GridSpec {
        eta_x_grid: a.eta_x_grid.clone().unwrap_or_else(|| STEP_GRID.to_vec()),
        eta_y_grid: a.eta_y_grid.clone().unwrap_or_else(|| STEP_GRID.to_vec()),
        beta_grid: a.beta_grid.clone().unwrap_or_else(|| BETA_GRID.to_vec()),
        batch: a.exp.batch,
        selection_metric: Selection::parse(&a.selection_metric)?,
        workers: a.workers.unwrap_or(d.workers),
    };
    g.validate()?;
    Ok(g)
}

fn print_lines(out: &mut dyn Write, lines: &[(String, String)]) -> BenchResult<()> {
    for (k, v) in lines {
        writeln!(out, "{k}={v}")?;
    }
    Ok(())
}

pub fn schedule_lines(a: &ScheduleArgs) -> BenchResult<Vec<(String, String)>> {
    let core = BenchError::from_core;
    let pc = a.constants.constants(a.constants.mu.unwrap_or(1.0));
    let dc = derive_constants(&pc).map_err(core)?;
    let source = ScheduleSource::parse(&a.request.schedule_source).map_err(core)?;
    let req = ScheduleRequest {
        epsilon: a.request.epsilon,
        delta: a.request.delta,
        delta_phi: a.request.delta_phi.unwrap_or(1.0),
        delta_y0: a.request.delta_y0.unwrap_or(0.0),
        m0_bias: a.request.m0_bias.unwrap_or(0.0),
    };
    let s = schedule(a.theorem, &pc, &dc, &req, source).map_err(core)?;
    let f = |v: f64| fmt_float(v);
    let mut lines = vec![
        ("theorem".to_string(), a.theorem.to_string()),
        ("source".to_string(), source.name().to_string()),
        ("kappa".to_string(), f(dc.kappa)),
        ("l_y".to_string(), f(dc.l_y)),
        ("l0".to_string(), f(dc.l0)),
        ("l1".to_string(), f(dc.l1)),
        ("kappa_tilde".to_string(), f(dc.kappa_tilde)),
        ("one_minus_beta".to_string(), f(s.one_minus_beta)),
        ("beta".to_string(), f(s.hyper.beta)),
        ("eta_x".to_string(), f(s.hyper.eta_x)),
        ("eta_y".to_string(), f(s.hyper.eta_y)),
        ("bx".to_string(), s.hyper.bx.to_string()),
        ("by".to_string(), s.hyper.by.to_string()),
        ("t_raw".to_string(), f(s.t_raw)),
        ("t_bound".to_string(), s.t_bound.to_string()),
        ("init_radius".to_string(), f(s.init_radius)),
    ];
    for (k, v) in &s.active_branch {
        lines.push((format!("active_branch.{k}"), v.to_string()));
    }
    Ok(lines)
}

pub fn parse_lines(a: &ParseArgs) -> BenchResult<Vec<(String, String)>> {
    let mut d = load_dataset(&a.dataset).map_err(|e| BenchError::Data(e.to_string()))?;
    if let Some(n) = a.n_features {
        d = d.with_n_features(n).map_err(|e| BenchError::Data(e.to_string()))?;
    }
    let mut lines = vec![
        ("name".to_string(), d.name.clone()),
        ("samples".to_string(), d.len().to_string()),
        ("features".to_string(), d.n_features.to_string()),
        ("nnz".to_string(), d.nnz().to_string()),
    ];
    for (label, count) in d.label_counts() {
        lines.push((format!("label.{label}"), count.to_string()));
    }
    let table = match benchmark_info(&d.name).or(benchmark_info(&a.dataset)) {
        Some(info) => (info.samples == d.len() && info.features == d.n_features).to_string(),
        None => "unknown".into(),
    };
    lines.push(("table_match".to_string(), table));
    Ok(lines)
}

pub fn verify_lines(a: &VerifyArgs) -> BenchResult<Vec<(String, String)>> {
    let core = BenchError::from_core;
    let opts = SuiteOptions {
        points: a.points.max(1),
        draws: a.draws,
        seed: a.seed,
    };
    let mut cfg = ExperimentConfig::new(
        Algorithm::NsgdaM,
        DatasetSpec::Named(a.dataset.clone()),
        default_hyper(Algorithm::NsgdaM),
    );
    cfg.take = a.take;
    cfg.seed = a.seed;
    let mut lines = Vec::new();
    if let LoadedProblem::Dro(p) = load_problem(&cfg)? {
        lines.push(("dataset".to_string(), a.dataset.clone()));
        lines.extend(dro_suite(&p, &opts).map_err(core)?);
    }
    let spec = SyntheticSpec {
        dim: a.synthetic_dim,
        mu: a.synthetic_mu,
        quartic_weight: a.quartic_weight,
        ..SyntheticSpec::default()
    };
    lines.extend(synthetic_suite(&build_synthetic(&spec)?, &opts).map_err(core)?);
    Ok(lines)
}

/// Executes a parsed command, writing results to `out` and warnings to stderr.
pub fn execute(cli: &Cli, out: &mut dyn Write) -> BenchResult<()> {
    match &cli.command {
        Command::Run(a) => {
            let cfg = experiment_config(&a.exp)?;
            let summary = run_experiment(&cfg)?;
            writeln!(out, "{summary}")?;
        }
        Command::Grid(a) => {
            let cfg = experiment_config(&a.exp)?;
            let spec = grid_spec(a)?;
            let outcome = grid_search(&cfg, &spec)?;
            if outcome.budget_warning {
                eprintln!("warning: grid exceeds {} total iterations", crate::grid::BUDGET_WARNING);
            }
            let summary = run_experiment(&outcome.best)?;
            let best = &outcome.rows[0];
            write!(out, "combos={} table=", outcome.rows.len())?;
            if let Some(t) = &outcome.table {
                write!(out, "{}", t.display())?;
            }
            write!(out, " selection_metric={}", fmt_float(best.selection_metric))?;
            for (k, v) in hyper_fields(&best.hyper) {
                write!(out, " {k}={v}")?;
            }
            writeln!(out)?;
            writeln!(out, "{summary}")?;
        }
        Command::Schedule(a) => print_lines(out, &schedule_lines(a)?)?,
        Command::Verify(a) => print_lines(out, &verify_lines(a)?)?,
        Command::Parse(a) => print_lines(out, &parse_lines(a)?)?,
    }
    Ok(())
}

/// Parses `args` and runs; returns the process exit code.
pub fn main_with_args<I, T>(args: I, out: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match execute(&cli, out) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("{e}");
            e.exit_code()
        }
    }
}
