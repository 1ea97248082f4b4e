//! Learning-rate and momentum grid search.

use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::PathBuf;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use gsmm_core::{Algorithm, EvalMode, HyperParams, RunRecord};

use crate::config::{default_batch, load_problem, ExperimentConfig, HyperSource, LoadedProblem, DEFAULT_ITERS};
use crate::csv::fmt_float;
use crate::error::{BenchError, BenchResult};
use crate::experiment::run_loaded;

pub const STEP_GRID: [f64; 6] = [0.1, 0.01, 0.001, 0.0001, 1e-5, 1e-6];
pub const BETA_GRID: [f64; 4] = [0.1, 0.4, 0.7, 0.9];
pub const BUDGET_WARNING: usize = 1_000_000;
pub const TABLE_HEADER: &str = "rank,eta_x,eta_y,beta,bx,by,selection_metric,final_metric,status";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Selection {
    /// Mean `grad_phi_norm` over the last 10% of recorded rows.
    MeanLastTenth,
    Final,
}

impl Selection {
    pub fn parse(s: &str) -> BenchResult<Self> {
        match s {
            "mean-last-10" | "mean" => Ok(Selection::MeanLastTenth),
            "final" => Ok(Selection::Final),
            _ => Err(BenchError::Config(format!(
                "selection metric must be mean-last-10 or final, got '{s}'"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GridSpec {
    pub eta_x_grid: Vec<f64>,
    pub eta_y_grid: Vec<f64>,
    /// Only searched for NSGDA-M.
    pub beta_grid: Vec<f64>,
    /// `None` uses 1 for NSGDA-M and 50 for the others.
    pub batch: Option<usize>,
    pub selection_metric: Selection,
    pub workers: usize,
}

impl Default for GridSpec {
    fn default() -> Self {
        Self {
            eta_x_grid: STEP_GRID.to_vec(),
            eta_y_grid: STEP_GRID.to_vec(),
            beta_grid: BETA_GRID.to_vec(),
            batch: None,
            selection_metric: Selection::MeanLastTenth,
            workers: std::thread::available_parallelism().map_or(1, |n| n.get()),
        }
    }
}

impl GridSpec {
    pub fn validate(&self) -> BenchResult<()> {
        for (name, g) in [
            ("eta_x_grid", &self.eta_x_grid),
            ("eta_y_grid", &self.eta_y_grid),
            ("beta_grid", &self.beta_grid),
        ] {
            if g.is_empty() {
                return Err(BenchError::Config(format!("{name} is empty")));
            }
        }
        if self.batch == Some(0) || self.workers == 0 {
            return Err(BenchError::Config("batch and workers must be >= 1".into()));
        }
        Ok(())
    }

    /// Every combination for `algo`, in grid order.
    pub fn combos(&self, algo: Algorithm, t_max: usize) -> Vec<HyperParams> {
        let b = self.batch.unwrap_or(default_batch(algo));
        let betas: &[f64] = match algo {
            Algorithm::NsgdaM => &self.beta_grid,
            _ => &[0.0],
        };
        let mut out = Vec::new();
        for &eta_x in &self.eta_x_grid {
            for &eta_y in &self.eta_y_grid {
                for &beta in betas {
                    out.push(HyperParams {
                        eta_x,
                        eta_y,
                        beta,
                        bx: b,
                        by: b,
                        t_max,
                    });
                }
            }
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GridRow {
    pub hyper: HyperParams,
    /// `+∞` for failed runs.
    pub selection_metric: f64,
    pub final_metric: f64,
    pub status: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GridOutcome {
    /// Sorted best first.
    pub rows: Vec<GridRow>,
    pub best: ExperimentConfig,
    pub table: Option<PathBuf>,
    pub budget_warning: bool,
}

/// Mean over the last `⌈len/10⌉` rows, or the final value.
pub fn selection_value(rows: &[RunRecord], selection: Selection) -> f64 {
    if rows.is_empty() {
        return f64::INFINITY;
    }
    let take = match selection {
        Selection::Final => 1,
        Selection::MeanLastTenth => rows.len().div_ceil(10),
    };
    let tail = &rows[rows.len() - take..];
    tail.iter().map(|r| r.grad_phi_norm).sum::<f64>() / take as f64
}

fn evaluate(base: &ExperimentConfig, loaded: &LoadedProblem, hp: HyperParams, selection: Selection) -> GridRow {
    let mut rows: Vec<RunRecord> = Vec::new();
    let failed = |status: String| GridRow {
        hyper: hp,
        selection_metric: f64::INFINITY,
        final_metric: f64::INFINITY,
        status,
    };
    match run_loaded(base, loaded, hp, &mut rows) {
        Err(e) => failed(e.to_string()),
        Ok(out) if out.abort.is_some() => failed(out.abort.unwrap().to_string()),
        Ok(_) => {
            let sel = selection_value(&rows, selection);
            let fin = selection_value(&rows, Selection::Final);
            if sel.is_finite() && fin.is_finite() {
                GridRow {
                    hyper: hp,
                    selection_metric: sel,
                    final_metric: fin,
                    status: "ok".into(),
                }
            } else {
                failed("non-finite metric".into())
            }
        }
    }
}

/// Best first; ties go to the smaller `η_x`, then `η_y`, then `β`.
pub fn rank(rows: &mut [GridRow]) {
    rows.sort_by(|a, b| {
        a.selection_metric
            .total_cmp(&b.selection_metric)
            .then(a.hyper.eta_x.total_cmp(&b.hyper.eta_x))
            .then(a.hyper.eta_y.total_cmp(&b.hyper.eta_y))
            .then(a.hyper.beta.total_cmp(&b.hyper.beta))
    });
}

/// Runs every combination on the same seed and problem instance.
pub fn grid_search_loaded(
    base: &ExperimentConfig,
    loaded: &LoadedProblem,
    grid: &GridSpec,
) -> BenchResult<GridOutcome> {
    grid.validate()?;
    base.validate()?;
    if base.eval_mode == EvalMode::None {
        return Err(BenchError::Config("grid search needs eval mode exact or approx".into()));
    }
    let t_max = base.iters.unwrap_or(match &base.hyper {
        HyperSource::Manual(hp) => hp.t_max,
        HyperSource::Auto(_) => DEFAULT_ITERS,
    });
    let combos = grid.combos(base.algo, t_max);
    let budget_warning = combos.len().saturating_mul(t_max) > BUDGET_WARNING;

    let next = AtomicUsize::new(0);
    let results: Mutex<Vec<Option<GridRow>>> = Mutex::new(vec![None; combos.len()]);
    std::thread::scope(|s| {
        for _ in 0..grid.workers.min(combos.len()) {
            s.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                if i >= combos.len() {
                    break;
                }
                let row = evaluate(base, loaded, combos[i], grid.selection_metric);
                results.lock().unwrap()[i] = Some(row);
            });
        }
    });
    let mut rows: Vec<GridRow> = results.into_inner().unwrap().into_iter().map(|r| r.unwrap()).collect();
    rank(&mut rows);

    let mut best = base.clone();
    best.hyper = HyperSource::Manual(rows[0].hyper);
    best.iters = None;
    Ok(GridOutcome {
        rows,
        best,
        table: None,
        budget_warning,
    })
}

/// Loads the problem, searches the grid and writes `grid_table.csv` and `grid_best.txt` under `base.out`.
pub fn grid_search(base: &ExperimentConfig, grid: &GridSpec) -> BenchResult<GridOutcome> {
    let loaded = load_problem(base)?;
    let mut outcome = grid_search_loaded(base, &loaded, grid)?;
    fs::create_dir_all(&base.out)?;
    let table = base.out.join("grid_table.csv");
    write_table(&table, &outcome.rows)?;
    write_best(&base.out.join("grid_best.txt"), &outcome)?;
    outcome.table = Some(table);
    Ok(outcome)
}

pub fn table_text(rows: &[GridRow]) -> String {
    let mut s = format!("{TABLE_HEADER}\n");
    for (i, r) in rows.iter().enumerate() {
        s.push_str(&format!(
            "{},{},{},{},{},{},{},{},{}\n",
            i + 1,
            fmt_float(r.hyper.eta_x),
            fmt_float(r.hyper.eta_y),
            fmt_float(r.hyper.beta),
            r.hyper.bx,
            r.hyper.by,
            fmt_float(r.selection_metric),
            fmt_float(r.final_metric),
            r.status.replace(',', ";")
        ));
    }
    s
}

fn write_table(path: &PathBuf, rows: &[GridRow]) -> BenchResult<()> {
    let mut w = BufWriter::new(File::create(path)?);
    w.write_all(table_text(rows).as_bytes())?;
    w.flush()?;
    Ok(())
}

fn write_best(path: &PathBuf, outcome: &GridOutcome) -> BenchResult<()> {
    let r = &outcome.rows[0];
    let mut w = BufWriter::new(File::create(path)?);
    writeln!(w, "algo={}", outcome.best.algo.name())?;
    writeln!(w, "dataset={}", outcome.best.dataset.label())?;
    writeln!(w, "seed={}", outcome.best.seed)?;
    for (k, v) in crate::experiment::hyper_fields(&r.hyper) {
        writeln!(w, "{k}={v}")?;
    }
    writeln!(w, "selection_metric={}", fmt_float(r.selection_metric))?;
    writeln!(w, "final_metric={}", fmt_float(r.final_metric))?;
    w.flush()?;
    Ok(())
}
