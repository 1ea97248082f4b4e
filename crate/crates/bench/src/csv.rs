//! Trajectory CSV output.

use std::io::{self, Write};
use std::time::Instant;

use gsmm_core::{Recorder, RunRecord};

pub const CSV_HEADER: &str = "iter,grad_phi_norm,tracking_error,momentum_bias,loss,step_x,step_y,wallclock_ms";

/// 17 significant digits; NaN is written `nan`.
pub fn fmt_float(v: f64) -> String {
    if v.is_nan() {
        "nan".into()
    } else if v == f64::INFINITY {
        "inf".into()
    } else if v == f64::NEG_INFINITY {
        "-inf".into()
    } else {
        format!("{v:.16e}")
    }
}

/// Inverse of [`fmt_float`].
pub fn parse_float(s: &str) -> Option<f64> {
    match s {
        "nan" => Some(f64::NAN),
        "inf" => Some(f64::INFINITY),
        "-inf" => Some(f64::NEG_INFINITY),
        _ => s.parse().ok(),
    }
}

/// Streams one line per record, so that rows written before an abort survive it.
pub struct CsvRecorder<W: Write> {
    out: W,
    start: Instant,
    rows: usize,
    last: Option<RunRecord>,
    best_grad_phi: f64,
    error: Option<io::Error>,
}

impl<W: Write> CsvRecorder<W> {
    /// Writes the `# key=value` metadata lines and the header.
    pub fn new(mut out: W, metadata: &[(String, String)]) -> io::Result<Self> {
        for (k, v) in metadata {
            writeln!(out, "# {k}={v}")?;
        }
        writeln!(out, "{CSV_HEADER}")?;
        Ok(Self {
            out,
            start: Instant::now(),
            rows: 0,
            last: None,
            best_grad_phi: f64::NAN,
            error: None,
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn last(&self) -> Option<&RunRecord> {
        self.last.as_ref()
    }

    /// Smallest finite `grad_phi_norm` seen, NaN if none.
    pub fn best_grad_phi(&self) -> f64 {
        self.best_grad_phi
    }

    pub fn elapsed_ms(&self) -> f64 {
        self.start.elapsed().as_secs_f64() * 1e3
    }

    /// Appends a trailing `# key=value` line.
    pub fn comment(&mut self, key: &str, value: &str) {
        if self.error.is_none() {
            if let Err(e) = writeln!(self.out, "# {key}={value}") {
                self.error = Some(e);
            }
        }
    }

    /// Flushes and returns the first write error, if any.
    pub fn finish(mut self) -> io::Result<W> {
        if let Some(e) = self.error.take() {
            return Err(e);
        }
        self.out.flush()?;
        Ok(self.out)
    }
}

impl<W: Write> Recorder for CsvRecorder<W> {
    fn record(&mut self, row: &RunRecord) {
        self.rows += 1;
        self.last = Some(*row);
        if row.grad_phi_norm.is_finite() && (self.best_grad_phi.is_nan() || row.grad_phi_norm < self.best_grad_phi) {
            self.best_grad_phi = row.grad_phi_norm;
        }
        if self.error.is_some() {
            return;
        }
        let line = format!(
            "{},{},{},{},{},{},{},{:.3}",
            row.t,
            fmt_float(row.grad_phi_norm),
            fmt_float(row.tracking_error),
            fmt_float(row.momentum_bias),
            fmt_float(row.loss),
            fmt_float(row.step_x),
            fmt_float(row.step_y),
            self.elapsed_ms()
        );
        if let Err(e) = writeln!(self.out, "{line}") {
            self.error = Some(e);
        }
    }
}

/// A trajectory CSV read back: metadata and rows with the wallclock column dropped.
#[derive(Debug, Clone, PartialEq)]
pub struct ParsedCsv {
    pub metadata: Vec<(String, String)>,
    pub rows: Vec<RunRecord>,
}

impl ParsedCsv {
    pub fn meta(&self, key: &str) -> Option<&str> {
        self.metadata.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }
}

pub fn parse_trajectory(text: &str) -> Result<ParsedCsv, String> {
    let mut metadata = Vec::new();
    let mut rows = Vec::new();
    let mut seen_header = false;
    for (n, line) in text.lines().enumerate() {
        if let Some(c) = line.strip_prefix("# ") {
            let (k, v) = c.split_once('=').ok_or(format!("line {}: malformed comment", n + 1))?;
            metadata.push((k.to_string(), v.to_string()));
            continue;
        }
        if !seen_header {
            if line != CSV_HEADER {
                return Err(format!("line {}: unexpected header '{line}'", n + 1));
            }
            seen_header = true;
            continue;
        }
        let f: Vec<&str> = line.split(',').collect();
        if f.len() != 8 {
            return Err(format!("line {}: expected 8 fields, found {}", n + 1, f.len()));
        }
        let num = |i: usize| parse_float(f[i]).ok_or(format!("line {}: bad number '{}'", n + 1, f[i]));
        rows.push(RunRecord {
            t: f[0].parse().map_err(|_| format!("line {}: bad iteration", n + 1))?,
            grad_phi_norm: num(1)?,
            tracking_error: num(2)?,
            momentum_bias: num(3)?,
            loss: num(4)?,
            step_x: num(5)?,
            step_y: num(6)?,
        });
    }
    if !seen_header {
        return Err("missing header".into());
    }
    Ok(ParsedCsv { metadata, rows })
}
