//! Euclidean projections onto the supported dual domains.

use crate::domain::DualDomain;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct ProjectionReport {
    pub output: Vec<f64>,
    /// Coordinates clamped to a bound (simplex: set to zero).
    pub active_count: usize,
    /// Simplex threshold `θ`; zero for the other domains.
    pub shift: f64,
}

pub fn project(v: &[f64], domain: &DualDomain) -> Result<ProjectionReport> {
    if v.is_empty() {
        return Err(Error::Empty("projection input"));
    }
    if v.len() != domain.dim() {
        return Err(Error::DimensionMismatch {
            expected: domain.dim(),
            found: v.len(),
        });
    }
    if v.iter().any(|x| !x.is_finite()) {
        return Err(Error::NonFinite {
            what: "projection input",
            iteration: None,
        });
    }
    Ok(match domain {
        DualDomain::FullSpace(_) => ProjectionReport {
            output: v.to_vec(),
            active_count: 0,
            shift: 0.0,
        },
        DualDomain::Simplex(_) => project_simplex(v),
        DualDomain::Box { lower, upper } => {
            let mut active = 0;
            let output = v
                .iter()
                .zip(lower.iter().zip(upper))
                .map(|(x, (l, u))| {
                    if x < l {
                        active += 1;
                        *l
                    } else if x > u {
                        active += 1;
                        *u
                    } else {
                        *x
                    }
                })
                .collect();
            ProjectionReport {
                output,
                active_count: active,
                shift: 0.0,
            }
        }
    })
}

/// Sort-and-threshold projection onto the probability simplex.
fn project_simplex(v: &[f64]) -> ProjectionReport {
    let mut sorted = v.to_vec();
    sorted.sort_unstable_by(|a, b| b.total_cmp(a));

    let mut cumsum = 0.0;
    let mut theta = sorted[0] - 1.0;
    for (k, &s) in sorted.iter().enumerate() {
        cumsum += s;
        let candidate = (cumsum - 1.0) / (k + 1) as f64;
        if s - candidate > 0.0 {
            theta = candidate;
        } else {
            break;
        }
    }

    let mut active = 0;
    let output = v
        .iter()
        .map(|x| {
            let y = x - theta;
            if y > 0.0 {
                y
            } else {
                active += 1;
                0.0
            }
        })
        .collect();
    ProjectionReport {
        output,
        active_count: active,
        shift: theta,
    }
}

/// Exhaustive grid search over the simplex (dimension ≤ 4); a test oracle for [`project`].
///
/// `1/grid_step` must be an integer. Ties go to the lexicographically first grid point.
pub fn brute_force_simplex_projection(v: &[f64], grid_step: f64) -> Result<Vec<f64>> {
    let dim = v.len();
    if dim == 0 {
        return Err(Error::Empty("projection input"));
    }
    if dim > 4 {
        return Err(Error::InvalidArgument(format!(
            "brute-force projection supports dimension <= 4, got {dim}"
        )));
    }
    if !(grid_step > 0.0 && grid_step <= 0.1) {
        return Err(Error::InvalidArgument(format!(
            "grid_step must lie in (0, 0.1], got {grid_step}"
        )));
    }
    let steps_f = (1.0 / grid_step).round();
    if ((1.0 / grid_step) - steps_f).abs() > 1e-6 {
        return Err(Error::InvalidArgument("1/grid_step must be an integer".into()));
    }
    let steps = steps_f as usize;

    let mut best = vec![0.0; dim];
    let mut best_d = f64::INFINITY;
    let mut counts = vec![0usize; dim];
    enumerate(0, steps, &mut counts, &mut |c| {
        let mut d = 0.0;
        for (ci, vi) in c.iter().zip(v) {
            let y = *ci as f64 / steps as f64;
            d += (y - vi) * (y - vi);
        }
        if d < best_d {
            best_d = d;
            for (b, ci) in best.iter_mut().zip(c) {
                *b = *ci as f64 / steps as f64;
            }
        }
    });
    Ok(best)
}

// Visits every composition of `remaining` into the tail of `counts`, in lexicographic order.
fn enumerate(pos: usize, remaining: usize, counts: &mut [usize], visit: &mut impl FnMut(&[usize])) {
    if pos + 1 == counts.len() {
        counts[pos] = remaining;
        visit(counts);
        return;
    }
    for c in 0..=remaining {
        counts[pos] = c;
        enumerate(pos + 1, remaining - c, counts, visit);
    }
}
