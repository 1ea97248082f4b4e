use crate::error::{Error, Result};

/// Feasible set of the dual variable.
#[derive(Debug, Clone, PartialEq)]
pub enum DualDomain {
    /// Unconstrained `ℝ^m`.
    FullSpace(usize),
    /// Probability simplex `{y ≥ 0 : Σ y_i = 1}` in `ℝ^m`.
    Simplex(usize),
    /// Elementwise box `lower ≤ y ≤ upper`.
    Box { lower: Vec<f64>, upper: Vec<f64> },
}

impl DualDomain {
    pub fn simplex(dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidDomain("simplex dimension must be >= 1".into()));
        }
        Ok(DualDomain::Simplex(dim))
    }

    pub fn boxed(lower: Vec<f64>, upper: Vec<f64>) -> Result<Self> {
        if lower.len() != upper.len() {
            return Err(Error::DimensionMismatch {
                expected: lower.len(),
                found: upper.len(),
            });
        }
        if lower.iter().zip(&upper).any(|(l, u)| l.is_nan() || u.is_nan() || l > u) {
            return Err(Error::InvalidDomain("box bounds must satisfy lower <= upper".into()));
        }
        Ok(DualDomain::Box { lower, upper })
    }

    pub fn dim(&self) -> usize {
        match self {
            DualDomain::FullSpace(m) | DualDomain::Simplex(m) => *m,
            DualDomain::Box { lower, .. } => lower.len(),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            DualDomain::FullSpace(_) => "full-space",
            DualDomain::Simplex(_) => "simplex",
            DualDomain::Box { .. } => "box",
        }
    }

    /// A canonical feasible point: zero, the simplex barycentre, or the box midpoint.
    pub fn center(&self) -> Vec<f64> {
        match self {
            DualDomain::FullSpace(m) => vec![0.0; *m],
            DualDomain::Simplex(m) => vec![1.0 / *m as f64; *m],
            DualDomain::Box { lower, upper } => lower.iter().zip(upper).map(|(l, u)| 0.5 * (l + u)).collect(),
        }
    }
}

/// Whether `y` lies in `domain` up to `tol`.
pub fn membership_check(y: &[f64], domain: &DualDomain, tol: f64) -> Result<bool> {
    if y.len() != domain.dim() {
        return Err(Error::DimensionMismatch {
            expected: domain.dim(),
            found: y.len(),
        });
    }
    Ok(match domain {
        DualDomain::FullSpace(_) => true,
        DualDomain::Simplex(_) => {
            let min = y.iter().cloned().fold(f64::INFINITY, f64::min);
            let sum: f64 = y.iter().sum();
            min >= -tol && (sum - 1.0).abs() <= tol
        }
        DualDomain::Box { lower, upper } => y
            .iter()
            .zip(lower.iter().zip(upper))
            .all(|(v, (l, u))| *v >= l - tol && *v <= u + tol),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn simplex_membership() {
        let d = DualDomain::simplex(2).unwrap();
        assert!(membership_check(&[0.5, 0.5], &d, 1e-12).unwrap());
        assert!(!membership_check(&[0.6, 0.6], &d, 1e-12).unwrap());
        assert!(!membership_check(&[1.5, -0.5], &d, 1e-12).unwrap());
    }

    #[test]
    fn full_space_accepts_anything() {
        let d = DualDomain::FullSpace(3);
        assert!(membership_check(&[1e300, -4.0, 0.0], &d, 0.0).unwrap());
    }

    #[test]
    fn box_membership_and_dimension() {
        let d = DualDomain::boxed(vec![0.0, -1.0], vec![1.0, 1.0]).unwrap();
        assert!(membership_check(&[0.5, -1.0], &d, 0.0).unwrap());
        assert!(!membership_check(&[1.1, 0.0], &d, 1e-12).unwrap());
        assert!(matches!(
            membership_check(&[0.5], &d, 0.0),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn invalid_domains() {
        assert!(DualDomain::simplex(0).is_err());
        assert!(DualDomain::boxed(vec![1.0], vec![0.0]).is_err());
    }
}
