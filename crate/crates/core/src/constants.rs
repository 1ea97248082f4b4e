//! Problem constants and the quantities derived from them.
//!
//! `ProblemConstants` collects the strong-concavity modulus, the bound on the
//! dual gradient at the best response, the four generalized-smoothness
//! coefficients and the noise scales. `derive_constants` turns them into the
//! condition ratio of the best-response map, the effective dual smoothness
//! and the smoothness pair of the primal function.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProblemConstants {
    /// Strong-concavity modulus in `y`.
    pub mu: f64,
    /// Bound on `‖∇_y L(x, y*(x))‖`.
    pub b: f64,
    pub lx0: f64,
    pub lx1: f64,
    pub ly0: f64,
    pub ly1: f64,
    pub sigma_x: f64,
    pub sigma_y: f64,
    /// Absolute sub-Gaussian constant, only used by the high-probability schedules.
    pub c_abs: f64,
}

impl Default for ProblemConstants {
    fn default() -> Self {
        Self {
            mu: 1.0,
            b: 0.0,
            lx0: 1.0,
            lx1: 1.0,
            ly0: 1.0,
            ly1: 0.0,
            sigma_x: 0.0,
            sigma_y: 0.0,
            c_abs: 1.0,
        }
    }
}

impl ProblemConstants {
    pub fn validate(&self) -> Result<()> {
        if !(self.mu > 0.0 && self.mu.is_finite()) {
            return Err(Error::InvalidConstants(format!(
                "mu must be positive and finite, got {}",
                self.mu
            )));
        }
        let named = [
            ("B", self.b),
            ("lx0", self.lx0),
            ("lx1", self.lx1),
            ("ly0", self.ly0),
            ("ly1", self.ly1),
            ("sigma_x", self.sigma_x),
            ("sigma_y", self.sigma_y),
        ];
        for (name, v) in named {
            if !(v >= 0.0 && v.is_finite()) {
                return Err(Error::InvalidConstants(format!(
                    "{name} must be non-negative and finite, got {v}"
                )));
            }
        }
        if !(self.c_abs >= 1.0 && self.c_abs.is_finite()) {
            return Err(Error::InvalidConstants(format!(
                "c_abs must be >= 1, got {}",
                self.c_abs
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DerivedConstants {
    /// `(L_{y,0} + L_{y,1} B) / μ`, the Lipschitz constant of the best response.
    pub kappa: f64,
    /// `L_{y,0} + L_{y,1} ((L_{y,0} + L_{y,1} B) / (8 L_{x,1}) + B)`.
    pub l_y: f64,
    /// `(1 + κ) L_{x,0}`.
    pub l0: f64,
    /// `(1 + κ) L_{x,1}`.
    pub l1: f64,
    /// `L_y / μ`.
    pub kappa_tilde: f64,
}

pub fn derive_constants(pc: &ProblemConstants) -> Result<DerivedConstants> {
    pc.validate()?;
    let coupling = pc.ly0 + pc.ly1 * pc.b;
    let kappa = coupling / pc.mu;
    let l_y = if pc.ly1 == 0.0 {
        pc.ly0
    } else if pc.lx1 == 0.0 {
        return Err(Error::DegenerateConstants {
            formula: "L_y = L_{y,0} + L_{y,1}((L_{y,0}+L_{y,1}B)/(8L_{x,1}) + B)",
            reason: "L_{x,1} = 0 while L_{y,1} > 0",
        });
    } else {
        pc.ly0 + pc.ly1 * (coupling / (8.0 * pc.lx1) + pc.b)
    };
    Ok(DerivedConstants {
        kappa,
        l_y,
        l0: (1.0 + kappa) * pc.lx0,
        l1: (1.0 + kappa) * pc.lx1,
        kappa_tilde: l_y / pc.mu,
    })
}
