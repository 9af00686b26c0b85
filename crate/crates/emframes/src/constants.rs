use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Physical constants of the ambient vacuum. `mu0` is derived so that
/// `mu0 * eps0 * c^2 = 1` holds exactly up to rounding.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Constants {
    pub c: f64,
    pub eps0: f64,
    pub mu0: f64,
}

impl Constants {
    /// Natural desk units: c = 1, eps0 = 1, mu0 = 1.
    pub fn natural() -> Self {
        Constants { c: 1.0, eps0: 1.0, mu0: 1.0 }
    }

    /// SI values.
    pub fn si() -> Self {
        let c = 299_792_458.0;
        let eps0 = 8.854_187_812_8e-12;
        Constants { c, eps0, mu0: 1.0 / (eps0 * c * c) }
    }

    pub fn new(c: f64, eps0: f64) -> Result<Self> {
        if !(c > 0.0) || !(eps0 > 0.0) {
            return Err(Error::BadConstants("c and eps0 must be positive".into()));
        }
        Ok(Constants { c, eps0, mu0: 1.0 / (eps0 * c * c) })
    }

    /// Relative residual of mu0*eps0*c^2 = 1.
    pub fn consistency_residual(&self) -> f64 {
        (self.mu0 * self.eps0 * self.c * self.c - 1.0).abs()
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.c > 0.0 && self.eps0 > 0.0 && self.mu0 > 0.0) {
            return Err(Error::BadConstants("constants must be positive".into()));
        }
        if self.consistency_residual() > 1e-14 {
            return Err(Error::BadConstants(format!(
                "mu0*eps0*c^2 - 1 = {:.3e} exceeds 1e-14",
                self.consistency_residual()
            )));
        }
        Ok(())
    }
}

impl Default for Constants {
    fn default() -> Self {
        Constants::natural()
    }
}
