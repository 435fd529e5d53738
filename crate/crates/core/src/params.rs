use crate::error::{Error, Result};

/// The four dimensionless constants of the supplementary boundary value problem.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Parameters {
    pub sigma: f64,
    pub tau: f64,
    pub nu: f64,
    pub mu: f64,
}

impl Parameters {
    /// Validated constructor: `0 < nu`, `0 < sigma < 1`, `-1 < tau < 1`, `mu` finite.
    pub fn new(sigma: f64, tau: f64, nu: f64, mu: f64) -> Result<Self> {
        let p = Self { sigma, tau, nu, mu };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        let Self { sigma, tau, nu, mu } = *self;
        if !(nu > 0.0 && nu.is_finite()) {
            return Err(Error::Validation(format!("nu must be positive, got {nu}")));
        }
        if !(sigma > 0.0 && sigma < 1.0) {
            return Err(Error::Validation(format!("sigma must lie in (0, 1), got {sigma}")));
        }
        if !(tau > -1.0 && tau < 1.0) {
            return Err(Error::Validation(format!("tau must lie in (-1, 1), got {tau}")));
        }
        if !mu.is_finite() {
            return Err(Error::Validation(format!("mu must be finite, got {mu}")));
        }
        Ok(())
    }

    /// Whether the point lies inside the box where the perturbation series
    /// is known to behave well (`0 < nu <= 10`, `|mu| < 2`).
    pub fn in_studied_range(&self) -> bool {
        self.nu <= 10.0 && self.mu.abs() < 2.0
    }

    pub fn with_mu(self, mu: f64) -> Self {
        Self { mu, ..self }
    }

    /// First worked case: a positive, decreasing solution.
    pub const CASE_ONE: Parameters = Parameters { sigma: 1.0 / 3.0, tau: -0.2, nu: 3.5, mu: 2.0 };

    /// Second worked case: a negative, increasing solution.
    pub const CASE_TWO: Parameters = Parameters { sigma: 1.0 / 3.0, tau: -0.2, nu: 0.1, mu: -0.5 };
}
