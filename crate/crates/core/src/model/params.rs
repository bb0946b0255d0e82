use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Model-level constants: arrival rate per unit of effort, number of agents,
/// and the initial stock. The discount rate is identically one (time is
/// rescaled at construction of the model) and is not configurable.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    pub lambda: f64,
    pub n: u32,
    pub x0: f64,
}

impl ModelParams {
    pub fn new(lambda: f64, n: u32, x0: f64) -> Result<Self> {
        if !(lambda > 0.0) || !lambda.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "lambda must be positive and finite, got {lambda}"
            )));
        }
        if n < 2 {
            return Err(Error::InvalidParameter(format!(
                "at least two agents required, got {n}"
            )));
        }
        if !(x0 >= 0.0) || !x0.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "initial stock must be non-negative, got {x0}"
            )));
        }
        Ok(Self { lambda, n, x0 })
    }

    pub fn n_f64(&self) -> f64 {
        f64::from(self.n)
    }

    /// Same parameters with a different agent count. Used by comparative
    /// statics (the forced cutoff is independent of `n`, welfare is not).
    pub fn with_n(&self, n: u32) -> Result<Self> {
        Self::new(self.lambda, n, self.x0)
    }
}

/// Small-frequent-improvement limit: `λ` grows while `ρ` and `ε` vanish,
/// holding `λ′ := λρ` and `ε′ := ε(1/ρ − 1)` fixed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LimitRegime {
    pub lambda_prime: f64,
    pub eps_prime: f64,
    pub zeta: f64,
    pub n: u32,
    pub x0: f64,
}

impl LimitRegime {
    pub fn new(lambda_prime: f64, eps_prime: f64, zeta: f64, n: u32, x0: f64) -> Result<Self> {
        if !(lambda_prime > 0.0 && lambda_prime < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "lambda_prime must lie in (0,1), got {lambda_prime}"
            )));
        }
        if !(eps_prime > 0.0) || !(zeta > 0.0) {
            return Err(Error::InvalidParameter(
                "eps_prime and zeta must be positive".into(),
            ));
        }
        if n < 2 {
            return Err(Error::InvalidParameter(format!(
                "at least two agents required, got {n}"
            )));
        }
        if !(x0 >= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "initial stock must be non-negative, got {x0}"
            )));
        }
        Ok(Self {
            lambda_prime,
            eps_prime,
            zeta,
            n,
            x0,
        })
    }

    /// Stopping cutoff of the forced equilibrium in the limit regime.
    pub fn x_f(&self) -> f64 {
        self.lambda_prime * (self.zeta + self.eps_prime)
    }

    /// Whether a substantial innovation ends all effort (`λ′(ζ+ε′) ≤ ζ`),
    /// required by the closed forms of the limit regime.
    pub fn substantial_ends_effort(&self) -> bool {
        self.x_f() <= self.zeta
    }

    /// Finite-parameter approximation at mixture weight `rho`: `λ = λ′/ρ`,
    /// `ε = ε′ρ/(1−ρ)`. The forced cutoff `λμ` equals `x_f()` for every `rho`.
    pub fn approximant(&self, rho: f64) -> Result<(ModelParams, super::InnovationDist)> {
        if !(rho > 0.0 && rho < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "rho must lie in (0,1), got {rho}"
            )));
        }
        let lambda = self.lambda_prime / rho;
        let eps = self.eps_prime * rho / (1.0 - rho);
        let params = ModelParams::new(lambda, self.n, self.x0)?;
        let dist = super::InnovationDist::atom_plus_exponential(rho, self.zeta, eps)?;
        Ok((params, dist))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_params() {
        assert!(ModelParams::new(0.0, 2, 0.0).is_err());
        assert!(ModelParams::new(1.0, 1, 0.0).is_err());
        assert!(ModelParams::new(1.0, 2, -0.1).is_err());
        assert!(ModelParams::new(1.0, 2, 0.5).is_ok());
    }

    #[test]
    fn approximant_preserves_forced_cutoff() {
        let regime = LimitRegime::new(0.1, 1.0, 5.0, 5, 0.0).unwrap();
        for rho in [0.01, 0.001] {
            let (params, dist) = regime.approximant(rho).unwrap();
            let cutoff = params.lambda * dist.mean();
            assert!((cutoff - regime.x_f()).abs() < 1e-12);
        }
    }
}
