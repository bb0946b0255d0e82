use rand::Rng;
use serde::{Deserialize, Serialize};

use super::GaussLaguerre;
use crate::{Error, Result};

/// Law of the size of a single innovation.
///
/// The three variants used in the results: an atom of mass `rho` at `zeta`
/// mixed with an exponential of mean `eps`, the pure exponential (`rho = 0`),
/// and the degenerate unit step at `mu`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "variant", rename_all = "snake_case")]
pub enum InnovationDist {
    AtomPlusExponential { rho: f64, zeta: f64, eps: f64 },
    Exponential { eps: f64 },
    Degenerate { mu: f64 },
}

impl InnovationDist {
    pub fn atom_plus_exponential(rho: f64, zeta: f64, eps: f64) -> Result<Self> {
        if !(0.0..1.0).contains(&rho) {
            return Err(Error::InvalidParameter(format!(
                "rho must lie in [0,1), got {rho}"
            )));
        }
        if !(zeta > eps && eps > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "need zeta > eps > 0, got zeta = {zeta}, eps = {eps}"
            )));
        }
        Ok(Self::AtomPlusExponential { rho, zeta, eps })
    }

    pub fn exponential(eps: f64) -> Result<Self> {
        if !(eps > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "eps must be positive, got {eps}"
            )));
        }
        Ok(Self::Exponential { eps })
    }

    pub fn degenerate(mu: f64) -> Result<Self> {
        if !(mu > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "mu must be positive, got {mu}"
            )));
        }
        Ok(Self::Degenerate { mu })
    }

    /// Mean `μ` of the increment size, exact per variant.
    pub fn mean(&self) -> f64 {
        match *self {
            Self::AtomPlusExponential { rho, zeta, eps } => rho * zeta + (1.0 - rho) * eps,
            Self::Exponential { eps } => eps,
            Self::Degenerate { mu } => mu,
        }
    }

    /// CDF `F(z) = P(z̃ ≤ z)`.
    pub fn cdf(&self, z: f64) -> f64 {
        if z < 0.0 {
            return 0.0;
        }
        match *self {
            Self::AtomPlusExponential { rho, zeta, eps } => {
                let atom = if z >= zeta { rho } else { 0.0 };
                atom + (1.0 - rho) * (1.0 - (-z / eps).exp())
            }
            Self::Exponential { eps } => 1.0 - (-z / eps).exp(),
            Self::Degenerate { mu } => {
                if z >= mu {
                    1.0
                } else {
                    0.0
                }
            }
        }
    }

    /// `P(z̃ < z)`, the left limit of the CDF. Differs from [`cdf`](Self::cdf)
    /// only at atoms.
    pub fn cdf_left(&self, z: f64) -> f64 {
        if z <= 0.0 {
            return 0.0;
        }
        match *self {
            Self::AtomPlusExponential { rho, zeta, eps } => {
                let atom = if z > zeta { rho } else { 0.0 };
                atom + (1.0 - rho) * (1.0 - (-z / eps).exp())
            }
            Self::Exponential { eps } => 1.0 - (-z / eps).exp(),
            Self::Degenerate { mu } => {
                if z > mu {
                    1.0
                } else {
                    0.0
                }
            }
        }
    }

    /// Whether increments of arbitrarily small positive size are possible
    /// (`F(z) > 0` for all `z > 0`). Holds for the exponential variants,
    /// fails for the degenerate one.
    pub fn has_small_innovations(&self) -> bool {
        !matches!(self, Self::Degenerate { .. })
    }

    /// `E_F[g(x + z̃)]`: exact atom term plus Gauss–Laguerre quadrature of
    /// the exponential component; exact evaluation for the degenerate law.
    pub fn expect(
        &self,
        quad: &GaussLaguerre,
        x: f64,
        mut g: impl FnMut(f64) -> f64,
    ) -> Result<f64> {
        match *self {
            Self::AtomPlusExponential { rho, zeta, eps } => {
                let atom_val = g(x + zeta);
                if !atom_val.is_finite() {
                    return Err(Error::NonFinite {
                        what: "integrand at the atom".into(),
                        at: x + zeta,
                    });
                }
                let tail = quad.try_integrate(|u| g(x + eps * u), "integrand")?;
                Ok(rho * atom_val + (1.0 - rho) * tail)
            }
            Self::Exponential { eps } => quad.try_integrate(|u| g(x + eps * u), "integrand"),
            Self::Degenerate { mu } => {
                let val = g(x + mu);
                if !val.is_finite() {
                    return Err(Error::NonFinite {
                        what: "integrand at the atom".into(),
                        at: x + mu,
                    });
                }
                Ok(val)
            }
        }
    }

    /// `E_F[g(x) ∨ g(x + z̃)]`, the disposal-side expectation operator. Uses
    /// the same nodes as [`expect`](Self::expect) applied to the clipped
    /// integrand, so `L_d g ≥ L_f g` holds exactly node by node.
    pub fn expect_max(
        &self,
        quad: &GaussLaguerre,
        x: f64,
        mut g: impl FnMut(f64) -> f64,
    ) -> Result<f64> {
        let here = g(x);
        if !here.is_finite() {
            return Err(Error::NonFinite {
                what: "integrand".into(),
                at: x,
            });
        }
        self.expect(quad, x, |y| g(y).max(here))
    }

    /// Draws one increment size.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match *self {
            Self::AtomPlusExponential { rho, zeta, eps } => {
                if rng.gen::<f64>() < rho {
                    zeta
                } else {
                    sample_exp(rng, eps)
                }
            }
            Self::Exponential { eps } => sample_exp(rng, eps),
            Self::Degenerate { mu } => mu,
        }
    }
}

fn sample_exp<R: Rng + ?Sized>(rng: &mut R, eps: f64) -> f64 {
    // Inverse CDF on (0,1]; `1 - gen::<f64>()` avoids ln(0).
    let u: f64 = 1.0 - rng.gen::<f64>();
    -eps * u.ln()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::DEFAULT_QUAD_ORDER;
    use approx::assert_abs_diff_eq;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn quad() -> GaussLaguerre {
        GaussLaguerre::new(DEFAULT_QUAD_ORDER).unwrap()
    }

    #[test]
    fn means_are_analytic() {
        assert_abs_diff_eq!(InnovationDist::degenerate(2.0).unwrap().mean(), 2.0);
        assert_abs_diff_eq!(InnovationDist::exponential(0.01).unwrap().mean(), 0.01);
        // mu = rho*zeta + (1-rho)*eps = 0.01*5 + 0.99*0.01
        assert_abs_diff_eq!(
            InnovationDist::atom_plus_exponential(0.01, 5.0, 0.01)
                .unwrap()
                .mean(),
            0.0599,
            epsilon = 1e-15
        );
    }

    #[test]
    fn expect_of_constant_is_constant() {
        let quad = quad();
        for dist in [
            InnovationDist::atom_plus_exponential(0.3, 2.0, 0.5).unwrap(),
            InnovationDist::exponential(1.0).unwrap(),
            InnovationDist::degenerate(1.5).unwrap(),
        ] {
            for x in [0.0, 0.7, 3.0] {
                assert_abs_diff_eq!(dist.expect(&quad, x, |_| 7.0).unwrap(), 7.0, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn expect_of_identity_is_mean_shift() {
        let quad = quad();
        let exp = InnovationDist::exponential(0.01).unwrap();
        for x in [0.0, 1.0, 2.5] {
            assert_abs_diff_eq!(
                exp.expect(&quad, x, |y| y).unwrap(),
                x + 0.01,
                epsilon = 1e-12
            );
        }
        let mix = InnovationDist::atom_plus_exponential(0.01, 5.0, 0.01).unwrap();
        assert_abs_diff_eq!(mix.expect(&quad, 0.0, |y| y).unwrap(), 0.0599, epsilon = 1e-12);
    }

    #[test]
    fn expect_max_basics() {
        let quad = quad();
        let deg = InnovationDist::degenerate(1.0).unwrap();
        // g(y) = -y: max(g(0), g(1)) = max(0, -1) = 0.
        assert_abs_diff_eq!(deg.expect_max(&quad, 0.0, |y| -y).unwrap(), 0.0);
        let mix = InnovationDist::atom_plus_exponential(0.2, 3.0, 0.4).unwrap();
        assert_abs_diff_eq!(
            mix.expect_max(&quad, 1.0, |_| 7.0).unwrap(),
            7.0,
            epsilon = 1e-12
        );
        // Increasing g: the max is always the shifted value.
        let lf = mix.expect(&quad, 1.0, |y| y * y).unwrap();
        let ld = mix.expect_max(&quad, 1.0, |y| y * y).unwrap();
        assert_abs_diff_eq!(lf, ld, epsilon = 1e-12);
    }

    #[test]
    fn expect_reports_offending_node() {
        let quad = quad();
        let exp = InnovationDist::exponential(1.0).unwrap();
        let err = exp
            .expect(&quad, 0.0, |y| if y > 5.0 { f64::NAN } else { y })
            .unwrap_err();
        match err {
            Error::NonFinite { at, .. } => assert!(at > 5.0),
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn sampling_matches_law() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let deg = InnovationDist::degenerate(3.0).unwrap();
        assert_eq!(deg.sample(&mut rng), 3.0);

        let exp = InnovationDist::exponential(1.0).unwrap();
        let n = 1_000_000;
        let mean: f64 = (0..n).map(|_| exp.sample(&mut rng)).sum::<f64>() / n as f64;
        assert!((mean - 1.0).abs() < 0.01, "empirical mean {mean}");

        let mix = InnovationDist::atom_plus_exponential(0.5, 5.0, 1.0).unwrap();
        let atoms = (0..n).filter(|_| mix.sample(&mut rng) == 5.0).count();
        let freq = atoms as f64 / n as f64;
        assert!((freq - 0.5).abs() < 0.005, "empirical atom frequency {freq}");
    }

    #[test]
    fn small_innovation_flag() {
        assert!(InnovationDist::exponential(1.0).unwrap().has_small_innovations());
        assert!(InnovationDist::atom_plus_exponential(0.1, 2.0, 0.5)
            .unwrap()
            .has_small_innovations());
        assert!(!InnovationDist::degenerate(1.0).unwrap().has_small_innovations());
    }
}
