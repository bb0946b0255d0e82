use std::fmt;
use std::sync::Arc;

use crate::{Error, Result};

type RealFn1 = Arc<dyn Fn(f64) -> f64 + Send + Sync>;
type RealFn2 = Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>;

/// Flow-payoff specification `u(a, x) = b(x) − c(a, x)` together with the
/// partial derivatives the solvers need.
///
/// Requirements on the primitives: `b` increasing and concave; `c(·, x)`
/// increasing and convex in effort, strictly so when `x > 0`, with
/// `c(0, x) = 0`; `c₁` and `c₁₁` weakly increasing in the stock.
#[derive(Clone)]
pub enum PayoffSpec {
    /// `b(x) = x`, `c(a, x) = a·x`. All derivatives are exact.
    LinearMultiplicative,
    /// Stock-independent linear effort cost against a bounded concave
    /// benefit: `b(x) = 1 − e^{−x}`, `c(a, x) = a·cost_slope`.
    SeparableLinearCost { cost_slope: f64 },
    /// Caller-supplied evaluators; derivatives are spot-checked against
    /// central finite differences at construction.
    Custom(Arc<CustomPayoff>),
}

/// Evaluators for a [`PayoffSpec::Custom`] payoff.
pub struct CustomPayoff {
    pub b: RealFn1,
    pub b1: RealFn1,
    pub b2: RealFn1,
    pub c: RealFn2,
    /// ∂c/∂a
    pub c1: RealFn2,
    /// ∂²c/∂a²
    pub c11: RealFn2,
    /// ∂c/∂x
    pub c2: RealFn2,
    /// ∂²c/∂a∂x
    pub c12: RealFn2,
}

impl fmt::Debug for PayoffSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::LinearMultiplicative => write!(f, "LinearMultiplicative"),
            Self::SeparableLinearCost { cost_slope } => {
                write!(f, "SeparableLinearCost {{ cost_slope: {cost_slope} }}")
            }
            Self::Custom(_) => write!(f, "Custom"),
        }
    }
}

impl PayoffSpec {
    pub fn separable_linear_cost(cost_slope: f64) -> Result<Self> {
        if !(cost_slope > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "cost_slope must be positive, got {cost_slope}"
            )));
        }
        Ok(Self::SeparableLinearCost { cost_slope })
    }

    /// Builds a custom payoff, spot-checking every supplied derivative
    /// against central finite differences (step `1e−5`, relative tolerance
    /// `1e−4`) on a small grid of `(a, x)` points.
    pub fn custom(payoff: CustomPayoff) -> Result<Self> {
        const H: f64 = 1e-5;
        const REL_TOL: f64 = 1e-4;
        let check = |name: &str, analytic: f64, numeric: f64| -> Result<()> {
            let scale = analytic.abs().max(numeric.abs()).max(1.0);
            if (analytic - numeric).abs() > REL_TOL * scale {
                return Err(Error::InvalidParameter(format!(
                    "custom payoff derivative {name} disagrees with finite differences: \
                     analytic {analytic}, numeric {numeric}"
                )));
            }
            Ok(())
        };
        for &x in &[0.1, 0.5, 1.3, 2.7] {
            check(
                "b'",
                (payoff.b1)(x),
                ((payoff.b)(x + H) - (payoff.b)(x - H)) / (2.0 * H),
            )?;
            check(
                "b''",
                (payoff.b2)(x),
                ((payoff.b1)(x + H) - (payoff.b1)(x - H)) / (2.0 * H),
            )?;
            for &a in &[0.2, 0.5, 0.8] {
                check(
                    "c1",
                    (payoff.c1)(a, x),
                    ((payoff.c)(a + H, x) - (payoff.c)(a - H, x)) / (2.0 * H),
                )?;
                check(
                    "c11",
                    (payoff.c11)(a, x),
                    ((payoff.c1)(a + H, x) - (payoff.c1)(a - H, x)) / (2.0 * H),
                )?;
                check(
                    "c2",
                    (payoff.c2)(a, x),
                    ((payoff.c)(a, x + H) - (payoff.c)(a, x - H)) / (2.0 * H),
                )?;
                check(
                    "c12",
                    (payoff.c12)(a, x),
                    ((payoff.c1)(a, x + H) - (payoff.c1)(a, x - H)) / (2.0 * H),
                )?;
            }
        }
        Ok(Self::Custom(Arc::new(payoff)))
    }

    /// Gross benefit `b(x)`.
    pub fn b(&self, x: f64) -> f64 {
        match self {
            Self::LinearMultiplicative => x,
            Self::SeparableLinearCost { .. } => 1.0 - (-x).exp(),
            Self::Custom(p) => (p.b)(x),
        }
    }

    /// `b'(x)`.
    pub fn b1(&self, x: f64) -> f64 {
        match self {
            Self::LinearMultiplicative => 1.0,
            Self::SeparableLinearCost { .. } => (-x).exp(),
            Self::Custom(p) => (p.b1)(x),
        }
    }

    /// `b''(x)`.
    pub fn b2(&self, x: f64) -> f64 {
        match self {
            Self::LinearMultiplicative => 0.0,
            Self::SeparableLinearCost { .. } => -(-x).exp(),
            Self::Custom(p) => (p.b2)(x),
        }
    }

    /// Opportunity cost of effort `c(a, x)`.
    pub fn c(&self, a: f64, x: f64) -> f64 {
        match self {
            Self::LinearMultiplicative => a * x,
            Self::SeparableLinearCost { cost_slope } => a * cost_slope,
            Self::Custom(p) => (p.c)(a, x),
        }
    }

    /// Marginal cost of effort `c₁(a, x) = ∂c/∂a`.
    pub fn c1(&self, a: f64, x: f64) -> f64 {
        match self {
            Self::LinearMultiplicative => x,
            Self::SeparableLinearCost { cost_slope } => *cost_slope,
            Self::Custom(p) => (p.c1)(a, x),
        }
    }

    /// `c₁₁(a, x) = ∂²c/∂a²`.
    pub fn c11(&self, a: f64, x: f64) -> f64 {
        match self {
            Self::LinearMultiplicative | Self::SeparableLinearCost { .. } => 0.0,
            Self::Custom(p) => (p.c11)(a, x),
        }
    }

    /// `c₂(a, x) = ∂c/∂x`.
    pub fn c2(&self, a: f64, x: f64) -> f64 {
        match self {
            Self::LinearMultiplicative => a,
            Self::SeparableLinearCost { .. } => 0.0,
            Self::Custom(p) => (p.c2)(a, x),
        }
    }

    /// `c₁₂(a, x) = ∂²c/∂a∂x`.
    pub fn c12(&self, a: f64, x: f64) -> f64 {
        match self {
            Self::LinearMultiplicative => 1.0,
            Self::SeparableLinearCost { .. } => 0.0,
            Self::Custom(p) => (p.c12)(a, x),
        }
    }

    /// Flow payoff `u(a, x) = b(x) − c(a, x)`.
    pub fn flow(&self, a: f64, x: f64) -> f64 {
        self.b(x) - self.c(a, x)
    }

    pub fn is_linear_multiplicative(&self) -> bool {
        matches!(self, Self::LinearMultiplicative)
    }

    /// Whether the effort cost ignores the stock (`c(a, x) = c(a)`), the
    /// hypothesis of the separable-payoff results.
    pub fn is_separable(&self) -> bool {
        matches!(self, Self::SeparableLinearCost { .. })
    }

    /// Checks the payoff invariants at the supplied stock values: `b`
    /// increasing and concave, `c(·, x)` increasing convex with `c(0, x) = 0`,
    /// `c₁` and `c₁₁` weakly increasing in the stock.
    pub fn validate_on(&self, xs: &[f64]) -> Result<()> {
        const TOL: f64 = 1e-9;
        let efforts = [0.0, 0.25, 0.5, 0.75, 1.0];
        for &x in xs {
            if self.b1(x) < -TOL || self.b2(x) > TOL {
                return Err(Error::InvalidParameter(format!(
                    "b must be increasing and concave, violated at x = {x}"
                )));
            }
            if self.c(0.0, x).abs() > TOL {
                return Err(Error::InvalidParameter(format!(
                    "c(0, x) must vanish, got {} at x = {x}",
                    self.c(0.0, x)
                )));
            }
            for &a in &efforts {
                if self.c1(a, x) < -TOL || self.c11(a, x) < -TOL {
                    return Err(Error::InvalidParameter(format!(
                        "c must be increasing and convex in effort, violated at (a, x) = ({a}, {x})"
                    )));
                }
            }
        }
        // c1 and c11 weakly increasing in x along the supplied grid.
        let mut sorted: Vec<f64> = xs.to_vec();
        sorted.sort_by(f64::total_cmp);
        for pair in sorted.windows(2) {
            for &a in &efforts {
                if self.c1(a, pair[1]) < self.c1(a, pair[0]) - TOL
                    || self.c11(a, pair[1]) < self.c11(a, pair[0]) - TOL
                {
                    return Err(Error::InvalidParameter(format!(
                        "c1/c11 must be weakly increasing in the stock, violated near x = {}",
                        pair[1]
                    )));
                }
            }
        }
        Ok(())
    }
}
