//! Domain primitives: model parameters, payoff specifications, innovation-size
//! distributions, and the expectation operators driving the Bellman equations.

mod dist;
mod params;
mod payoff;
mod quadrature;

pub use dist::InnovationDist;
pub use params::{LimitRegime, ModelParams};
pub use payoff::{CustomPayoff, PayoffSpec};
pub use quadrature::GaussLaguerre;

/// Default number of Gauss–Laguerre nodes for the exponential component of
/// the expectation operators.
pub const DEFAULT_QUAD_ORDER: usize = 64;
