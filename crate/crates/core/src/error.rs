use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// A constructor or configuration check rejected its input.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// An operation was called outside the region where it is defined.
    #[error("domain error: {0}")]
    Domain(String),

    /// An integrand or evaluator produced a non-finite value.
    #[error("non-finite value of {what} at {at}")]
    NonFinite { what: String, at: f64 },

    /// An iterative solver ran out of iterations. `trace` holds the most
    /// recent sup-norm residuals for diagnosis.
    #[error("no convergence after {iterations} iterations (residual {residual:.3e})")]
    Convergence {
        iterations: usize,
        residual: f64,
        trace: Vec<f64>,
    },

    /// A supposedly monotone operator moved an iterate the wrong way.
    /// This indicates a bug in the operator, not in the data.
    #[error("monotonicity violated at node {node} (x = {x}) by {delta:.3e}")]
    MonotonicityViolation { node: usize, x: f64, delta: f64 },

    /// A solved object violates an invariant it is supposed to satisfy.
    #[error("internal consistency: {0}")]
    InternalConsistency(String),

    /// A discretisation step length is too coarse for the requested solve.
    #[error("infeasible discretisation: {0}")]
    Infeasible(String),
}
