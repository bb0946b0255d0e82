use super::FixedPointConfig;
use crate::model::DEFAULT_QUAD_ORDER;

/// Knobs shared by the grid solvers: quadrature order for the expectation
/// operators and the fixed-point tolerances.
#[derive(Debug, Clone, Copy)]
pub struct SolveOptions {
    pub quad_order: usize,
    pub fp: FixedPointConfig,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self {
            quad_order: DEFAULT_QUAD_ORDER,
            fp: FixedPointConfig::default(),
        }
    }
}
