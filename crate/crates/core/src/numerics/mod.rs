//! Grid value functions, the one-step payoff operators, the static
//! best-response map, and the two-sided monotone fixed-point engine.

mod engine;
mod gridfn;
mod options;
mod response;

pub use engine::{
    iterate_from_below, monotone_fixed_point, FixedPointConfig, FixedPointReport,
    FixedPointSummary,
};
pub use gridfn::{GridConfig, GridFn, StockGrid, TailRule};
pub use options::SolveOptions;
pub use response::{
    best_response_p, best_response_planner, gamma, gamma_margin, gamma_planner, gamma_star,
    static_argmax, EFFORT_ROOT_TOL,
};
