use serde::Serialize;

use super::GridFn;
use crate::{Error, Result};

/// Tolerances of the two-sided fixed-point iteration.
#[derive(Debug, Clone, Copy)]
pub struct FixedPointConfig {
    /// Sup-norm residual below which an iteration chain stops.
    pub tol: f64,
    pub max_iter: usize,
    /// Slack allowed when verifying that the from-below chain increases and
    /// the from-above chain decreases (floating-point noise only).
    pub monotonicity_slack: f64,
}

impl Default for FixedPointConfig {
    fn default() -> Self {
        Self {
            tol: 1e-10,
            max_iter: 200_000,
            monotonicity_slack: 1e-11,
        }
    }
}

/// Outcome of a two-sided monotone iteration. `agreement_sup_norm` bounds the
/// distance between the smallest and largest fixed points on the grid and is
/// the uniqueness certificate the solvers report.
#[derive(Debug, Clone)]
pub struct FixedPointReport {
    pub iterations: usize,
    pub residual: f64,
    pub from_below: GridFn,
    pub from_above: GridFn,
    pub agreement_sup_norm: f64,
}

/// JSON-facing summary of a [`FixedPointReport`] (the grids are exported
/// separately as CSV).
#[derive(Debug, Clone, Serialize)]
pub struct FixedPointSummary {
    pub iterations: usize,
    pub residual: f64,
    pub agreement_sup_norm: f64,
}

impl FixedPointReport {
    pub fn summary(&self) -> FixedPointSummary {
        FixedPointSummary {
            iterations: self.iterations,
            residual: self.residual,
            agreement_sup_norm: self.agreement_sup_norm,
        }
    }
}

enum Direction {
    Up,
    Down,
}

fn iterate(
    op: &impl Fn(&GridFn) -> Result<GridFn>,
    seed: GridFn,
    direction: Direction,
    cfg: &FixedPointConfig,
) -> Result<(GridFn, usize, f64, Vec<f64>)> {
    let mut current = seed;
    let mut trace: Vec<f64> = Vec::new();
    for iter in 1..=cfg.max_iter {
        let next = op(&current)?;
        let mut residual = 0.0_f64;
        for (node, (old, new)) in current.values().iter().zip(next.values()).enumerate() {
            let delta = new - old;
            let wrong_way = match direction {
                Direction::Up => -delta,
                Direction::Down => delta,
            };
            if wrong_way > cfg.monotonicity_slack {
                return Err(Error::MonotonicityViolation {
                    node,
                    x: current.nodes()[node],
                    delta,
                });
            }
            residual = residual.max(delta.abs());
        }
        trace.push(residual);
        current = next;
        if residual < cfg.tol {
            return Ok((current, iter, residual, trace));
        }
    }
    let tail = trace.len().saturating_sub(25);
    Err(Error::Convergence {
        iterations: cfg.max_iter,
        residual: *trace.last().unwrap_or(&f64::NAN),
        trace: trace[tail..].to_vec(),
    })
}

/// One-sided value iteration from below: iterates `op` from `seed` until the
/// sup-norm residual drops under `cfg.tol`, checking that the chain is
/// pointwise increasing. Returns the limit with the iteration count and the
/// final residual.
pub fn iterate_from_below(
    op: impl Fn(&GridFn) -> Result<GridFn>,
    seed: GridFn,
    cfg: &FixedPointConfig,
) -> Result<(GridFn, usize, f64)> {
    let (limit, iterations, residual, _) = iterate(&op, seed, Direction::Up, cfg)?;
    Ok((limit, iterations, residual))
}

/// Runs a monotone operator to its smallest and largest fixed points on
/// `[lower_seed, upper_seed]` by iterating from below and from above, and
/// reports both limits together with their sup-norm gap.
///
/// Preconditions: `op` is order-preserving on the interval and maps it to
/// itself, and `lower_seed ≤ upper_seed` pointwise. The iteration chains are
/// checked for the implied directions every step; a violation is reported as
/// an operator bug, not as data error.
pub fn monotone_fixed_point(
    op: impl Fn(&GridFn) -> Result<GridFn>,
    lower_seed: GridFn,
    upper_seed: GridFn,
    cfg: &FixedPointConfig,
) -> Result<FixedPointReport> {
    if let Some((node, (lo, up))) = lower_seed
        .values()
        .iter()
        .zip(upper_seed.values())
        .enumerate()
        .find(|(_, (lo, up))| **lo > **up + cfg.monotonicity_slack)
        .map(|(node, (lo, up))| (node, (*lo, *up)))
    {
        return Err(Error::InvalidParameter(format!(
            "seeds not ordered at node {node}: lower {lo} > upper {up}"
        )));
    }
    let (from_below, it_lo, res_lo, _) = iterate(&op, lower_seed, Direction::Up, cfg)?;
    let (from_above, it_hi, res_hi, _) = iterate(&op, upper_seed, Direction::Down, cfg)?;
    let agreement = from_below.sup_distance(&from_above);
    Ok(FixedPointReport {
        iterations: it_lo.max(it_hi),
        residual: res_lo.max(res_hi),
        from_below,
        from_above,
        agreement_sup_norm: agreement,
    })
}
