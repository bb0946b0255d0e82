//! Equilibrium of the game with disposal: the fixed point of `P_d` (the
//! operator built on `L_d v = E_F[v ∨ v(·+z̃)]`), the discard policy, welfare
//! dominance over forced disclosure, and the small-frequent-improvement
//! closed forms.

use crate::model::{GaussLaguerre, InnovationDist, LimitRegime, ModelParams, PayoffSpec};
use crate::numerics::{
    best_response_p, gamma, monotone_fixed_point, FixedPointReport, GridConfig, GridFn,
    SolveOptions, TailRule,
};
use crate::support;
use crate::{Error, Result};

/// Region of increment sizes an agent discards at a given stock.
#[derive(Debug, Clone, PartialEq)]
pub enum DiscardRegion {
    Empty,
    /// Sizes in the open interval `(z_lo, z_hi)` are discarded.
    Interval(f64, f64),
    /// Multiple sign changes of `z ↦ v_d(x+z) − v_d(x)` (non-standard
    /// payoffs); the raw crossing points are kept instead of a summary.
    SignChanges(Vec<f64>),
}

/// Equilibrium solution of the game with disposal.
#[derive(Debug, Clone)]
pub struct DisposalSolution {
    pub v_d: GridFn,
    pub alpha_d: GridFn,
    /// Per-node description of `{z > 0 : v_d(x+z) < v_d(x)}`. Ties disclose.
    pub discard: Vec<DiscardRegion>,
    /// Stopping cutoff; the same equation as in the forced regime.
    pub x_f: Option<f64>,
    pub report: FixedPointReport,
    pub bellman_residual: f64,
}

impl DisposalSolution {
    /// Disposal policy evaluated directly from the value function:
    /// discard iff continuing from `x + z` is strictly worse than from `x`.
    pub fn discards(&self, payoff: &PayoffSpec, x: f64, z: f64) -> bool {
        self.v_d.eval(x + z, payoff) < self.v_d.eval(x, payoff)
    }
}

fn disposal_operator<'a>(
    params: &'a ModelParams,
    payoff: &'a PayoffSpec,
    dist: &'a InnovationDist,
    quad: &'a GaussLaguerre,
) -> impl Fn(&GridFn) -> Result<GridFn> + 'a {
    move |v: &GridFn| {
        let g = v.as_closure(payoff);
        let mut out = Vec::with_capacity(v.nodes().len());
        for &x in v.nodes() {
            let l = dist.expect_max(quad, x, &g)?;
            let a = best_response_p(x, l, payoff, params)?;
            out.push(gamma(a, x, l, payoff, params));
        }
        v.with_values(out)
    }
}

/// Solves `v = P_d v = Γ(p(x, L_d v), x, L_d v)` by two-sided monotone
/// iteration; recovers the schedule and the discard regions.
pub fn solve_disposal(
    params: &ModelParams,
    payoff: &PayoffSpec,
    dist: &InnovationDist,
    grid_cfg: &GridConfig,
    opts: &SolveOptions,
) -> Result<DisposalSolution> {
    let quad = GaussLaguerre::new(opts.quad_order)?;
    let mut cfg = grid_cfg.clone();
    if payoff.is_linear_multiplicative() {
        cfg = cfg.with_inserted(&[params.lambda * dist.mean()]);
    }
    let grid = cfg.build()?;
    payoff.validate_on(grid.nodes())?;
    support::check_grid_covers_cutoff(params, payoff, dist, &quad, 1.0, grid.last())?;

    let lower = support::lower_seed(grid.clone(), payoff)?;
    let upper = support::upper_seed(grid.clone(), params, payoff, dist)?;
    let op = disposal_operator(params, payoff, dist, &quad);
    let report = monotone_fixed_point(&op, lower, upper, &opts.fp)?;

    let v_d = report.from_below.clone();
    let bellman_residual = op(&v_d)?.sup_distance(&v_d);

    let mut efforts = Vec::with_capacity(grid.len());
    {
        let g = v_d.as_closure(payoff);
        for &x in grid.nodes() {
            let l = dist.expect_max(&quad, x, &g)?;
            efforts.push(best_response_p(x, l, payoff, params)?);
        }
    }
    let alpha_d = GridFn::new(grid.clone(), efforts, TailRule::Zero)?;

    let x_f = support::stopping_cutoff(params, payoff, dist, &quad, 1.0, grid.last())?;
    support::check_solution_shape("disposal", &v_d, &alpha_d, payoff, x_f, false, 1e-8)?;

    let discard = discard_regions(&v_d);

    Ok(DisposalSolution {
        v_d,
        alpha_d,
        discard,
        x_f,
        report,
        bellman_residual,
    })
}

/// Scans `z ↦ v_d(x+z) − v_d(x)` for each grid node. Ties disclose, so the
/// region is the open set where the difference is strictly negative;
/// crossings are refined by linear interpolation between nodes.
fn discard_regions(v: &GridFn) -> Vec<DiscardRegion> {
    const TOL: f64 = 1e-12;
    let nodes = v.nodes();
    let vals = v.values();
    let mut out = Vec::with_capacity(nodes.len());
    for (i, &x) in nodes.iter().enumerate() {
        let here = vals[i];
        let mut crossings: Vec<f64> = Vec::new();
        let mut negative = false;
        for j in i + 1..nodes.len() {
            let diff = vals[j] - here;
            if !negative && diff < -TOL {
                let prev = vals[j - 1] - here;
                let (za, zb) = (nodes[j - 1] - x, nodes[j] - x);
                let t = if (prev - diff).abs() > TOL {
                    (prev / (prev - diff)).clamp(0.0, 1.0)
                } else {
                    0.0
                };
                crossings.push(za + t * (zb - za));
                negative = true;
            } else if negative && diff >= -TOL {
                let prev = vals[j - 1] - here;
                let (za, zb) = (nodes[j - 1] - x, nodes[j] - x);
                let t = if (prev - diff).abs() > TOL {
                    (prev / (prev - diff)).clamp(0.0, 1.0)
                } else {
                    1.0
                };
                crossings.push(za + t * (zb - za));
                negative = false;
            }
        }
        if negative {
            // v is increasing beyond the grid; close the region at its end.
            crossings.push(v.grid().last() - x);
        }
        out.push(match crossings.len() {
            0 => DiscardRegion::Empty,
            2 => DiscardRegion::Interval(crossings[0], crossings[1]),
            _ => DiscardRegion::SignChanges(crossings),
        });
    }
    out
}

/// Node-wise comparison of the two regimes.
#[derive(Debug, Clone)]
pub struct WelfareComparison {
    /// `v_d(x0) − v_f(x0)`.
    pub gap_at_x0: f64,
    /// Node-wise minimum of `v_d − v_f` (never materially negative).
    pub min_gap: f64,
    /// Whether the gap at `x0` is strictly positive beyond tolerance.
    pub strict_at_x0: bool,
}

pub fn compare_welfare_disposal(
    forced_value: &GridFn,
    disposal_value: &GridFn,
    payoff: &PayoffSpec,
    x0: f64,
) -> WelfareComparison {
    let mut min_gap = f64::INFINITY;
    for (&x, &vd) in disposal_value.nodes().iter().zip(disposal_value.values()) {
        let vf = forced_value.eval(x, payoff);
        min_gap = min_gap.min(vd - vf);
    }
    let gap_at_x0 = disposal_value.eval(x0, payoff) - forced_value.eval(x0, payoff);
    WelfareComparison {
        gap_at_x0,
        min_gap,
        strict_at_x0: gap_at_x0 > 1e-6,
    }
}

// ---------------------------------------------------------------------------
// Closed forms in the small-frequent-improvement limit
// ---------------------------------------------------------------------------

/// Boundary objects of the disposal equilibrium in the limit regime.
#[derive(Debug, Clone, Copy)]
pub struct LimitClosedForm {
    /// Full-effort boundary `y_d = λ′ζ / (1 + λ′(n−1))`.
    pub y_d: f64,
    /// Lower edge of the recovery band, `x̂_f = x_f + ε′·ln(1−λ′)`.
    pub xhat_f: f64,
    /// Stopping cutoff `x_f = λ′(ζ + ε′)`.
    pub x_f: f64,
}

/// Whether infinitesimal improvements are detrimental under forced
/// disclosure at these limit parameters:
/// `[1 + λ′(n−1)]·[λ′(ε′+ζ) + ε′ln(1−λ′)] > λ′ζ`. The four-branch closed
/// forms are valid only in that case.
pub fn limit_detriment_condition(regime: &LimitRegime) -> bool {
    let lp = regime.lambda_prime;
    let xhat = regime.x_f() + regime.eps_prime * (1.0 - lp).ln();
    (1.0 + lp * (f64::from(regime.n) - 1.0)) * xhat > lp * regime.zeta
}

fn limit_pieces(regime: &LimitRegime) -> Result<LimitClosedForm> {
    if !regime.substantial_ends_effort() {
        return Err(Error::Domain(format!(
            "limit closed forms need λ′(ζ+ε′) ≤ ζ, got x_f = {}",
            regime.x_f()
        )));
    }
    if !limit_detriment_condition(regime) {
        return Err(Error::Domain(
            "limit closed forms need detrimental innovations; the branch \
             structure is invalid otherwise"
                .into(),
        ));
    }
    let lp = regime.lambda_prime;
    let x_f = regime.x_f();
    Ok(LimitClosedForm {
        y_d: lp * regime.zeta / (1.0 + lp * (f64::from(regime.n) - 1.0)),
        xhat_f: x_f + regime.eps_prime * (1.0 - lp).ln(),
        x_f,
    })
}

/// Evaluates the four-branch limit-regime displays for effort and value in
/// the disposal equilibrium; also returns the boundary objects. Small
/// increments are discarded exactly on `[y_d, x̂_f)`; substantial ones are
/// always adopted.
pub fn disposal_closed_form_limit(
    regime: &LimitRegime,
    x: f64,
) -> Result<(f64, f64, LimitClosedForm)> {
    let pieces = limit_pieces(regime)?;
    let lp = regime.lambda_prime;
    let ep = regime.eps_prime;
    let n = f64::from(regime.n);
    let zeta = regime.zeta;
    let LimitClosedForm { y_d, xhat_f, x_f } = pieces;

    let effort = if x <= y_d {
        1.0
    } else if x <= xhat_f {
        (zeta / x - 1.0 / lp) / (n - 1.0)
    } else if x <= x_f {
        (ep * (((x - x_f) / ep).exp() - 1.0) + x_f - x) / (lp * x * (n - 1.0))
    } else {
        0.0
    };

    let value = if x <= y_d {
        // Full-effort stretch: the value solves a linear first-order ODE with
        // particular slope λ′n/(1+λ′n); the exponential coefficient comes
        // from the boundary value v(y_d) = n·y_d.
        let slope = lp * n / (1.0 + lp * n);
        let c0 = ep * slope; // ε′λ′n/(1+λ′n)
        let level = slope * (zeta + c0);
        let coeff = n * y_d - level - slope * y_d;
        level + slope * x + coeff * ((x - y_d) / c0).exp()
    } else if x <= xhat_f {
        zeta + (1.0 - 1.0 / lp) * x
    } else if x <= x_f {
        (ep * (((x - x_f) / ep).exp() - 1.0) - (1.0 - lp) * x + x_f) / lp
    } else {
        x
    };

    Ok((effort.clamp(0.0, 1.0), value, pieces))
}
