//! Pieces shared by the grid solvers: seeds, the stopping-cutoff equation,
//! the uniqueness condition, exact piecewise-linear exponential expectations,
//! and post-solve shape checks.

use std::sync::Arc;

use crate::model::{GaussLaguerre, InnovationDist, ModelParams, PayoffSpec};
use crate::numerics::{GridFn, StockGrid, TailRule};
use crate::{Error, Result};

/// Upper bound `w̄(x) = b(x) + nλ[b(μ) − b(0)]` on every value of interest;
/// the canonical from-above seed.
pub(crate) fn upper_seed(
    grid: Arc<StockGrid>,
    params: &ModelParams,
    payoff: &PayoffSpec,
    dist: &InnovationDist,
) -> Result<GridFn> {
    let bump = params.n_f64() * params.lambda * (payoff.b(dist.mean()) - payoff.b(0.0));
    GridFn::from_fn(grid, TailRule::BSlope, |x| payoff.b(x) + bump)
}

/// From-below seed: the no-effort value `b`.
pub(crate) fn lower_seed(grid: Arc<StockGrid>, payoff: &PayoffSpec) -> Result<GridFn> {
    GridFn::from_fn(grid, TailRule::EqualsB, |x| payoff.b(x))
}

/// Numerical form of the large-stock condition that pins the fixed point
/// down, verified at `x_max` with the solver's own aggregate-effort
/// multiplier (`n` for the planner, `1` for the equilibria): effort must
/// have stopped paying by the grid end, `mult·λ·{E_F[b(x_max+z̃)] − b(x_max)}
/// ≤ c₁(0, x_max)`. This is also exactly what makes the `EqualsB` tail rule
/// valid on the grid.
pub(crate) fn check_grid_covers_cutoff(
    params: &ModelParams,
    payoff: &PayoffSpec,
    dist: &InnovationDist,
    quad: &GaussLaguerre,
    mult: f64,
    x_max: f64,
) -> Result<()> {
    let gain = dist.expect(quad, x_max, |y| payoff.b(y))? - payoff.b(x_max);
    let lhs = mult * params.lambda * gain;
    let rhs = payoff.c1(0.0, x_max);
    if lhs > rhs {
        return Err(Error::InvalidParameter(format!(
            "effort is still worthwhile at x_max = {x_max} \
             (mult·λ·gain = {lhs} > c₁ = {rhs}); enlarge the grid"
        )));
    }
    Ok(())
}

/// Smallest stock at which `mult·λ·{E_F[b(x+z̃)] − b(x)} ≤ c₁(0, x)`, i.e.
/// where effort stops paying. `mult` is `n` for the planner and `1` for the
/// equilibria. `None` when the strict reverse inequality holds up to `x_max`
/// (effort never ceases on the grid).
pub(crate) fn stopping_cutoff(
    params: &ModelParams,
    payoff: &PayoffSpec,
    dist: &InnovationDist,
    quad: &GaussLaguerre,
    mult: f64,
    x_max: f64,
) -> Result<Option<f64>> {
    let margin = |x: f64| -> Result<f64> {
        let gain = dist.expect(quad, x, |y| payoff.b(y))? - payoff.b(x);
        Ok(mult * params.lambda * gain - payoff.c1(0.0, x))
    };
    // The margin is decreasing: the gain term falls with the stock (b is
    // concave) while the marginal cost rises.
    if margin(0.0)? <= 0.0 {
        return Ok(Some(0.0));
    }
    if margin(x_max)? > 0.0 {
        return Ok(None);
    }
    let (mut lo, mut hi) = (0.0_f64, x_max);
    while hi - lo > 1e-12 * x_max.max(1.0) {
        let mid = 0.5 * (lo + hi);
        if margin(mid)? > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(Some(0.5 * (lo + hi)))
}

/// Post-solve shape checks common to the three regimes: `b ≤ v`, `v − b`
/// decreasing, effort decreasing with values in `[0,1]`, and no effort above
/// the stopping cutoff. The planner's value is additionally increasing;
/// equilibrium values need not be (innovations can be detrimental), so that
/// check is opt-in.
pub(crate) fn check_solution_shape(
    what: &str,
    v: &GridFn,
    alpha: &GridFn,
    payoff: &PayoffSpec,
    cutoff: Option<f64>,
    require_increasing_value: bool,
    tol: f64,
) -> Result<()> {
    let xs = v.nodes();
    let vals = v.values();
    let efforts = alpha.values();
    for i in 0..xs.len() {
        let b = payoff.b(xs[i]);
        if vals[i] < b - tol {
            return Err(Error::InternalConsistency(format!(
                "{what}: value below b at x = {}",
                xs[i]
            )));
        }
        if !(-1e-12..=1.0 + 1e-12).contains(&efforts[i]) {
            return Err(Error::InternalConsistency(format!(
                "{what}: effort outside [0,1] at x = {}",
                xs[i]
            )));
        }
        if let Some(cut) = cutoff {
            // One-cell slack: the cutoff generally falls between nodes.
            let next = if i + 1 < xs.len() { xs[i + 1] } else { xs[i] };
            if xs[i] > cut && next > cut && efforts[i] > 1e-7 && xs[i] > xs[i.saturating_sub(1)] {
                if xs[i] - cut > (next - xs[i]) {
                    return Err(Error::InternalConsistency(format!(
                        "{what}: positive effort {} beyond the cutoff {cut} at x = {}",
                        efforts[i], xs[i]
                    )));
                }
            }
        }
        if i > 0 {
            if require_increasing_value && vals[i] < vals[i - 1] - tol {
                return Err(Error::InternalConsistency(format!(
                    "{what}: value not increasing at x = {}",
                    xs[i]
                )));
            }
            let gap_now = vals[i] - payoff.b(xs[i]);
            let gap_prev = vals[i - 1] - payoff.b(xs[i - 1]);
            if gap_now > gap_prev + tol {
                return Err(Error::InternalConsistency(format!(
                    "{what}: v − b not decreasing at x = {}",
                    xs[i]
                )));
            }
            if efforts[i] > efforts[i - 1] + 1e-7 {
                return Err(Error::InternalConsistency(format!(
                    "{what}: effort not decreasing at x = {}",
                    xs[i]
                )));
            }
        }
    }
    Ok(())
}

/// Exact integral of a piecewise-linear function against the exponential
/// density: for values `(v_i)` on nodes `(x_i)`,
/// `R_i := ∫_{x_i}^{x_K} v(y)·e^{−(y−x_i)/eps} dy` for every `i`, in one
/// backward pass. Used where Gauss–Laguerre would smear kinks or jumps.
pub(crate) fn exp_integral_backward(xs: &[f64], vals: &[f64], eps: f64) -> Vec<f64> {
    let k = xs.len();
    let mut out = vec![0.0; k];
    for i in (0..k.saturating_sub(1)).rev() {
        let h = xs[i + 1] - xs[i];
        let decay = (-h / eps).exp();
        // ∫_0^h e^{-t/eps} dt and ∫_0^h t e^{-t/eps} dt
        let i0 = eps * (1.0 - decay);
        let i1 = eps * eps - (h * eps + eps * eps) * decay;
        let slope = (vals[i + 1] - vals[i]) / h;
        let cell = vals[i] * i0 + slope * i1;
        out[i] = cell + decay * out[i + 1];
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::DEFAULT_QUAD_ORDER;
    use approx::assert_abs_diff_eq;

    #[test]
    fn linear_cutoffs_are_lambda_mu_times_mult() {
        let params = ModelParams::new(10.0, 5, 0.0).unwrap();
        let payoff = PayoffSpec::LinearMultiplicative;
        let dist = InnovationDist::atom_plus_exponential(0.01, 5.0, 0.01).unwrap();
        let quad = GaussLaguerre::new(DEFAULT_QUAD_ORDER).unwrap();
        // Planner: λμn = 2.995; equilibrium: λμ = 0.599.
        let planner = stopping_cutoff(&params, &payoff, &dist, &quad, 5.0, 4.0)
            .unwrap()
            .unwrap();
        assert_abs_diff_eq!(planner, 2.995, epsilon = 1e-9);
        let sse = stopping_cutoff(&params, &payoff, &dist, &quad, 1.0, 4.0)
            .unwrap()
            .unwrap();
        assert_abs_diff_eq!(sse, 0.599, epsilon = 1e-9);
    }

    #[test]
    fn huge_marginal_cost_stops_effort_at_zero() {
        let params = ModelParams::new(1.0, 2, 0.0).unwrap();
        let payoff = PayoffSpec::separable_linear_cost(50.0).unwrap();
        let dist = InnovationDist::exponential(1.0).unwrap();
        let quad = GaussLaguerre::new(DEFAULT_QUAD_ORDER).unwrap();
        let cut = stopping_cutoff(&params, &payoff, &dist, &quad, 2.0, 10.0).unwrap();
        assert_eq!(cut, Some(0.0));
    }

    #[test]
    fn bounded_benefit_gives_interior_cutoff() {
        // b(x) = 1 − e^{−x} bounded with vanishing slope, c₁ = 0.05 > 0:
        // the margin changes sign at a finite stock.
        let params = ModelParams::new(1.0, 2, 0.0).unwrap();
        let payoff = PayoffSpec::separable_linear_cost(0.05).unwrap();
        let dist = InnovationDist::exponential(1.0).unwrap();
        let quad = GaussLaguerre::new(DEFAULT_QUAD_ORDER).unwrap();
        let cut = stopping_cutoff(&params, &payoff, &dist, &quad, params.n_f64(), 40.0)
            .unwrap()
            .expect("cutoff must exist");
        assert!(cut > 0.0 && cut < 40.0);
        // The margin really does change sign there.
        let gain = |x: f64| {
            params.n_f64() * params.lambda
                * (dist.expect(&quad, x, |y| payoff.b(y)).unwrap() - payoff.b(x))
        };
        assert!(gain(cut - 1e-6) > 0.05);
        assert!(gain(cut + 1e-6) < 0.05);
    }

    #[test]
    fn exp_integral_matches_closed_form_for_linear() {
        // v(y) = y on [0, 3]: ∫_x^3 y e^{-(y-x)/eps} dy has a closed form.
        let eps = 0.4;
        let xs: Vec<f64> = (0..=30).map(|i| i as f64 * 0.1).collect();
        let vals = xs.clone();
        let r = exp_integral_backward(&xs, &vals, eps);
        for (i, &x) in xs.iter().enumerate() {
            let span = 3.0 - x;
            // ∫_0^s (x+t) e^{-t/eps} dt = x·eps(1-e^{-s/eps}) + eps² - (s·eps+eps²)e^{-s/eps}
            let exact = x * eps * (1.0 - (-span / eps).exp()) + eps * eps
                - (span * eps + eps * eps) * (-span / eps).exp();
            assert_abs_diff_eq!(r[i], exact, epsilon = 1e-12);
        }
    }
}
