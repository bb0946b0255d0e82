use crate::model::{ModelParams, PayoffSpec};
use crate::{Error, Result};

/// Absolute tolerance of the bisection on effort roots.
pub const EFFORT_ROOT_TOL: f64 = 1e-12;

/// One-step payoff operator
/// `Γ_*(a, â, x, l) = [b(x) − c(a, x) + â·λ·l] / (1 + â·λ)`:
/// the value of exerting effort `a` against aggregate effort `â` when the
/// continuation value upon the next (disclosed) innovation is `l`.
pub fn gamma_star(
    a: f64,
    a_hat: f64,
    x: f64,
    l: f64,
    payoff: &PayoffSpec,
    params: &ModelParams,
) -> f64 {
    (payoff.flow(a, x) + a_hat * params.lambda * l) / (1.0 + a_hat * params.lambda)
}

/// `Γ(a, x, l) = Γ_*(a, n·a, x, l)`: all agents move together.
pub fn gamma(a: f64, x: f64, l: f64, payoff: &PayoffSpec, params: &ModelParams) -> f64 {
    gamma_star(a, params.n_f64() * a, x, l, payoff, params)
}

/// Sign of the derivative of `a ↦ Γ_*(a, a + (n−1)â, x, l)` at `â = a`:
/// `γ(a, x, l) = l − [b(x) − c(a, x)] − (1/λ + n·a)·c₁(a, x)`.
/// Decreasing in `a`, so the best response is pinned by its sign.
pub fn gamma_margin(a: f64, x: f64, l: f64, payoff: &PayoffSpec, params: &ModelParams) -> f64 {
    l - payoff.flow(a, x) - (1.0 / params.lambda + params.n_f64() * a) * payoff.c1(a, x)
}

/// Planner analogue: sign of the derivative of `a ↦ Γ(a, x, l)`, which is
/// `l − [b(x) − c(a, x)] − (1/(nλ) + a)·c₁(a, x)`.
pub fn gamma_planner(a: f64, x: f64, l: f64, payoff: &PayoffSpec, params: &ModelParams) -> f64 {
    l - payoff.flow(a, x)
        - (1.0 / (params.n_f64() * params.lambda) + a) * payoff.c1(a, x)
}

fn bisect_decreasing(mut f: impl FnMut(f64) -> f64) -> f64 {
    // f(0) > 0 > f(1); f decreasing. Absolute tolerance on the argument.
    let (mut lo, mut hi) = (0.0_f64, 1.0_f64);
    while hi - lo > EFFORT_ROOT_TOL {
        let mid = 0.5 * (lo + hi);
        if f(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

fn best_response_via(
    marginal: impl Fn(f64) -> f64,
    x: f64,
    l: f64,
    payoff: &PayoffSpec,
) -> Result<f64> {
    if l < payoff.b(x) - 1e-12 {
        return Err(Error::Domain(format!(
            "best response needs l ≥ b(x); got l = {l}, b({x}) = {}",
            payoff.b(x)
        )));
    }
    if marginal(0.0) <= 0.0 {
        return Ok(0.0);
    }
    if marginal(1.0) >= 0.0 {
        return Ok(1.0);
    }
    Ok(bisect_decreasing(marginal))
}

/// Static best response `p(x, l)`: the unique effort in `[0, 1]` maximising
/// `a ↦ Γ_*(a, a + (n−1)â, x, l)` at the symmetric point; `0` when
/// `γ(0) ≤ 0`, `1` when `γ(1) ≥ 0`, otherwise the root of `γ(·, x, l)`.
/// Weakly increasing in `l`. At the degenerate input `x = 0`, `l = b(0)` the
/// whole interval maximises and the map returns `0`.
pub fn best_response_p(
    x: f64,
    l: f64,
    payoff: &PayoffSpec,
    params: &ModelParams,
) -> Result<f64> {
    best_response_via(|a| gamma_margin(a, x, l, payoff, params), x, l, payoff)
}

/// Planner best response: the *smallest* maximiser of `a ↦ Γ(a, x, l)`,
/// matching the convention for the efficient schedule.
pub fn best_response_planner(
    x: f64,
    l: f64,
    payoff: &PayoffSpec,
    params: &ModelParams,
) -> Result<f64> {
    best_response_via(|a| gamma_planner(a, x, l, payoff, params), x, l, payoff)
}

/// Largest maximiser of `a ↦ a·θ − c(a, x)` for a single agent facing a
/// fixed innovation premium `θ`: `0` when `θ ≤ c₁(0, x)`, `1` when
/// `θ ≥ c₁(1, x)`, else the root of `c₁(a, x) = θ`.
pub fn static_argmax(theta: f64, x: f64, payoff: &PayoffSpec) -> f64 {
    if theta >= payoff.c1(1.0, x) {
        return 1.0;
    }
    if theta <= payoff.c1(0.0, x) {
        return 0.0;
    }
    bisect_decreasing(|a| theta - payoff.c1(a, x))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn linear_setup() -> (PayoffSpec, ModelParams) {
        (
            PayoffSpec::LinearMultiplicative,
            ModelParams::new(1.0, 2, 0.0).unwrap(),
        )
    }

    #[test]
    fn gamma_star_examples() {
        let (p, m) = linear_setup();
        // No effort anywhere: the flow b(x) is locked in.
        assert_abs_diff_eq!(gamma_star(0.0, 0.0, 1.5, 9.0, &p, &m), 1.5);
        // a = 1, â = n, x = 1, l = 1, λ = 1, n = 2: (1 − 1 + 2)/3.
        assert_abs_diff_eq!(gamma_star(1.0, 2.0, 1.0, 1.0, &p, &m), 2.0 / 3.0);
        // Continuation equal to the flow leaves the value at b(x).
        assert_abs_diff_eq!(gamma_star(0.0, 1.3, 0.7, 0.7, &p, &m), 0.7);
    }

    #[test]
    fn gamma_margin_examples() {
        let (p, m) = linear_setup();
        // linear payoffs: γ(a, x, l) = l − x − x/λ − (n−1)·a·x
        assert_abs_diff_eq!(gamma_margin(0.0, 1.0, 1.0, &p, &m), -1.0);
        assert_abs_diff_eq!(gamma_margin(1.0, 1.0, 3.0, &p, &m), 0.0);
        // cost vanishes at x = 0
        assert_abs_diff_eq!(gamma_margin(0.7, 0.0, 2.0, &p, &m), 2.0);
    }

    #[test]
    fn best_response_examples() {
        let (p, m) = linear_setup();
        assert_abs_diff_eq!(best_response_p(1.0, 1.0, &p, &m).unwrap(), 0.0);
        assert_abs_diff_eq!(best_response_p(1.0, 3.0, &p, &m).unwrap(), 1.0);
        // interior root (l − x − x/λ)/((n−1)·x) = 0.5
        assert_abs_diff_eq!(
            best_response_p(1.0, 2.5, &p, &m).unwrap(),
            0.5,
            epsilon = 1e-11
        );
    }

    #[test]
    fn best_response_rejects_low_continuation() {
        let (p, m) = linear_setup();
        assert!(best_response_p(1.0, 0.5, &p, &m).is_err());
    }

    #[test]
    fn degenerate_zero_stock_returns_zero() {
        let (p, m) = linear_setup();
        assert_abs_diff_eq!(best_response_p(0.0, 0.0, &p, &m).unwrap(), 0.0);
        assert_abs_diff_eq!(best_response_p(0.0, 0.1, &p, &m).unwrap(), 1.0);
    }

    #[test]
    fn monotone_in_continuation_value() {
        let (p, m) = linear_setup();
        let mut last = 0.0;
        for i in 0..40 {
            let l = 1.0 + 2.5 * (i as f64) / 39.0;
            let a = best_response_p(1.0, l, &p, &m).unwrap();
            assert!(a >= last - 1e-12, "p not increasing in l at l = {l}");
            last = a;
        }
    }

    #[test]
    fn static_argmax_boundaries() {
        let (p, _) = linear_setup();
        assert_abs_diff_eq!(static_argmax(0.5, 1.0, &p), 0.0);
        assert_abs_diff_eq!(static_argmax(2.0, 1.0, &p), 1.0);
        // linear cost: any interior theta = c1 gives the largest maximiser 1
        assert_abs_diff_eq!(static_argmax(1.0, 1.0, &p), 1.0);
    }
}
