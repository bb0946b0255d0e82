//! Social-welfare benchmark: the planner's value `v_*`, the efficient effort
//! schedule `α_*`, the stopping cutoff `x_*`, and two independent
//! linear-payoff representations used for cross-validation.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::model::{GaussLaguerre, InnovationDist, ModelParams, PayoffSpec};
use crate::numerics::{
    best_response_planner, gamma, monotone_fixed_point, FixedPointReport, GridConfig, GridFn,
    SolveOptions, TailRule,
};
use crate::support;
use crate::{Error, Result};

/// Planner solution on a stock grid.
#[derive(Debug, Clone)]
pub struct BenchmarkSolution {
    pub v_star: GridFn,
    pub alpha_star: GridFn,
    /// Smallest stock at which efficient effort ceases; `None` when effort
    /// never ceases on the grid.
    pub x_star: Option<f64>,
    pub report: FixedPointReport,
    /// Sup-norm of `v − P_*v` at the returned solution.
    pub bellman_residual: f64,
}

fn planner_operator<'a>(
    params: &'a ModelParams,
    payoff: &'a PayoffSpec,
    dist: &'a InnovationDist,
    quad: &'a GaussLaguerre,
) -> impl Fn(&GridFn) -> Result<GridFn> + 'a {
    move |v: &GridFn| {
        let g = v.as_closure(payoff);
        let mut out = Vec::with_capacity(v.nodes().len());
        for &x in v.nodes() {
            let l = dist.expect(quad, x, &g)?;
            let a = best_response_planner(x, l, payoff, params)?;
            out.push(gamma(a, x, l, payoff, params));
        }
        v.with_values(out)
    }
}

/// Solves the planner's Bellman equation `v = max_a Γ(a, x, L_f v)` by
/// two-sided monotone iteration between `b` and `w̄`, and recovers the
/// pointwise-smallest efficient schedule.
pub fn solve_benchmark(
    params: &ModelParams,
    payoff: &PayoffSpec,
    dist: &InnovationDist,
    grid_cfg: &GridConfig,
    opts: &SolveOptions,
) -> Result<BenchmarkSolution> {
    let quad = GaussLaguerre::new(opts.quad_order)?;
    let mut cfg = grid_cfg.clone();
    // Place a node exactly at the analytic cutoff λμn of the linear case:
    // v_* is kinked there and interpolation would otherwise smear it.
    if payoff.is_linear_multiplicative() {
        cfg = cfg.with_inserted(&[params.lambda * dist.mean() * params.n_f64()]);
    }
    let grid = cfg.build()?;
    payoff.validate_on(grid.nodes())?;
    support::check_grid_covers_cutoff(params, payoff, dist, &quad, params.n_f64(), grid.last())?;

    let lower = support::lower_seed(grid.clone(), payoff)?;
    let upper = support::upper_seed(grid.clone(), params, payoff, dist)?;
    let op = planner_operator(params, payoff, dist, &quad);
    let report = monotone_fixed_point(&op, lower, upper, &opts.fp)?;

    let v_star = report.from_below.clone();
    let bellman_residual = op(&v_star)?.sup_distance(&v_star);

    let mut efforts = Vec::with_capacity(grid.len());
    {
        let g = v_star.as_closure(payoff);
        for &x in grid.nodes() {
            let l = dist.expect(&quad, x, &g)?;
            efforts.push(best_response_planner(x, l, payoff, params)?);
        }
    }
    let alpha_star = GridFn::new(grid.clone(), efforts, TailRule::Zero)?;

    let x_star = support::stopping_cutoff(params, payoff, dist, &quad, params.n_f64(), grid.last())?;
    support::check_solution_shape("benchmark", &v_star, &alpha_star, payoff, x_star, true, 1e-8)?;

    Ok(BenchmarkSolution {
        v_star,
        alpha_star,
        x_star,
        report,
        bellman_residual,
    })
}

/// Smallest stock satisfying `λn{E_F[b(x+z̃)] − b(x)} ≤ c₁(0, x)`; `None`
/// when the reverse strict inequality holds up to `x_max`.
pub fn benchmark_cutoff(
    params: &ModelParams,
    payoff: &PayoffSpec,
    dist: &InnovationDist,
    quad: &GaussLaguerre,
    x_max: f64,
) -> Result<Option<f64>> {
    support::stopping_cutoff(params, payoff, dist, quad, params.n_f64(), x_max)
}

/// Closed-form planner value for linear multiplicative payoffs and the
/// atom-plus-exponential size law, valid when a substantial innovation ends
/// efficient effort (`ζ ≥ x_* = λμn`).
pub fn benchmark_closed_form_linear(
    params: &ModelParams,
    dist: &InnovationDist,
    x: f64,
) -> Result<f64> {
    let InnovationDist::AtomPlusExponential { rho, zeta, eps } = *dist else {
        return Err(Error::Domain(
            "closed form requires the atom-plus-exponential size law".into(),
        ));
    };
    if rho == 0.0 {
        return Err(Error::Domain("closed form requires rho > 0".into()));
    }
    let n = params.n_f64();
    let lambda = params.lambda;
    let x_star = lambda * n * dist.mean();
    if zeta < x_star {
        return Err(Error::Domain(format!(
            "closed form requires ζ ≥ x_* (ζ = {zeta}, x_* = {x_star})"
        )));
    }
    if x >= x_star {
        return Ok(x);
    }
    let lnr = lambda * n * rho;
    let front = lnr / ((1.0 + lnr) * (1.0 + lnr));
    let exponent = (1.0 + lnr) / (eps * (1.0 + lambda * n)) * (x - x_star);
    Ok(front
        * (eps * (1.0 / rho - 1.0) * exponent.exp() + x_star + (1.0 + lnr) * x + zeta))
}

/// Monte-Carlo (or exact, for the degenerate law) estimate of the planner
/// value through the jump-count representation
/// `v_*(x) = λμn − ∫_x^{λμn} E[(λn/(1+λn))^{m̃(y)}] dy`,
/// where `m̃(y)` counts the innovations needed to push the stock from `y`
/// past `λμn`.
#[derive(Debug, Clone, Copy)]
pub struct CountsEstimate {
    pub value: f64,
    /// Zero for the exact degenerate evaluation.
    pub std_error: f64,
}

pub fn benchmark_linear_via_counts(
    params: &ModelParams,
    dist: &InnovationDist,
    x: f64,
    replications: usize,
    seed: u64,
) -> Result<CountsEstimate> {
    let n = params.n_f64();
    let threshold = params.lambda * n * dist.mean();
    if x >= threshold {
        return Err(Error::Domain(format!(
            "counts representation requires x < λμn (x = {x}, λμn = {threshold})"
        )));
    }
    let beta = params.lambda * n / (1.0 + params.lambda * n);
    let span = threshold - x;

    if let InnovationDist::Degenerate { mu } = *dist {
        // m̃(y) = ceil((λμn − y)/μ): integrate the resulting step function in
        // closed form, band by band.
        let mut integral = 0.0;
        let mut m = 1_u32;
        let mut covered = 0.0; // distance below the threshold already integrated
        while covered < span {
            let band = (mu * f64::from(m)).min(span) - covered;
            integral += beta.powi(m as i32) * band;
            covered += band;
            m += 1;
        }
        return Ok(CountsEstimate {
            value: threshold - integral,
            std_error: 0.0,
        });
    }

    if replications == 0 {
        return Err(Error::InvalidParameter("need at least one path".into()));
    }
    // One path of partial sums S_1 < S_2 < … gives, for every u ∈ [0, span],
    // the count m̃ = |{m : S_m < u}| + 1, so the inner integral over y is
    // exact per path: ∫_0^span β^{m̃(u)} du pieces out over the bands
    // (S_{m−1}, S_m].
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut per_path = Vec::with_capacity(replications);
    for _ in 0..replications {
        let mut integral = 0.0;
        let mut prev = 0.0_f64;
        let mut power = beta;
        loop {
            let next = prev + dist.sample(&mut rng);
            integral += power * (next.min(span) - prev);
            if next >= span {
                break;
            }
            prev = next;
            power *= beta;
        }
        per_path.push(integral);
    }
    let mean = per_path.iter().sum::<f64>() / replications as f64;
    let var = per_path
        .iter()
        .map(|v| (v - mean) * (v - mean))
        .sum::<f64>()
        / (replications as f64 - 1.0).max(1.0);
    Ok(CountsEstimate {
        value: threshold - mean,
        std_error: (var / replications as f64).sqrt(),
    })
}
