use std::sync::Arc;

use crate::model::PayoffSpec;
use crate::{Error, Result};

/// How a [`GridFn`] extends beyond its last node.
///
/// Expectation operators reach arbitrarily far above the grid, so every grid
/// function carries an explicit extension rule; nothing extrapolates silently.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TailRule {
    /// `g(x) = b(x)` for `x > x_K`. Exact whenever the caller has certified
    /// that the no-effort region starts at or before `x_K`.
    EqualsB,
    /// `g(x) = g(x_K) + b(x) − b(x_K)`: the gap to `b` stays frozen at its
    /// last-node value. Exact for the upper seed `w̄ = b + const` and a safe
    /// over-estimate whenever `g − b` is decreasing.
    BSlope,
    /// `g(x) = 0` for `x > x_K`. For effort schedules, which vanish beyond
    /// the stopping cutoff.
    Zero,
}

/// Strictly increasing stock grid shared by the value functions of one solve.
#[derive(Debug, Clone)]
pub struct StockGrid {
    nodes: Vec<f64>,
    /// Uniform spacing when the grid is (numerically) equispaced.
    uniform_step: Option<f64>,
}

/// Configuration for building a stock grid on `[0, x_max]`.
#[derive(Debug, Clone)]
pub struct GridConfig {
    pub x_max: f64,
    pub step: f64,
    /// Extra nodes inserted exactly (analytic cutoffs, discontinuities).
    pub insert: Vec<f64>,
}

impl GridConfig {
    pub fn new(x_max: f64, step: f64) -> Self {
        Self {
            x_max,
            step,
            insert: Vec::new(),
        }
    }

    pub fn with_inserted(mut self, points: &[f64]) -> Self {
        self.insert.extend_from_slice(points);
        self
    }

    pub fn build(&self) -> Result<Arc<StockGrid>> {
        if !(self.x_max > 0.0) || !(self.step > 0.0) || self.step >= self.x_max {
            return Err(Error::InvalidParameter(format!(
                "grid needs 0 < step < x_max, got step = {}, x_max = {}",
                self.step, self.x_max
            )));
        }
        let count = (self.x_max / self.step).round() as usize;
        let mut nodes: Vec<f64> = (0..=count)
            .map(|i| (i as f64 * self.step).min(self.x_max))
            .collect();
        let mut is_uniform = true;
        for &p in &self.insert {
            if p <= 0.0 || p >= self.x_max {
                continue;
            }
            match nodes.binary_search_by(|n| n.total_cmp(&p)) {
                Ok(_) => {}
                Err(pos) => {
                    // Skip inserts that would create a near-degenerate cell
                    // next to an existing node.
                    let near = (nodes[pos] - p).abs() < 1e-14 * self.x_max
                        || (p - nodes[pos - 1]).abs() < 1e-14 * self.x_max;
                    if !near {
                        nodes.insert(pos, p);
                        is_uniform = false;
                    }
                }
            }
        }
        Ok(Arc::new(StockGrid {
            uniform_step: if is_uniform { Some(self.step) } else { None },
            nodes,
        }))
    }
}

impl StockGrid {
    pub fn from_nodes(nodes: Vec<f64>) -> Result<Arc<Self>> {
        if nodes.len() < 2 {
            return Err(Error::InvalidParameter("grid needs at least 2 nodes".into()));
        }
        if !nodes.windows(2).all(|w| w[1] > w[0]) {
            return Err(Error::InvalidParameter(
                "grid nodes must be strictly increasing".into(),
            ));
        }
        Ok(Arc::new(Self {
            nodes,
            uniform_step: None,
        }))
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn first(&self) -> f64 {
        self.nodes[0]
    }

    pub fn last(&self) -> f64 {
        *self.nodes.last().unwrap()
    }

    /// Index of the cell `[x_i, x_{i+1})` containing `x`; `x` must lie within
    /// the grid range.
    fn locate(&self, x: f64) -> usize {
        if let Some(h) = self.uniform_step {
            let i = ((x - self.nodes[0]) / h) as usize;
            return i.min(self.nodes.len() - 2);
        }
        match self.nodes.binary_search_by(|n| n.total_cmp(&x)) {
            Ok(i) => i.min(self.nodes.len() - 2),
            Err(i) => i.saturating_sub(1).min(self.nodes.len() - 2),
        }
    }
}

/// A real function on a stock grid: piecewise linear between nodes, explicit
/// tail rule above the last node. Immutable once built; shared freely across
/// workers.
#[derive(Debug, Clone)]
pub struct GridFn {
    grid: Arc<StockGrid>,
    values: Vec<f64>,
    tail: TailRule,
}

impl GridFn {
    pub fn new(grid: Arc<StockGrid>, values: Vec<f64>, tail: TailRule) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::InvalidParameter(format!(
                "value count {} does not match grid size {}",
                values.len(),
                grid.len()
            )));
        }
        if !values.iter().all(|v| v.is_finite()) {
            return Err(Error::InvalidParameter("grid values must be finite".into()));
        }
        Ok(Self { grid, values, tail })
    }

    pub fn from_fn(grid: Arc<StockGrid>, tail: TailRule, f: impl Fn(f64) -> f64) -> Result<Self> {
        let values = grid.nodes().iter().map(|&x| f(x)).collect();
        Self::new(grid, values, tail)
    }

    pub fn grid(&self) -> &Arc<StockGrid> {
        &self.grid
    }

    pub fn nodes(&self) -> &[f64] {
        self.grid.nodes()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn tail(&self) -> TailRule {
        self.tail
    }

    /// New values, same grid and tail rule.
    pub fn with_values(&self, values: Vec<f64>) -> Result<Self> {
        Self::new(self.grid.clone(), values, self.tail)
    }

    /// Evaluates by linear interpolation inside the grid and by the tail rule
    /// above it. `payoff` supplies `b` for the tail rules; stocks below the
    /// first node clamp to it (the stock never moves left in this model).
    pub fn eval(&self, x: f64, payoff: &PayoffSpec) -> f64 {
        let nodes = self.grid.nodes();
        if x <= nodes[0] {
            return self.values[0];
        }
        let last = self.grid.last();
        if x > last {
            return match self.tail {
                TailRule::EqualsB => payoff.b(x),
                TailRule::BSlope => self.values[self.values.len() - 1] + payoff.b(x) - payoff.b(last),
                TailRule::Zero => 0.0,
            };
        }
        let i = self.grid.locate(x);
        let (x0, x1) = (nodes[i], nodes[i + 1]);
        let t = (x - x0) / (x1 - x0);
        self.values[i] * (1.0 - t) + self.values[i + 1] * t
    }

    /// Closure view for the expectation operators.
    pub fn as_closure<'a>(&'a self, payoff: &'a PayoffSpec) -> impl Fn(f64) -> f64 + 'a {
        move |x| self.eval(x, payoff)
    }

    /// Sup-norm distance on the shared grid.
    pub fn sup_distance(&self, other: &GridFn) -> f64 {
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    /// Writes the `x,value` CSV representation.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("x,value\n");
        for (x, v) in self.grid.nodes().iter().zip(&self.values) {
            out.push_str(&format!("{x},{v}\n"));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn grid() -> Arc<StockGrid> {
        GridConfig::new(2.0, 0.5).build().unwrap()
    }

    #[test]
    fn interpolates_linearly() {
        let f = GridFn::from_fn(grid(), TailRule::EqualsB, |x| x * x).unwrap();
        let p = PayoffSpec::LinearMultiplicative;
        assert_abs_diff_eq!(f.eval(0.5, &p), 0.25);
        // midpoint of the cell [0.5, 1.0]: average of 0.25 and 1.0
        assert_abs_diff_eq!(f.eval(0.75, &p), 0.625);
    }

    #[test]
    fn tail_rules() {
        let p = PayoffSpec::LinearMultiplicative;
        let eq_b = GridFn::from_fn(grid(), TailRule::EqualsB, |x| x + 1.0).unwrap();
        assert_abs_diff_eq!(eq_b.eval(3.0, &p), 3.0);
        let slope = GridFn::from_fn(grid(), TailRule::BSlope, |x| x + 1.0).unwrap();
        assert_abs_diff_eq!(slope.eval(3.0, &p), 4.0);
    }

    #[test]
    fn inserted_nodes_are_exact() {
        let grid = GridConfig::new(1.0, 0.1)
            .with_inserted(&[0.775])
            .build()
            .unwrap();
        assert!(grid.nodes().contains(&0.775));
        assert!(grid.nodes().windows(2).all(|w| w[1] > w[0]));
    }

    #[test]
    fn rejects_mismatched_values() {
        assert!(GridFn::new(grid(), vec![0.0; 3], TailRule::EqualsB).is_err());
    }
}
