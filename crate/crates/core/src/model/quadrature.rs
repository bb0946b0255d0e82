use nalgebra::DMatrix;

use crate::{Error, Result};

/// Gauss–Laguerre quadrature rule for `∫₀^∞ f(u) e^{−u} du ≈ Σ wᵢ f(uᵢ)`.
///
/// Nodes and weights come from the Golub–Welsch algorithm: the rule of order
/// `n` is the eigendecomposition of the symmetric tridiagonal Jacobi matrix
/// with diagonal `2i+1` and off-diagonal `i` (weight function `e^{−u}`,
/// `α = 0`). Weights are the squared first eigenvector components, which is
/// numerically stable even at high order.
#[derive(Debug, Clone)]
pub struct GaussLaguerre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLaguerre {
    pub fn new(order: usize) -> Result<Self> {
        if order < 2 {
            return Err(Error::InvalidParameter(
                "quadrature order must be at least 2".into(),
            ));
        }
        let mut jacobi = DMatrix::<f64>::zeros(order, order);
        for i in 0..order {
            jacobi[(i, i)] = (2 * i + 1) as f64;
            if i + 1 < order {
                let off = (i + 1) as f64;
                jacobi[(i, i + 1)] = off;
                jacobi[(i + 1, i)] = off;
            }
        }
        let eigen = jacobi.symmetric_eigen();
        let mut pairs: Vec<(f64, f64)> = eigen
            .eigenvalues
            .iter()
            .enumerate()
            .map(|(j, &node)| {
                let q0 = eigen.eigenvectors[(0, j)];
                (node, q0 * q0)
            })
            .collect();
        pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
        Ok(Self {
            nodes: pairs.iter().map(|p| p.0).collect(),
            weights: pairs.iter().map(|p| p.1).collect(),
        })
    }

    pub fn order(&self) -> usize {
        self.nodes.len()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// `∫₀^∞ f(u) e^{−u} du`.
    pub fn integrate(&self, mut f: impl FnMut(f64) -> f64) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&u, &w)| w * f(u))
            .sum()
    }

    /// As [`integrate`](Self::integrate), but fails on a non-finite integrand
    /// value and reports the offending node.
    pub fn try_integrate(&self, mut f: impl FnMut(f64) -> f64, what: &str) -> Result<f64> {
        let mut acc = 0.0;
        for (&u, &w) in self.nodes.iter().zip(&self.weights) {
            let fu = f(u);
            if !fu.is_finite() {
                return Err(Error::NonFinite {
                    what: what.into(),
                    at: u,
                });
            }
            acc += w * fu;
        }
        Ok(acc)
    }
}
