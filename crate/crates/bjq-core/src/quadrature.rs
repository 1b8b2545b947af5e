//! Quadrature rules on [0, 1] for the averaging variable of the Born-Jordan
//! construction.

use crate::error::{Error, Result};

/// Nodes/weights pair on [0, 1]; weights are positive and sum to one.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl QuadratureRule {
    pub fn new(nodes: Vec<f64>, weights: Vec<f64>) -> Result<Self> {
        if nodes.len() != weights.len() || nodes.is_empty() {
            return Err(Error::InvalidParameter(
                "quadrature nodes and weights must be nonempty and of equal length".into(),
            ));
        }
        if nodes.iter().any(|&t| !(0.0..=1.0).contains(&t)) {
            return Err(Error::InvalidParameter("quadrature nodes must lie in [0, 1]".into()));
        }
        if weights.iter().any(|&w| !(w.is_finite() && w > 0.0)) {
            return Err(Error::InvalidParameter("quadrature weights must be positive".into()));
        }
        let sum: f64 = weights.iter().sum();
        if (sum - 1.0).abs() > 1e-14 {
            return Err(Error::InvalidParameter(format!(
                "quadrature weights sum to {sum}, expected 1 within 1e-14"
            )));
        }
        Ok(QuadratureRule { nodes, weights })
    }

    /// Gauss-Legendre rule with `n` nodes mapped to [0, 1]; exact for
    /// polynomials of degree 2n - 1.
    pub fn gauss_legendre(n: usize) -> Result<Self> {
        if n == 0 || n > 1024 {
            return Err(Error::InvalidParameter(format!("node count {n} out of range 1..=1024")));
        }
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        // Newton iteration on P_n over [-1, 1], symmetric pairs.
        for i in 0..(n + 1) / 2 {
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre_and_derivative(n, x);
                dp = d;
                let step = p / d;
                x -= step;
                if step.abs() < 1e-15 {
                    break;
                }
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        // map [-1,1] -> [0,1]
        for t in nodes.iter_mut() {
            *t = 0.5 * (*t + 1.0);
        }
        let wsum: f64 = weights.iter().sum();
        for w in weights.iter_mut() {
            *w /= wsum; // exact renormalization of the 1/2 Jacobian
        }
        QuadratureRule::new(nodes, weights)
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn iter(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.nodes.iter().copied().zip(self.weights.iter().copied())
    }

    /// Weighted average of f over the rule.
    pub fn average(&self, mut f: impl FnMut(f64) -> f64) -> f64 {
        self.iter().map(|(t, w)| w * f(t)).sum()
    }
}

fn legendre_and_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}
