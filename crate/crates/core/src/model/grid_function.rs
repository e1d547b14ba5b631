use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Piecewise-linear function on a strictly increasing node set. Jumps are
/// represented by one-cell-wide linear segments.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridFunction1D {
    nodes: Vec<f64>,
    values: Vec<f64>,
}

/// Uniform nodes on `[a, b]` with both endpoints hit exactly.
pub fn uniform_nodes(a: f64, b: f64, n: usize) -> Vec<f64> {
    assert!(n >= 2);
    let last = n - 1;
    (0..n)
        .map(|i| {
            if i == last {
                b
            } else {
                a + (b - a) * (i as f64) / (last as f64)
            }
        })
        .collect()
}

impl GridFunction1D {
    pub fn new(nodes: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if nodes.len() < 2 {
            return Err(Error::Invalid("a grid function needs at least 2 nodes".into()));
        }
        if nodes.len() != values.len() {
            return Err(Error::Invalid(format!(
                "{} nodes but {} values",
                nodes.len(),
                values.len()
            )));
        }
        if nodes.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::Invalid("grid nodes must be strictly increasing".into()));
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::Invalid(format!("non-finite value at node {i}")));
        }
        Ok(GridFunction1D { nodes, values })
    }

    /// Samples `g` on `n` uniform nodes of `[a, b]`.
    pub fn from_fn(a: f64, b: f64, n: usize, g: impl Fn(f64) -> f64) -> Result<Self> {
        if n < 2 {
            return Err(Error::Invalid("a grid function needs at least 2 nodes".into()));
        }
        let nodes = uniform_nodes(a, b, n);
        let values = nodes.iter().map(|&x| g(x)).collect();
        Self::new(nodes, values)
    }

    pub fn constant(a: f64, b: f64, c: f64) -> Self {
        GridFunction1D {
            nodes: vec![a, b],
            values: vec![c, c],
        }
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn first(&self) -> f64 {
        self.values[0]
    }

    pub fn last(&self) -> f64 {
        self.values[self.values.len() - 1]
    }

    /// Total variation of the piecewise-linear interpolant.
    pub fn tv(&self) -> f64 {
        tv(&self.values)
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().fold(0.0_f64, |m, v| m.max(v.abs()))
    }

    /// Exact L1 norm of the piecewise-linear interpolant.
    pub fn l1_norm(&self) -> f64 {
        self.nodes
            .windows(2)
            .zip(self.values.windows(2))
            .map(|(x, v)| segment_abs_integral(x[1] - x[0], v[0], v[1]))
            .sum()
    }

    /// `‖∇u‖_{L1}`, equal to the total variation for piecewise-linear data.
    pub fn grad_l1(&self) -> f64 {
        self.tv()
    }

    /// Total mass of the distributional second derivative: the sum of slope jumps.
    pub fn laplacian_l1(&self) -> f64 {
        let slopes: Vec<f64> = self
            .nodes
            .windows(2)
            .zip(self.values.windows(2))
            .map(|(x, v)| (v[1] - v[0]) / (x[1] - x[0]))
            .collect();
        slopes.windows(2).map(|s| (s[1] - s[0]).abs()).sum()
    }

    /// Linear interpolation, constant extension outside the node range.
    pub fn eval(&self, x: f64) -> f64 {
        let n = self.nodes.len();
        if x <= self.nodes[0] {
            return self.values[0];
        }
        if x >= self.nodes[n - 1] {
            return self.values[n - 1];
        }
        let j = self.nodes.partition_point(|&xi| xi <= x);
        let (x0, x1) = (self.nodes[j - 1], self.nodes[j]);
        let (v0, v1) = (self.values[j - 1], self.values[j]);
        if x == x0 {
            return v0;
        }
        let th = (x - x0) / (x1 - x0);
        v0 + (v1 - v0) * th
    }

    /// Values of the interpolant at `nodes`.
    pub fn sample(&self, nodes: &[f64]) -> Vec<f64> {
        nodes.iter().map(|&x| self.eval(x)).collect()
    }

    pub fn resample(&self, nodes: &[f64]) -> Result<Self> {
        Self::new(nodes.to_vec(), self.sample(nodes))
    }

    /// `‖self − other‖_{L1}` on the union of both node sets.
    pub fn l1_distance(&self, other: &GridFunction1D) -> f64 {
        let mut xs: Vec<f64> = self.nodes.iter().chain(other.nodes.iter()).copied().collect();
        xs.sort_by(|a, b| a.partial_cmp(b).unwrap());
        xs.dedup();
        let d: Vec<f64> = xs.iter().map(|&x| self.eval(x) - other.eval(x)).collect();
        xs.windows(2)
            .zip(d.windows(2))
            .map(|(x, v)| segment_abs_integral(x[1] - x[0], v[0], v[1]))
            .sum()
    }
}

/// Sum of absolute increments of a sequence.
pub fn tv(values: &[f64]) -> f64 {
    values.windows(2).map(|w| (w[1] - w[0]).abs()).sum()
}

/// `∫_0^h |linear from v0 to v1|`.
pub fn segment_abs_integral(h: f64, v0: f64, v1: f64) -> f64 {
    if v0 * v1 >= 0.0 {
        0.5 * h * (v0.abs() + v1.abs())
    } else {
        let (p, q) = (v0.abs(), v1.abs());
        0.5 * h * (p * p + q * q) / (p + q)
    }
}
