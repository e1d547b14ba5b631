use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{uniform_nodes, Domain1D};

/// Uniform space-time grid: `nx` nodes on `[a, b]`, `nt` steps of `dt`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Grid1D {
    pub a: f64,
    pub b: f64,
    pub nx: usize,
    pub nt: usize,
    pub dt: f64,
}

impl Grid1D {
    pub fn new(a: f64, b: f64, nx: usize, nt: usize, dt: f64) -> Result<Self> {
        if nx < 2 || nt < 1 || !(dt > 0.0 && dt.is_finite()) || !(b > a) {
            return Err(Error::Invalid(format!(
                "bad grid: nx={nx}, nt={nt}, dt={dt} on [{a}, {b}]"
            )));
        }
        Ok(Grid1D { a, b, nx, nt, dt })
    }

    /// `nt` equal steps covering `[0, horizon]`.
    pub fn uniform(domain: &Domain1D, horizon: f64, nx: usize, nt: usize) -> Result<Self> {
        Self::new(domain.a, domain.b, nx, nt, horizon / nt.max(1) as f64)
    }

    /// The coarsest uniform time grid with step at most `dt_max`.
    pub fn with_max_dt(domain: &Domain1D, horizon: f64, nx: usize, dt_max: f64) -> Result<Self> {
        if !(dt_max > 0.0) {
            return Err(Error::Invalid(format!("time step bound must be positive, got {dt_max}")));
        }
        let nt = ((horizon / dt_max) * (1.0 - 1e-12)).ceil().max(1.0) as usize;
        Self::uniform(domain, horizon, nx, nt)
    }

    #[inline]
    pub fn dx(&self) -> f64 {
        (self.b - self.a) / (self.nx - 1) as f64
    }

    pub fn length(&self) -> f64 {
        self.b - self.a
    }

    pub fn horizon(&self) -> f64 {
        self.nt as f64 * self.dt
    }

    #[inline]
    pub fn x(&self, i: usize) -> f64 {
        if i == self.nx - 1 {
            self.b
        } else {
            self.a + self.length() * i as f64 / (self.nx - 1) as f64
        }
    }

    /// Midpoint between nodes `i` and `i + 1`.
    #[inline]
    pub fn x_half(&self, i: usize) -> f64 {
        0.5 * (self.x(i) + self.x(i + 1))
    }

    #[inline]
    pub fn t(&self, k: usize) -> f64 {
        k as f64 * self.dt
    }

    pub fn nodes(&self) -> Vec<f64> {
        uniform_nodes(self.a, self.b, self.nx)
    }

    pub fn times(&self) -> Vec<f64> {
        (0..=self.nt).map(|k| self.t(k)).collect()
    }

    /// Trapezoid weights of the node grid.
    pub fn weights(&self) -> Vec<f64> {
        let h = self.dx();
        (0..self.nx)
            .map(|i| if i == 0 || i == self.nx - 1 { 0.5 * h } else { h })
            .collect()
    }

    pub fn same_as(&self, other: &Grid1D) -> bool {
        self.nx == other.nx
            && self.nt == other.nt
            && (self.a - other.a).abs() <= 1e-12 * (1.0 + self.a.abs())
            && (self.b - other.b).abs() <= 1e-12 * (1.0 + self.b.abs())
            && (self.dt - other.dt).abs() <= 1e-12 * self.dt
    }
}
