use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::grid::Grid1D;
use crate::error::{Error, Result};
use crate::model::{segment_abs_integral, tv, GridFunction1D};

/// Space-time grid function: `nt + 1` rows of `nx` node values.
#[derive(Clone, Debug, PartialEq)]
pub struct Field {
    pub grid: Grid1D,
    /// Viscosity used to produce the field; 0 for hyperbolic solvers.
    pub epsilon: f64,
    data: Vec<f64>,
}

/// Sidecar record written next to a field CSV.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FieldMeta {
    pub epsilon: f64,
    pub grid: Grid1D,
    pub problem_hash: String,
    pub label: String,
}

impl Field {
    pub fn zeros(grid: Grid1D, epsilon: f64) -> Self {
        Field {
            grid,
            epsilon,
            data: vec![0.0; (grid.nt + 1) * grid.nx],
        }
    }

    pub fn from_data(grid: Grid1D, epsilon: f64, data: Vec<f64>) -> Result<Self> {
        if data.len() != (grid.nt + 1) * grid.nx {
            return Err(Error::GridMismatch(format!(
                "{} values for a {}x{} grid",
                data.len(),
                grid.nt + 1,
                grid.nx
            )));
        }
        Ok(Field { grid, epsilon, data })
    }

    pub fn from_fn(grid: Grid1D, epsilon: f64, g: impl Fn(f64, f64) -> f64) -> Self {
        let mut f = Field::zeros(grid, epsilon);
        for k in 0..=grid.nt {
            let t = grid.t(k);
            for (i, v) in f.row_mut(k).iter_mut().enumerate() {
                *v = g(t, grid.x(i));
            }
        }
        f
    }

    #[inline]
    pub fn n_rows(&self) -> usize {
        self.grid.nt + 1
    }

    #[inline]
    pub fn row(&self, k: usize) -> &[f64] {
        let nx = self.grid.nx;
        &self.data[k * nx..(k + 1) * nx]
    }

    #[inline]
    pub fn row_mut(&mut self, k: usize) -> &mut [f64] {
        let nx = self.grid.nx;
        &mut self.data[k * nx..(k + 1) * nx]
    }

    #[inline]
    pub fn at(&self, k: usize, i: usize) -> f64 {
        self.data[k * self.grid.nx + i]
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.data.chunks(self.grid.nx)
    }

    pub fn row_function(&self, k: usize) -> GridFunction1D {
        GridFunction1D::new(self.grid.nodes(), self.row(k).to_vec()).expect("grid rows are valid")
    }

    pub fn sup_norm(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn row_sup(&self, k: usize) -> f64 {
        self.row(k).iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn row_tv(&self, k: usize) -> f64 {
        tv(self.row(k))
    }

    /// Exact `L1(Ω)` norm of a piecewise-linear row difference.
    pub fn row_l1_distance(&self, k: usize, other: &[f64]) -> f64 {
        row_l1(self.grid.dx(), self.row(k), other)
    }

    pub fn check_same_grid(&self, other: &Field) -> Result<()> {
        if !self.grid.same_as(&other.grid) {
            return Err(Error::GridMismatch(format!("{:?} vs {:?}", self.grid, other.grid)));
        }
        Ok(())
    }

    /// `‖u − v‖_{L1(I × Ω)}`: exact in space, trapezoid in time.
    pub fn l1_distance(&self, other: &Field) -> Result<f64> {
        self.check_same_grid(other)?;
        let per_row: Vec<f64> = (0..self.n_rows())
            .map(|k| self.row_l1_distance(k, other.row(k)))
            .collect();
        Ok(trapezoid(&per_row, self.grid.dt))
    }

    /// `‖u‖_{L1(I × Ω)}`.
    pub fn l1_norm(&self) -> f64 {
        let zero = vec![0.0; self.grid.nx];
        let per_row: Vec<f64> = (0..self.n_rows()).map(|k| self.row_l1_distance(k, &zero)).collect();
        trapezoid(&per_row, self.grid.dt)
    }

    /// Pointwise combination of two fields on the same grid.
    pub fn zip_with(&self, other: &Field, g: impl Fn(f64, f64) -> f64) -> Result<Field> {
        self.check_same_grid(other)?;
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| g(a, b)).collect();
        Field::from_data(self.grid, self.epsilon, data)
    }

    pub fn map(&self, g: impl Fn(f64) -> f64) -> Field {
        Field {
            grid: self.grid,
            epsilon: self.epsilon,
            data: self.data.iter().map(|&v| g(v)).collect(),
        }
    }

    /// Dense CSV: header `t,x_0,…`, then one row per time level.
    pub fn to_csv(&self) -> String {
        let mut s = String::with_capacity(self.data.len() * 24);
        s.push('t');
        for i in 0..self.grid.nx {
            let _ = write!(s, ",{:.16e}", self.grid.x(i));
        }
        s.push('\n');
        for k in 0..self.n_rows() {
            let _ = write!(s, "{:.16e}", self.grid.t(k));
            for v in self.row(k) {
                let _ = write!(s, ",{v:.16e}");
            }
            s.push('\n');
        }
        s
    }

    pub fn from_csv(text: &str, epsilon: f64) -> Result<Field> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header = lines.next().ok_or_else(|| Error::Parse("empty field CSV".into()))?;
        let mut cols = header.split(',');
        if cols.next().map(str::trim) != Some("t") {
            return Err(Error::Parse("field CSV header must start with `t`".into()));
        }
        let xs = cols.map(parse_f64).collect::<Result<Vec<f64>>>()?;
        let mut times = Vec::new();
        let mut data = Vec::new();
        for (n, line) in lines.enumerate() {
            let vals = line.split(',').map(parse_f64).collect::<Result<Vec<f64>>>()?;
            if vals.len() != xs.len() + 1 {
                return Err(Error::Parse(format!(
                    "row {} has {} columns, expected {}",
                    n + 1,
                    vals.len(),
                    xs.len() + 1
                )));
            }
            times.push(vals[0]);
            data.extend_from_slice(&vals[1..]);
        }
        if xs.len() < 2 || times.len() < 2 {
            return Err(Error::Parse("field CSV needs at least two nodes and two time levels".into()));
        }
        let nt = times.len() - 1;
        let grid = Grid1D::new(xs[0], xs[xs.len() - 1], xs.len(), nt, times[nt] / nt as f64)?;
        for (i, &x) in xs.iter().enumerate() {
            if (x - grid.x(i)).abs() > 1e-9 * (1.0 + grid.length()) {
                return Err(Error::Parse(format!("node {i} at {x} is not on a uniform grid")));
            }
        }
        Field::from_data(grid, epsilon, data)
    }

    pub fn write_csv(&self, path: &Path) -> std::io::Result<()> {
        fs::write(path, self.to_csv())
    }
}

fn parse_f64(s: &str) -> Result<f64> {
    s.trim()
        .parse::<f64>()
        .map_err(|e| Error::Parse(format!("`{s}`: {e}")))
}

/// Exact `∫|u − v|` of piecewise-linear rows on a uniform grid.
pub fn row_l1(dx: f64, u: &[f64], v: &[f64]) -> f64 {
    let d: Vec<f64> = u.iter().zip(v).map(|(a, b)| a - b).collect();
    d.windows(2).map(|w| segment_abs_integral(dx, w[0], w[1])).sum()
}

/// Composite trapezoid rule on equispaced samples.
pub fn trapezoid(vals: &[f64], h: f64) -> f64 {
    match vals.len() {
        0 => 0.0,
        1 => 0.0,
        n => h * (0.5 * (vals[0] + vals[n - 1]) + vals[1..n - 1].iter().sum::<f64>()),
    }
}
