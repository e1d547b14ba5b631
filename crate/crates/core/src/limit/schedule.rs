use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::viscous::{Field, Grid1D};

pub const DEFAULT_LEVELS: usize = 6;
/// `ε_0` as a fraction of the domain length.
pub const DEFAULT_EPS0_FRACTION: f64 = 0.02;
/// Smallest admissible `ε` in units of `dx`.
pub const EPS_FLOOR_DX: f64 = 0.1;
const ROUNDOFF: f64 = 1e-12;

/// Strictly decreasing viscosities.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EpsSchedule {
    eps_values: Vec<f64>,
}

impl EpsSchedule {
    pub fn new(eps_values: Vec<f64>) -> Result<Self> {
        if eps_values.is_empty() {
            return Err(Error::Invalid("epsilon schedule is empty".into()));
        }
        if eps_values.iter().any(|e| !(e.is_finite() && *e > 0.0)) {
            return Err(Error::Invalid(format!("epsilon values must be positive: {eps_values:?}")));
        }
        if eps_values.windows(2).any(|w| w[1] >= w[0]) {
            return Err(Error::Invalid(format!("epsilon values must strictly decrease: {eps_values:?}")));
        }
        Ok(EpsSchedule { eps_values })
    }

    /// `ε_m = ε_0 2^{−m}`, `m < levels`.
    pub fn geometric(eps0: f64, levels: usize) -> Result<Self> {
        Self::new((0..levels).map(|m| eps0 * 0.5f64.powi(m as i32)).collect())
    }

    /// `ε_0 = 0.02 (b − a)` halved over six levels, shifted up on coarse
    /// grids so the smallest level sits on the `0.1·dx` floor.
    pub fn default_for(grid: &Grid1D) -> Result<Self> {
        let span = (1u64 << (DEFAULT_LEVELS - 1)) as f64;
        let eps0 = (DEFAULT_EPS0_FRACTION * grid.length()).max(EPS_FLOOR_DX * grid.dx() * span);
        let s = Self::geometric(eps0, DEFAULT_LEVELS)?;
        s.check_resolvable(grid)?;
        Ok(s)
    }

    /// Fails when the smallest `ε` is below `0.1·dx`.
    pub fn check_resolvable(&self, grid: &Grid1D) -> Result<()> {
        let floor = EPS_FLOOR_DX * grid.dx();
        if self.smallest() < floor {
            return Err(Error::Resolution(format!(
                "smallest epsilon {} is below the floor 0.1·dx = {floor}",
                self.smallest()
            )));
        }
        Ok(())
    }

    pub fn values(&self) -> &[f64] {
        &self.eps_values
    }

    pub fn smallest(&self) -> f64 {
        *self.eps_values.last().expect("non-empty")
    }

    pub fn len(&self) -> usize {
        self.eps_values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eps_values.is_empty()
    }
}

/// Pairwise distances between solutions at consecutive viscosities.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CauchyReport {
    pub eps: Vec<f64>,
    /// `d_m = ‖u_{ε_m} − u_{ε_{m+1}}‖_{L1(I×Ω)}`
    pub distances: Vec<f64>,
    pub ratios: Vec<f64>,
    /// Distances strictly decrease.
    pub monotone: bool,
    /// The last ratio exceeds 1.
    pub non_contracting_tail: bool,
    /// `d_last / d_first`, 0 when `d_first = 0`.
    pub last_over_first: f64,
}

impl CauchyReport {
    pub fn from_fields(eps: &[f64], fields: &[Field]) -> Result<Self> {
        let distances = fields
            .windows(2)
            .map(|w| w[0].l1_distance(&w[1]))
            .collect::<Result<Vec<f64>>>()?;
        if distances.iter().any(|d| !d.is_finite()) {
            return Err(Error::Invalid(format!("non-finite Cauchy distance in {distances:?}")));
        }
        // distances at round-off level count as zero
        let scale = fields.iter().fold(0.0_f64, |m, f| m.max(f.sup_norm()));
        let g = fields.first().map(|f| f.grid);
        let floor = g.map_or(0.0, |g| ROUNDOFF * (1.0 + scale) * g.length() * g.horizon());
        let distances: Vec<f64> = distances.into_iter().map(|d| if d <= floor { 0.0 } else { d }).collect();
        let ratios: Vec<f64> = distances
            .windows(2)
            .map(|w| if w[0] > 0.0 { w[1] / w[0] } else { 0.0 })
            .collect();
        let monotone = distances.windows(2).all(|w| w[1] < w[0] || (w[0] == 0.0 && w[1] == 0.0));
        let non_contracting_tail = ratios.last().is_some_and(|r| *r > 1.0);
        let last_over_first = match (distances.first(), distances.last()) {
            (Some(&f), Some(&l)) if f > 0.0 => l / f,
            _ => 0.0,
        };
        Ok(CauchyReport {
            eps: eps.to_vec(),
            distances,
            ratios,
            monotone,
            non_contracting_tail,
            last_over_first,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn schedule_validation() {
        assert!(EpsSchedule::new(vec![]).is_err());
        assert!(EpsSchedule::new(vec![0.1, 0.1]).is_err());
        assert!(EpsSchedule::new(vec![0.1, -0.1]).is_err());
        let s = EpsSchedule::geometric(0.08, 6).unwrap();
        assert_eq!(s.len(), 6);
        assert_eq!(s.smallest(), 0.0025);
    }

    #[test]
    fn default_respects_floor() {
        let g = Grid1D::new(0.0, 1.0, 401, 10, 0.1).unwrap();
        let s = EpsSchedule::default_for(&g).unwrap();
        assert!(s.smallest() >= 0.1 * g.dx());
        assert_eq!(s.values()[0], 0.02);
        let coarse = Grid1D::new(0.0, 1.0, 17, 10, 0.1).unwrap();
        let s = EpsSchedule::default_for(&coarse).unwrap();
        assert_eq!(s.smallest(), 0.1 * coarse.dx());
        assert!(matches!(
            EpsSchedule::new(vec![1e-4]).unwrap().check_resolvable(&coarse),
            Err(Error::Resolution(_))
        ));
    }
}
