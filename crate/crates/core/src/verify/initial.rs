use serde::{Deserialize, Serialize};

use super::report::{LevelRow, Record, Verdict, Witness};
use crate::model::GridFunction1D;
use crate::viscous::Field;

pub const INITIAL_LEVELS: usize = 10;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InitialTraceReport {
    pub check: String,
    /// `‖u(t_k) - u_o‖_{L1}` for the first levels.
    pub distances: Vec<LevelRow>,
    pub lipschitz: f64,
    pub floor: f64,
    pub verdict: Verdict,
}

/// Distance to the initial datum over the first [`INITIAL_LEVELS`] levels.
/// Passes when every level stays within `d_0 + lipschitz t_k + floor`, with
/// a floor of `dt (1 + ‖u‖∞) (b - a)`.
pub fn check_initial_trace(u: &Field, u_o: &GridFunction1D, lipschitz: f64) -> InitialTraceReport {
    let g = u.grid;
    let target = u_o.sample(&g.nodes());
    let n = INITIAL_LEVELS.min(u.n_rows());
    let distances: Vec<LevelRow> = (0..n)
        .map(|k| LevelRow {
            t: g.t(k),
            value: u.row_l1_distance(k, &target),
        })
        .collect();
    let floor = g.dt * (1.0 + u.sup_norm()) * g.length();
    let d0 = distances[0].value;
    let ok = distances.iter().all(|r| r.value <= d0 + lipschitz * r.t + floor);
    InitialTraceReport {
        check: "initial_trace".into(),
        distances,
        lipschitz,
        floor,
        verdict: Verdict::from_bool(ok),
    }
}

impl InitialTraceReport {
    pub fn passed(&self) -> bool {
        self.verdict.passed()
    }

    pub fn record(&self, instance_hash: &str) -> Record {
        let d0 = self.distances[0].value;
        let worst = self
            .distances
            .iter()
            .map(|r| Witness {
                t: Some(r.t),
                value: d0 + self.lipschitz * r.t + self.floor - r.value,
                ..Witness::default()
            })
            .fold(None::<Witness>, |acc, w| match acc {
                Some(a) if a.value <= w.value => Some(a),
                _ => Some(w),
            })
            .expect("at least one level");
        Record {
            check: self.check.clone(),
            instance_hash: instance_hash.to_string(),
            min_residual: worst.value,
            tolerance: self.floor,
            verdict: self.verdict,
            witnesses: vec![worst],
            warnings: Vec::new(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::viscous::Grid1D;

    #[test]
    fn exact_start_is_zero() {
        let g = Grid1D::new(0.0, 1.0, 51, 20, 0.01).unwrap();
        let u = Field::from_fn(g, 0.0, |t, x| x * (1.0 - x) + t);
        let uo = GridFunction1D::from_fn(0.0, 1.0, 51, |x| x * (1.0 - x)).unwrap();
        let rep = check_initial_trace(&u, &uo, 1.0);
        assert_eq!(rep.distances[0].value, 0.0);
        assert_eq!(rep.distances.len(), INITIAL_LEVELS);
        assert!(rep.passed());
        // drifting faster than the Lipschitz constant allows
        let rep = check_initial_trace(&u.map(|v| 50.0 * v), &uo.resample(&g.nodes()).unwrap(), 1.0);
        assert!(!rep.passed());
    }
}
