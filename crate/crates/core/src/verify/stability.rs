use serde::{Deserialize, Serialize};

use super::report::{Record, Verdict, Witness};
use crate::error::{Error, Result};
use crate::model::{Problem, Side, SupNormReport};
use crate::viscous::Field;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct StabilityRow {
    pub t: f64,
    pub lhs: f64,
    pub rhs: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StabilityReport {
    pub check: String,
    pub l_f: f64,
    #[serde(rename = "l_F")]
    pub l_big_f: f64,
    pub rows: Vec<StabilityRow>,
    pub tolerance: f64,
    /// `min_t (rhs + tol - lhs)`.
    pub min_margin: f64,
    pub verdict: Verdict,
}

/// Compares `∫|u - v|(t)` with
/// `e^{L_F t} ∫|u_o - v_o| + L_f ∫_0^t e^{L_F (t - τ)} Σ_ξ |u_b - v_b|(τ) dτ`
/// at every level. The data integrals use the fields' first rows; the time
/// integral is the trapezoid rule on the field's levels.
pub fn check_stability(
    u: &Field,
    v: &Field,
    p_u: &Problem,
    p_v: &Problem,
    norms: &SupNormReport,
    tol: f64,
) -> Result<StabilityReport> {
    if !p_u.flux.same_as(&p_v.flux) || !p_u.source.same_as(&p_v.source) {
        return Err(Error::Hypothesis(
            "stability estimate compares problems with the same flux and source".into(),
        ));
    }
    u.check_same_grid(v)?;
    let g = u.grid;
    let (l_f, l_big_f) = (norms.l_f, norms.l_big_f);
    let d0 = u.row_l1_distance(0, v.row(0));
    let jump: Vec<f64> = (0..u.n_rows())
        .map(|k| {
            let t = g.t(k);
            Side::BOTH
                .iter()
                .map(|&s| (p_u.boundary.value(s, t) - p_v.boundary.value(s, t)).abs())
                .sum()
        })
        .collect();
    let mut rows = Vec::with_capacity(u.n_rows());
    // ∫_0^{t_k} e^{-L_F τ} jump(τ) dτ, accumulated by trapezoids.
    let mut acc = 0.0;
    for k in 0..u.n_rows() {
        let t = g.t(k);
        if k > 0 {
            let t0 = g.t(k - 1);
            acc += 0.5 * g.dt * ((-l_big_f * t0).exp() * jump[k - 1] + (-l_big_f * t).exp() * jump[k]);
        }
        let grow = (l_big_f * t).exp();
        rows.push(StabilityRow {
            t,
            lhs: u.row_l1_distance(k, v.row(k)),
            rhs: grow * d0 + l_f * grow * acc,
        });
    }
    let min_margin = rows.iter().map(|r| r.rhs + tol - r.lhs).fold(f64::INFINITY, f64::min);
    Ok(StabilityReport {
        check: "stability".into(),
        l_f,
        l_big_f,
        rows,
        tolerance: tol,
        min_margin,
        verdict: Verdict::from_bool(min_margin >= 0.0),
    })
}

impl StabilityReport {
    pub fn passed(&self) -> bool {
        self.verdict.passed()
    }

    pub fn record(&self, instance_hash: &str) -> Record {
        let worst = self
            .rows
            .iter()
            .min_by(|a, b| (a.rhs - a.lhs).total_cmp(&(b.rhs - b.lhs)))
            .expect("at least one level");
        Record {
            check: self.check.clone(),
            instance_hash: instance_hash.to_string(),
            min_residual: self.min_margin,
            tolerance: self.tolerance,
            verdict: self.verdict,
            witnesses: vec![Witness {
                t: Some(worst.t),
                value: worst.rhs - worst.lhs,
                ..Witness::default()
            }],
            warnings: Vec::new(),
        }
    }
}
