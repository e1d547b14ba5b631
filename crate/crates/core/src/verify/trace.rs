use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{BoundaryData, Side};
use crate::viscous::Field;

pub const DEFAULT_AVERAGING_RADIUS: usize = 6;

/// Boundary-layer widths skipped before the fitting window.
const LAYER_WIDTHS: f64 = 4.0;

/// One-sided boundary values of a field at every time level.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TraceSeries {
    pub side: Side,
    pub times: Vec<f64>,
    pub values: Vec<f64>,
    pub averaging_radius: usize,
    /// Nodes skipped between the boundary node and the fitting window.
    #[serde(default)]
    pub offset: usize,
}

impl TraceSeries {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// How far a trace sits from the imposed datum.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TraceSummary {
    pub side: Side,
    pub trace_final: f64,
    pub datum_final: f64,
    /// `min_t |tr - u_b|`
    pub min_gap: f64,
    /// `max_t |tr - u_b|`
    pub max_gap: f64,
}

impl TraceSummary {
    pub fn new(tr: &TraceSeries, ub: &BoundaryData) -> Self {
        let gaps = tr.times.iter().zip(&tr.values).map(|(&t, v)| (v - ub.value(tr.side, t)).abs());
        let (min_gap, max_gap) = gaps.fold((f64::INFINITY, 0.0_f64), |(lo, hi), g| (lo.min(g), hi.max(g)));
        let t_end = tr.times.last().copied().unwrap_or(0.0);
        TraceSummary {
            side: tr.side,
            trace_final: tr.values.last().copied().unwrap_or(f64::NAN),
            datum_final: ub.value(tr.side, t_end),
            min_gap,
            max_gap,
        }
    }
}

/// Nodes covered by a viscous boundary layer of width `(eps + dx/2) / dx`
/// cells (physical plus numerical viscosity at unit speed).
pub fn layer_offset(u: &Field) -> usize {
    (LAYER_WIDTHS * (u.epsilon / u.grid.dx() + 0.5)).ceil() as usize
}

/// Trace with the default window, placed past the boundary layer. Coarse
/// grids shrink the offset and window to fit.
pub fn extract_trace(u: &Field, side: Side) -> Result<TraceSeries> {
    let nx = u.grid.nx;
    if nx < 4 {
        return Err(Error::Resolution(format!("trace extraction needs nx >= 4, got {nx}")));
    }
    let room = nx - 2;
    let r = DEFAULT_AVERAGING_RADIUS.min(room.div_ceil(2)).max(1);
    let offset = layer_offset(u).min(room - r);
    extract_trace_at(u, side, offset, r)
}

/// Fit through the first `r` nodes next to the boundary node.
pub fn extract_trace_with(u: &Field, side: Side, r: usize) -> Result<TraceSeries> {
    extract_trace_at(u, side, 0, r)
}

/// Least-squares line through nodes `offset+1 ..= offset+r`, evaluated at the
/// boundary. The boundary node itself holds the imposed datum for viscous
/// fields, so it is never used.
pub fn extract_trace_at(u: &Field, side: Side, offset: usize, r: usize) -> Result<TraceSeries> {
    let nx = u.grid.nx;
    if nx < 4 {
        return Err(Error::Resolution(format!("trace extraction needs nx >= 4, got {nx}")));
    }
    if r == 0 || offset + r + 1 > nx - 1 {
        return Err(Error::Invalid(format!(
            "trace window (offset {offset}, radius {r}) does not fit {nx} nodes"
        )));
    }
    let idx = |j: usize| match side {
        Side::Left => j,
        Side::Right => nx - 1 - j,
    };
    let values = u
        .rows()
        .map(|row| {
            let v = |j: usize| row[idx(j + offset)];
            let o = offset as f64;
            match r {
                1 => v(1),
                _ => {
                    let rf = r as f64;
                    let dbar = (rf + 1.0) / 2.0;
                    // Offset from v(1) keeps constant windows exact.
                    let vbar = v(1) + (2..=r).map(|j| v(j) - v(1)).sum::<f64>() / rf;
                    let (mut num, mut den) = (0.0, 0.0);
                    for j in 1..=r {
                        let d = j as f64 - dbar;
                        num += d * (v(j) - vbar);
                        den += d * d;
                    }
                    vbar - num / den * (dbar + o)
                }
            }
        })
        .collect::<Vec<f64>>();
    if let Some(k) = values.iter().position(|v| !v.is_finite()) {
        return Err(Error::NonFinite {
            what: "trace".into(),
            t: u.grid.t(k),
            x: if side == Side::Left { u.grid.a } else { u.grid.b },
            u: values[k],
        });
    }
    Ok(TraceSeries {
        side,
        times: u.grid.times(),
        values,
        averaging_radius: r,
        offset,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::viscous::Grid1D;

    #[test]
    fn constant_and_affine() {
        let g = Grid1D::new(0.0, 1.0, 41, 4, 0.1).unwrap();
        let c = Field::from_fn(g, 0.0, |_, _| 0.37);
        for side in Side::BOTH {
            assert!(extract_trace(&c, side).unwrap().values.iter().all(|&v| v == 0.37));
        }
        let lin = Field::from_fn(g, 0.0, |_, x| x);
        let tr = extract_trace(&lin, Side::Right).unwrap();
        assert!(tr.values.iter().all(|v| (v - 1.0).abs() <= g.dx() * 1e-9));
        let tr = extract_trace_with(&lin, Side::Left, 5).unwrap();
        assert!(tr.values.iter().all(|v| v.abs() <= g.dx() * 1e-9));
        let tr = extract_trace_at(&lin, Side::Left, 3, 2).unwrap();
        assert!(tr.values.iter().all(|v| v.abs() <= g.dx() * 1e-9));
    }

    #[test]
    fn skips_layer() {
        let g = Grid1D::new(0.0, 1.0, 101, 2, 0.1).unwrap();
        let u = Field::from_fn(g, 0.0, |_, x| -1.0 + 0.5 * (-x / 0.01).exp());
        let tr = extract_trace(&u, Side::Left).unwrap();
        assert_eq!(tr.offset, 2);
        assert!(tr.values.iter().all(|v| (v + 1.0).abs() < 0.05));
    }

    #[test]
    fn too_coarse() {
        let g = Grid1D::new(0.0, 1.0, 3, 1, 0.1).unwrap();
        assert!(matches!(
            extract_trace(&Field::zeros(g, 0.0), Side::Left),
            Err(Error::Resolution(_))
        ));
    }
}
