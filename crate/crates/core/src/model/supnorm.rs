//! Certified sup-norms of flux and source derivatives over space-time boxes.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::boundary::lattice_sup;
use super::domain::{Domain1D, Side};
use super::grid_function::uniform_nodes;
use super::models::{FluxModel, SourceModel};
use super::smooth::Partial;
use crate::error::{Error, Result};
use crate::par;

/// Sampling lattice for box norms. The lattice is anchored at `t = 0` and
/// `u = 0` with fixed steps, so enlarging a box only adds cells.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SamplingSpec {
    pub t_step: f64,
    pub x_points: usize,
    pub u_step: f64,
    /// Refuse boxes needing more u-cells than this.
    pub max_u_cells: usize,
}

impl Default for SamplingSpec {
    fn default() -> Self {
        SamplingSpec {
            t_step: 1.0 / 16.0,
            x_points: 17,
            u_step: 1.0 / 16.0,
            max_u_cells: 4096,
        }
    }
}

impl SamplingSpec {
    /// Default resolution with the time step scaled to the horizon.
    pub fn for_horizon(horizon: f64) -> Self {
        SamplingSpec {
            t_step: horizon / 16.0,
            ..Default::default()
        }
    }

    fn validate(&self) -> Result<()> {
        if !(self.t_step > 0.0 && self.u_step > 0.0) || self.x_points < 2 {
            return Err(Error::Invalid(format!("bad sampling spec {self:?}")));
        }
        Ok(())
    }
}

/// What an entry measures.
#[derive(Clone, Copy, Debug)]
enum Target {
    Flux(Partial),
    Source(Partial),
}

/// Region an entry is taken over.
#[derive(Clone, Copy, Debug, PartialEq)]
enum Region {
    /// `[0,t] × Ω × U(t)`
    Box,
    /// `[0,t] × Ω × {0}`
    ZeroLevel,
    /// `[0,t] × ∂Ω × {0}`
    BoundaryZeroLevel,
}

const ENTRIES: &[(&str, Target, Region)] = &[
    ("f", Target::Flux(Partial::VALUE), Region::Box),
    ("du_f", Target::Flux(Partial::DU), Region::Box),
    ("div_f", Target::Flux(Partial::DX), Region::Box),
    ("du_div_f", Target::Flux(Partial::DXU), Region::Box),
    ("dt_f", Target::Flux(Partial::DT), Region::Box),
    ("dt_div_f", Target::Flux(Partial::DTX), Region::Box),
    ("grad_div_f", Target::Flux(Partial::DXX), Region::Box),
    ("grad_du_f", Target::Flux(Partial::DXU), Region::Box),
    ("duu_f", Target::Flux(Partial::DUU), Region::Box),
    ("dt_du_f", Target::Flux(Partial::DTU), Region::Box),
    ("dtt_f", Target::Flux(Partial::DTT), Region::Box),
    ("div_f_at_zero", Target::Flux(Partial::DX), Region::ZeroLevel),
    ("div_f_boundary_at_zero", Target::Flux(Partial::DX), Region::BoundaryZeroLevel),
    ("F", Target::Source(Partial::VALUE), Region::Box),
    ("du_F", Target::Source(Partial::DU), Region::Box),
    ("dt_F", Target::Source(Partial::DT), Region::Box),
    ("grad_F", Target::Source(Partial::DX), Region::Box),
    ("dt_du_F", Target::Source(Partial::DTU), Region::Box),
    ("grad_du_F", Target::Source(Partial::DXU), Region::Box),
    ("duu_F", Target::Source(Partial::DUU), Region::Box),
    ("F_at_zero", Target::Source(Partial::VALUE), Region::ZeroLevel),
    ("F_boundary_at_zero", Target::Source(Partial::VALUE), Region::BoundaryZeroLevel),
];

/// Names of every entry a full report carries.
pub fn entry_names() -> impl Iterator<Item = &'static str> {
    ENTRIES.iter().map(|e| e.0)
}

/// Upper bounds for the norms of `f`, `F` and their derivatives.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SupNormReport {
    pub t: f64,
    /// Half-width of `U(t)`.
    pub radius: f64,
    pub entries: BTreeMap<String, f64>,
    /// `‖∂u f‖`
    pub l_f: f64,
    /// `‖∂u F‖`
    #[serde(rename = "l_F")]
    pub l_big_f: f64,
}

impl SupNormReport {
    pub fn compute(
        flux: &FluxModel,
        source: &SourceModel,
        domain: &Domain1D,
        t: f64,
        radius: f64,
        spec: &SamplingSpec,
    ) -> Result<Self> {
        spec.validate()?;
        let mut entries = BTreeMap::new();
        for &(name, target, region) in ENTRIES {
            let closed = match target {
                Target::Flux(_) => flux.closed_form_norm(name),
                Target::Source(_) => source.closed_form_norm(name),
            };
            let v = match closed {
                Some(g) => g(t, radius),
                None => {
                    let eval = |tt: f64, x: f64, u: f64| match target {
                        Target::Flux(p) => flux.partial(p, tt, x, u),
                        Target::Source(p) => source.partial(p, tt, x, u),
                    };
                    match region {
                        Region::Box => sup_norm_over_box(name, &eval, domain, t, radius, spec)?,
                        Region::ZeroLevel => zero_level_norm(name, &eval, domain, t, spec)?,
                        Region::BoundaryZeroLevel => {
                            let mut m = 0.0_f64;
                            for side in Side::BOTH {
                                let xi = domain.point(side);
                                let s = lattice_sup(|tt| eval(tt, xi, 0.0), t, spec.t_step);
                                if !s.is_finite() {
                                    return Err(non_finite(name, t, xi, 0.0));
                                }
                                m = m.max(s);
                            }
                            m
                        }
                    }
                }
            };
            entries.insert(name.to_string(), v);
        }
        let l_f = entries["du_f"];
        let l_big_f = entries["du_F"];
        Ok(SupNormReport {
            t,
            radius,
            entries,
            l_f,
            l_big_f,
        })
    }

    pub fn get(&self, name: &str) -> Result<f64> {
        self.entries
            .get(name)
            .copied()
            .ok_or_else(|| Error::MissingNorm(name.to_string()))
    }

    /// Report with explicit entries, for callers holding certified values.
    pub fn from_entries(t: f64, radius: f64, entries: BTreeMap<String, f64>) -> Self {
        let l_f = entries.get("du_f").copied().unwrap_or(0.0);
        let l_big_f = entries.get("du_F").copied().unwrap_or(0.0);
        SupNormReport {
            t,
            radius,
            entries,
            l_f,
            l_big_f,
        }
    }
}

fn non_finite(what: &str, t: f64, x: f64, u: f64) -> Error {
    Error::NonFinite {
        what: what.to_string(),
        t,
        x,
        u,
    }
}

/// Upper bound of `|g|` over `[0,t] × [a,b] × [−M, M]`.
///
/// Every lattice cell meeting the box contributes the largest corner value
/// plus half the largest increment along each axis.
pub fn sup_norm_over_box(
    what: &str,
    g: &(dyn Fn(f64, f64, f64) -> f64 + Sync),
    domain: &Domain1D,
    t: f64,
    m: f64,
    spec: &SamplingSpec,
) -> Result<f64> {
    spec.validate()?;
    if !(m >= 0.0 && t >= 0.0) {
        return Err(Error::Invalid(format!("box needs t, M >= 0 (got t={t}, M={m})")));
    }
    let cells = 2.0 * (m / spec.u_step).ceil().max(1.0);
    if !(cells <= spec.max_u_cells as f64) {
        return Err(Error::Resolution(format!(
            "u-range [-{m}, {m}] needs {cells} cells, limit {}",
            spec.max_u_cells
        )));
    }
    let nu_half = (cells / 2.0) as usize;
    let us: Vec<f64> = (0..=2 * nu_half)
        .map(|k| (k as f64 - nu_half as f64) * spec.u_step)
        .collect();
    lattice_bound(what, g, domain, t, &us, spec)
}

fn zero_level_norm(
    what: &str,
    g: &(dyn Fn(f64, f64, f64) -> f64 + Sync),
    domain: &Domain1D,
    t: f64,
    spec: &SamplingSpec,
) -> Result<f64> {
    lattice_bound(what, g, domain, t, &[0.0], spec)
}

fn lattice_bound(
    what: &str,
    g: &(dyn Fn(f64, f64, f64) -> f64 + Sync),
    domain: &Domain1D,
    t: f64,
    us: &[f64],
    spec: &SamplingSpec,
) -> Result<f64> {
    let nt_cells = ((t / spec.t_step).ceil() as usize).max(1);
    let ts: Vec<f64> = (0..=nt_cells).map(|j| j as f64 * spec.t_step).collect();
    let xs = uniform_nodes(domain.a, domain.b, spec.x_points);
    let (nx, nu) = (xs.len(), us.len());
    let rows: Vec<Result<Vec<f64>>> = par::map(&ts, |&tt| {
        let mut row = Vec::with_capacity(nx * nu);
        for &x in &xs {
            for &u in us {
                let v = g(tt, x, u);
                if !v.is_finite() {
                    return Err(non_finite(what, tt, x, u));
                }
                row.push(v);
            }
        }
        Ok(row)
    });
    let mut vals = Vec::with_capacity(ts.len() * nx * nu);
    for r in rows {
        vals.extend(r?);
    }
    Ok(cell_bound(&vals, [ts.len(), nx, nu]))
}

/// Max over lattice cells of `max|corner| + Σ_axis max|edge increment| / 2`.
/// Axes with a single point contribute no cells.
fn cell_bound(vals: &[f64], dims: [usize; 3]) -> f64 {
    let idx = |i: usize, j: usize, k: usize| (i * dims[1] + j) * dims[2] + k;
    let cells = |d: usize| dims[d].saturating_sub(1).max(1);
    let off = |d: usize| if dims[d] > 1 { 1 } else { 0 };
    let (o0, o1, o2) = (off(0), off(1), off(2));
    let mut best = 0.0_f64;
    for i in 0..cells(0) {
        for j in 0..cells(1) {
            for k in 0..cells(2) {
                let mut corner = 0.0_f64;
                let mut edge = [0.0_f64; 3];
                for di in 0..=o0 {
                    for dj in 0..=o1 {
                        for dk in 0..=o2 {
                            let v = vals[idx(i + di, j + dj, k + dk)];
                            corner = corner.max(v.abs());
                            if di == 0 && o0 == 1 {
                                edge[0] = edge[0].max((vals[idx(i + 1, j + dj, k + dk)] - v).abs());
                            }
                            if dj == 0 && o1 == 1 {
                                edge[1] = edge[1].max((vals[idx(i + di, j + 1, k + dk)] - v).abs());
                            }
                            if dk == 0 && o2 == 1 {
                                edge[2] = edge[2].max((vals[idx(i + di, j + dj, k + 1)] - v).abs());
                            }
                        }
                    }
                }
                best = best.max(corner + 0.5 * (edge[0] + edge[1] + edge[2]));
            }
        }
    }
    best
}
