//! Affine boundary lift and the translated homogeneous problem.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{BoundaryData, FluxModel, Partial, Problem, Side, Smooth3, SourceModel};
use crate::viscous::{Field, Grid1D};

/// Samples of the lift `z` and of `∂t z` on a grid.
#[derive(Clone, Debug, PartialEq)]
pub struct LiftField {
    pub z: Field,
    pub dt_z: Field,
}

/// Exact sup-norms of the lift over the sampled levels.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LiftNorms {
    pub z: f64,
    pub dt_z: f64,
    pub dx_z: f64,
}

/// Affine interpolation between two endpoint values, clamped to their range
/// so the extrema sit exactly at the endpoints.
fn affine_row(ua: f64, ub: f64, grid: &Grid1D, out: &mut [f64]) {
    let (lo, hi) = (ua.min(ub), ua.max(ub));
    let n = grid.nx;
    for (i, v) in out.iter_mut().enumerate() {
        let theta = (grid.x(i) - grid.a) / grid.length();
        *v = (ua + (ub - ua) * theta).clamp(lo, hi);
    }
    out[0] = ua;
    out[n - 1] = ub;
}

/// The harmonic (affine) lift of the boundary datum on `grid`.
pub fn solve_harmonic_lift(bd: &BoundaryData, grid: &Grid1D) -> LiftField {
    let mut z = Field::zeros(*grid, 0.0);
    let mut dt_z = Field::zeros(*grid, 0.0);
    for k in 0..=grid.nt {
        let t = grid.t(k);
        affine_row(bd.value(Side::Left, t), bd.value(Side::Right, t), grid, z.row_mut(k));
        affine_row(bd.dt_value(Side::Left, t), bd.dt_value(Side::Right, t), grid, dt_z.row_mut(k));
    }
    LiftField { z, dt_z }
}

impl LiftField {
    pub fn norms(&self) -> LiftNorms {
        let g = self.z.grid;
        let dx_z = (0..=g.nt)
            .map(|k| (self.z.at(k, g.nx - 1) - self.z.at(k, 0)).abs() / g.length())
            .fold(0.0, f64::max);
        LiftNorms {
            z: self.z.sup_norm(),
            dt_z: self.dt_z.sup_norm(),
            dx_z,
        }
    }
}

/// Evaluators of `z(t, x)` and its first derivatives from the boundary datum.
#[derive(Clone)]
struct Lift {
    bd: BoundaryData,
    a: f64,
    len: f64,
}

impl Lift {
    fn theta(&self, x: f64) -> f64 {
        (x - self.a) / self.len
    }
    fn z(&self, t: f64, x: f64) -> f64 {
        let (l, r) = (self.bd.value(Side::Left, t), self.bd.value(Side::Right, t));
        l + (r - l) * self.theta(x)
    }
    fn dt(&self, t: f64, x: f64) -> f64 {
        let (l, r) = (self.bd.dt_value(Side::Left, t), self.bd.dt_value(Side::Right, t));
        l + (r - l) * self.theta(x)
    }
    fn dx(&self, t: f64) -> f64 {
        (self.bd.value(Side::Right, t) - self.bd.value(Side::Left, t)) / self.len
    }
    fn dtx(&self, t: f64) -> f64 {
        (self.bd.dt_value(Side::Right, t) - self.bd.dt_value(Side::Left, t)) / self.len
    }
}

/// Problem for `v = u − z`: flux `g(t,x,v) = f(t,x,v+z)`, source
/// `G(t,x,v) = F(t,x,v+z) − ∂t z`, same initial datum, `v = 0` on the
/// boundary. Requires `z(0, ·) = 0`.
pub fn translate_problem(p: &Problem, lift: &LiftField) -> Result<Problem> {
    let g = lift.z.grid;
    if (g.a - p.domain.a).abs() > 1e-12 || (g.b - p.domain.b).abs() > 1e-12 {
        return Err(Error::GridMismatch(format!(
            "lift on [{}, {}] but the problem lives on [{}, {}]",
            g.a, g.b, p.domain.a, p.domain.b
        )));
    }
    let z0 = lift.z.row_sup(0);
    if z0 > 0.0 {
        return Err(Error::Compatibility(format!(
            "translation needs u_b(0, ·) = 0, but the lift has sup {z0} at t = 0"
        )));
    }
    let lf = Lift {
        bd: p.boundary.clone(),
        a: p.domain.a,
        len: p.domain.length(),
    };

    let f = p.flux.clone();
    let l = lf.clone();
    let mut gs = Smooth3::new({
        let (f, l) = (f.clone(), l.clone());
        move |t, x, v| f.f(t, x, v + l.z(t, x))
    });
    {
        let (f, l) = (f.clone(), l.clone());
        gs = gs.with_partial(Partial::DU, move |t, x, v| f.du_f(t, x, v + l.z(t, x)));
    }
    {
        let (f, l) = (f.clone(), l.clone());
        gs = gs.with_partial(Partial::DX, move |t, x, v| {
            let u = v + l.z(t, x);
            f.div_f(t, x, u) + f.du_f(t, x, u) * l.dx(t)
        });
    }
    {
        let (f, l) = (f.clone(), l.clone());
        gs = gs.with_partial(Partial::DT, move |t, x, v| {
            let u = v + l.z(t, x);
            f.dt_f(t, x, u) + f.du_f(t, x, u) * l.dt(t, x)
        });
    }
    {
        let (f, l) = (f.clone(), l.clone());
        gs = gs.with_partial(Partial::DUU, move |t, x, v| f.duu_f(t, x, v + l.z(t, x)));
    }
    {
        let (f, l) = (f.clone(), l.clone());
        gs = gs.with_partial(Partial::DXU, move |t, x, v| {
            let u = v + l.z(t, x);
            f.du_div_f(t, x, u) + f.duu_f(t, x, u) * l.dx(t)
        });
    }
    let flux = FluxModel::from_smooth(format!("{}∘(v+z)", p.flux.name), gs);

    let s = p.source.clone();
    let mut ss = Smooth3::new({
        let (s, l) = (s.clone(), lf.clone());
        move |t, x, v| s.F(t, x, v + l.z(t, x)) - l.dt(t, x)
    });
    {
        let (s, l) = (s.clone(), lf.clone());
        ss = ss.with_partial(Partial::DU, move |t, x, v| s.du_F(t, x, v + l.z(t, x)));
    }
    {
        let (s, l) = (s.clone(), lf.clone());
        ss = ss.with_partial(Partial::DX, move |t, x, v| {
            let u = v + l.z(t, x);
            s.grad_F(t, x, u) + s.du_F(t, x, u) * l.dx(t) - l.dtx(t)
        });
    }
    let source = SourceModel::from_smooth(format!("{}∘(v+z) - ∂t z", p.source.name), ss);

    Problem::new(
        format!("{} [translated]", p.label),
        p.domain,
        p.horizon,
        flux,
        source,
        p.initial.clone(),
        BoundaryData::zero(),
    )
}

/// `u = v + z`.
pub fn untranslate_solution(v: &Field, lift: &LiftField) -> Result<Field> {
    let mut u = v.zip_with(&lift.z, |a, b| a + b)?;
    u.epsilon = v.epsilon;
    Ok(u)
}
