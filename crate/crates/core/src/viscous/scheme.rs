use log::warn;

use super::field::{row_l1, Field};
use super::grid::Grid1D;
use super::tridiag::solve_tridiagonal;
use crate::bounds::{compute_c1_c2, m_radius, self_consistent_norms, BoundSet};
use crate::error::{Error, Result};
use crate::model::{FluxModel, Problem, SamplingSpec, Side};

/// Floor on the number of steps when no advection limit applies.
pub const NT_MIN: usize = 100;
const TINY: f64 = 1e-300;
const SPEED_SAMPLES: usize = 5;

/// Largest `|∂u f|` over a few points of the interval between two states.
pub fn local_speed(flux: &FluxModel, t: f64, x: f64, ul: f64, ur: f64) -> f64 {
    (0..SPEED_SAMPLES)
        .map(|j| {
            let s = j as f64 / (SPEED_SAMPLES - 1) as f64;
            flux.du_f(t, x, ul + s * (ur - ul)).abs()
        })
        .fold(0.0, f64::max)
}

/// Local Lax-Friedrichs flux at `x`.
#[inline]
pub fn llf_flux(flux: &FluxModel, t: f64, x: f64, ul: f64, ur: f64) -> f64 {
    let (fl, fr) = (flux.f(t, x, ul), flux.f(t, x, ur));
    if ul == ur {
        return fl;
    }
    0.5 * (fl + fr) - 0.5 * local_speed(flux, t, x, ul, ur) * (ur - ul)
}

/// Radius `M(t)` of the sup-norm estimate.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GrowthBound {
    pub c1: f64,
    pub c2: f64,
    pub data: f64,
}

impl GrowthBound {
    pub fn m(&self, t: f64) -> f64 {
        m_radius(self.c1, self.c2, self.data, t)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ViscousOptions {
    /// Values beyond this abort the solve.
    pub blowup_threshold: f64,
    /// When present, new extrema beyond `M(t)` are logged.
    pub growth: Option<GrowthBound>,
}

impl Default for ViscousOptions {
    fn default() -> Self {
        ViscousOptions {
            blowup_threshold: 1e12,
            growth: None,
        }
    }
}

impl ViscousOptions {
    /// Threshold `10·M(T) + 1` from the self-consistent box, or the default
    /// when no box can be found.
    pub fn for_problem(p: &Problem) -> Self {
        let spec = SamplingSpec::for_horizon(p.horizon);
        match self_consistent_norms(p, &spec).and_then(|(n, _)| compute_c1_c2(&n)) {
            Ok((c1, c2)) => {
                let growth = GrowthBound {
                    c1,
                    c2,
                    data: p.initial.sup_norm() + p.boundary.sup_norm(p.horizon, spec.t_step / 8.0),
                };
                let dt_ub = p.boundary.dt_sup_norm(p.horizon, spec.t_step / 8.0);
                let top = m_radius(c1, c2 + dt_ub, growth.data, p.horizon);
                ViscousOptions {
                    blowup_threshold: 10.0 * top + 1.0,
                    growth: Some(growth),
                }
            }
            Err(e) => {
                warn!("no a priori radius for `{}` ({e}); using default blowup threshold", p.label);
                ViscousOptions::default()
            }
        }
    }
}

/// Explicit-advection time step:
/// `min(safety·dx / (2 L_f + dx L_F), safety·T / NT_MIN)`.
pub fn cfl_timestep(p: &Problem, _eps: f64, dx: f64, safety: f64) -> Result<f64> {
    let (norms, _) = self_consistent_norms(p, &SamplingSpec::for_horizon(p.horizon))?;
    cfl_from_speeds(norms.l_f, norms.l_big_f, dx, safety, p.horizon)
}

pub fn cfl_from_speeds(l_f: f64, l_big_f: f64, dx: f64, safety: f64, horizon: f64) -> Result<f64> {
    if !(safety > 0.0 && safety <= 1.0) {
        return Err(Error::Invalid(format!("CFL safety must lie in ]0, 1], got {safety}")));
    }
    if !l_f.is_finite() || !l_big_f.is_finite() {
        return Err(Error::Invalid(format!("non-finite wave speed bound L_f={l_f}, L_F={l_big_f}")));
    }
    let advective = safety * dx / (2.0 * l_f + dx * l_big_f + TINY);
    Ok(advective.min(safety * horizon / NT_MIN as f64))
}

/// Scratch buffers for one solve.
#[derive(Default)]
pub struct StepWork {
    faces: Vec<f64>,
    lower: Vec<f64>,
    diag: Vec<f64>,
    upper: Vec<f64>,
    scratch: Vec<f64>,
}

/// One IMEX step from level `k` to `k + 1`.
pub fn imex_step(p: &Problem, eps: f64, grid: &Grid1D, k: usize, u: &[f64], out: &mut [f64], w: &mut StepWork) {
    let nx = grid.nx;
    let (dx, dt) = (grid.dx(), grid.dt);
    let t = grid.t(k);
    let lambda = dt / dx;
    w.faces.clear();
    w.faces
        .extend((0..nx - 1).map(|i| llf_flux(&p.flux, t, grid.x_half(i), u[i], u[i + 1])));
    for i in 1..nx - 1 {
        out[i] = u[i] - lambda * (w.faces[i] - w.faces[i - 1]) + dt * p.source.F(t, grid.x(i), u[i]);
    }
    let t1 = grid.t(k + 1);
    out[0] = p.boundary.value(Side::Left, t1);
    out[nx - 1] = p.boundary.value(Side::Right, t1);
    if eps > 0.0 && nx > 2 {
        let r = eps * dt / (dx * dx);
        w.lower.clear();
        w.diag.clear();
        w.upper.clear();
        w.lower.resize(nx, -r);
        w.diag.resize(nx, 1.0 + 2.0 * r);
        w.upper.resize(nx, -r);
        w.diag[0] = 1.0;
        w.upper[0] = 0.0;
        w.diag[nx - 1] = 1.0;
        w.lower[nx - 1] = 0.0;
        solve_tridiagonal(&w.lower, &w.diag, &w.upper, out, &mut w.scratch);
    }
}

/// Solves the viscous problem with viscosity `eps` on `grid`.
pub fn solve_viscous(p: &Problem, eps: f64, grid: &Grid1D) -> Result<Field> {
    solve_viscous_with(p, eps, grid, &ViscousOptions::for_problem(p))
}

pub fn solve_viscous_with(p: &Problem, eps: f64, grid: &Grid1D, opts: &ViscousOptions) -> Result<Field> {
    if !(eps > 0.0 && eps.is_finite()) {
        return Err(Error::Invalid(format!("viscosity must be positive, got {eps}")));
    }
    let mut field = Field::zeros(*grid, eps);
    for (i, v) in field.row_mut(0).iter_mut().enumerate() {
        *v = p.initial.eval(grid.x(i));
    }
    let mut w = StepWork::default();
    let mut next = vec![0.0; grid.nx];
    let mut warned = false;
    for k in 0..grid.nt {
        imex_step(p, eps, grid, k, field.row(k), &mut next, &mut w);
        let peak = next.iter().fold(0.0_f64, |m, v| if v.is_nan() { f64::NAN } else { m.max(v.abs()) });
        if !peak.is_finite() || peak > opts.blowup_threshold {
            return Err(Error::Blowup {
                step: k + 1,
                t: grid.t(k + 1),
                reason: format!("max |u| = {peak} (threshold {})", opts.blowup_threshold),
            });
        }
        if let Some(g) = opts.growth {
            let m = g.m(grid.t(k + 1));
            if !warned && peak > m * (1.0 + 1e-9) + 1e-9 {
                warn!(
                    "`{}`: max |u| = {peak} exceeds M(t) = {m} at step {} (dt may be too large)",
                    p.label,
                    k + 1
                );
                warned = true;
            }
        }
        field.row_mut(k + 1).copy_from_slice(&next);
    }
    Ok(field)
}

/// `max_{(s,t)} ‖u(t) − u(s)‖_{L1}/|t − s| − rate(max(s,t))` over pairs at
/// distances `1, 2, 4, …` time levels. The rate is `L_ε` for homogeneous
/// data and the final time-Lipschitz constant otherwise.
pub fn time_lipschitz_deficit(field: &Field, bound: &BoundSet) -> f64 {
    let g = field.grid;
    let dx = g.dx();
    let mut worst = f64::NEG_INFINITY;
    let mut stride = 1;
    while stride <= g.nt {
        for k in 0..=g.nt - stride {
            let j = k + stride;
            let q = row_l1(dx, field.row(j), field.row(k)) / (g.t(j) - g.t(k));
            let rate = if bound.homogeneous {
                bound.l_eps(g.t(j), field.epsilon)
            } else {
                bound.time_lip_constant(g.t(j))
            };
            worst = worst.max(q - rate);
        }
        stride *= 2;
    }
    worst
}

/// Grid with `nx` nodes and the CFL step of the problem.
pub fn cfl_grid(p: &Problem, nx: usize, safety: f64) -> Result<Grid1D> {
    if nx < 2 {
        return Err(Error::Invalid(format!("need at least 2 nodes, got {nx}")));
    }
    let dx = p.domain.length() / (nx - 1) as f64;
    let dt = cfl_timestep(p, 0.0, dx, safety)?;
    Grid1D::with_max_dt(&p.domain, p.horizon, nx, dt)
}
