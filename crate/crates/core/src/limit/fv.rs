use crate::error::{Error, Result};
use crate::model::{FluxModel, Problem, Side};
use crate::viscous::{Field, Grid1D, ViscousOptions};

const SAMPLES: usize = 64;
const GOLDEN_ITERS: usize = 40;

fn golden_min(g: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    let r = 0.5 * (5f64.sqrt() - 1.0);
    let mut c = hi - r * (hi - lo);
    let mut d = lo + r * (hi - lo);
    let (mut gc, mut gd) = (g(c), g(d));
    for _ in 0..GOLDEN_ITERS {
        if gc < gd {
            hi = d;
            d = c;
            gd = gc;
            c = hi - r * (hi - lo);
            gc = g(c);
        } else {
            lo = c;
            c = d;
            gc = gd;
            d = lo + r * (hi - lo);
            gd = g(d);
        }
    }
    gc.min(gd)
}

/// `min` of `sign·f(t, x, ·)` over `[lo, hi]`, by sampling and golden
/// refinement around the best sample.
fn sampled_min(flux: &FluxModel, t: f64, x: f64, lo: f64, hi: f64, sign: f64) -> f64 {
    let g = |u: f64| sign * flux.f(t, x, u);
    let h = (hi - lo) / (SAMPLES - 1) as f64;
    let mut best = (0, f64::INFINITY);
    for j in 0..SAMPLES {
        let u = if j == SAMPLES - 1 { hi } else { lo + h * j as f64 };
        let v = g(u);
        if v < best.1 {
            best = (j, v);
        }
    }
    let a = lo + h * best.0.saturating_sub(1) as f64;
    let b = (lo + h * (best.0 + 1) as f64).min(hi);
    best.1.min(golden_min(g, a, b))
}

/// Godunov flux of `f(t, x, ·)`: `min` over `[uL, uR]` when `uL ≤ uR`,
/// `max` over `[uR, uL]` otherwise.
pub fn godunov_flux(flux: &FluxModel, t: f64, x: f64, ul: f64, ur: f64) -> f64 {
    if ul == ur {
        flux.f(t, x, ul)
    } else if ul < ur {
        sampled_min(flux, t, x, ul, ur, 1.0)
    } else {
        -sampled_min(flux, t, x, ur, ul, -1.0)
    }
}

/// First-order monotone finite-volume reference solver on the dual cells of
/// the node grid (half cells at the boundary). Boundary faces use the
/// Godunov flux against a ghost state equal to `u_b`.
pub fn solve_fv_entropy(p: &Problem, grid: &Grid1D) -> Result<Field> {
    solve_fv_entropy_with(p, grid, &ViscousOptions::for_problem(p))
}

pub fn solve_fv_entropy_with(p: &Problem, grid: &Grid1D, opts: &ViscousOptions) -> Result<Field> {
    let nx = grid.nx;
    if nx < 3 {
        return Err(Error::Resolution("finite-volume solver needs at least 3 nodes".into()));
    }
    let (dx, dt) = (grid.dx(), grid.dt);
    let mut field = Field::zeros(*grid, 0.0);
    for (i, v) in field.row_mut(0).iter_mut().enumerate() {
        *v = p.initial.eval(grid.x(i));
    }
    let mut faces = vec![0.0; nx + 1];
    let mut next = vec![0.0; nx];
    for k in 0..grid.nt {
        let t = grid.t(k);
        let u = field.row(k);
        let (ga, gb) = (p.boundary.value(Side::Left, t), p.boundary.value(Side::Right, t));
        let speed = u
            .iter()
            .enumerate()
            .map(|(i, &v)| p.flux.du_f(t, grid.x(i), v).abs())
            .chain([p.flux.du_f(t, grid.a, ga).abs(), p.flux.du_f(t, grid.b, gb).abs()])
            .fold(0.0, f64::max);
        let limit = 0.5 * dx / speed.max(1e-300);
        if dt > limit * (1.0 + 1e-9) {
            return Err(Error::Cfl { dt, limit });
        }
        faces[0] = godunov_flux(&p.flux, t, grid.a, ga, u[0]);
        for i in 0..nx - 1 {
            faces[i + 1] = godunov_flux(&p.flux, t, grid.x_half(i), u[i], u[i + 1]);
        }
        faces[nx] = godunov_flux(&p.flux, t, grid.b, u[nx - 1], gb);
        for i in 0..nx {
            let width = if i == 0 || i == nx - 1 { 0.5 * dx } else { dx };
            next[i] = u[i] - dt / width * (faces[i + 1] - faces[i]) + dt * p.source.F(t, grid.x(i), u[i]);
        }
        let peak = next.iter().fold(0.0_f64, |m, v| if v.is_nan() { f64::NAN } else { m.max(v.abs()) });
        if !peak.is_finite() || peak > opts.blowup_threshold {
            return Err(Error::Blowup {
                step: k + 1,
                t: grid.t(k + 1),
                reason: format!("max |u| = {peak} (threshold {})", opts.blowup_threshold),
            });
        }
        field.row_mut(k + 1).copy_from_slice(&next);
    }
    Ok(field)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::burgers;

    #[test]
    fn godunov_burgers_cases() {
        let f = burgers();
        // transonic rarefaction
        assert!(godunov_flux(&f, 0.0, 0.0, -1.0, 1.0).abs() < 1e-12);
        // shock moving left: upwind value from the right
        assert!((godunov_flux(&f, 0.0, 0.0, 0.5, -1.0) - 0.5).abs() < 1e-15);
        assert!((godunov_flux(&f, 0.0, 0.0, 2.0, 1.0) - 2.0).abs() < 1e-15);
        assert_eq!(godunov_flux(&f, 0.0, 0.0, 0.3, 0.3), 0.045);
    }

    #[test]
    fn godunov_is_monotone_on_random_states() {
        use rand::{Rng, SeedableRng};
        let f = FluxModel::new("cubic", |_, _, u| u * u * u / 3.0 - u);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for _ in 0..500 {
            let (a, b, d) = (rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0), rng.gen_range(0.0..0.3));
            let base = godunov_flux(&f, 0.0, 0.0, a, b);
            assert!(godunov_flux(&f, 0.0, 0.0, a + d, b) >= base - 1e-12);
            assert!(godunov_flux(&f, 0.0, 0.0, a, b + d) <= base + 1e-12);
        }
    }
}
