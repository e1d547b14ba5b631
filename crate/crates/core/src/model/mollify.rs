use super::grid_function::GridFunction1D;
use crate::error::{Error, Result};

const KERNEL_SAMPLES_MIN: usize = 64;

fn kernel(s: f64) -> f64 {
    let q = 1.0 - s * s;
    if q <= 0.0 {
        0.0
    } else {
        q * q * q
    }
}

fn smoothstep5(z: f64) -> f64 {
    let z = z.clamp(0.0, 1.0);
    z * z * z * (10.0 - 15.0 * z + 6.0 * z * z)
}

/// Boundary cutoff: 0 at both endpoints, 1 at distance `≥ delta`.
pub fn cutoff(a: f64, b: f64, delta: f64, x: f64) -> f64 {
    let d = (x - a).min(b - x);
    smoothstep5(d / delta)
}

/// Smooths `u_o` with a mollifier of width `(b−a)/m` and multiplies by a
/// cutoff vanishing at the endpoints. Outside the domain the datum is
/// continued by its endpoint values, so the convolution is a convex
/// combination of translates and neither the sup-norm nor the variation
/// can grow.
pub fn mollify_initial_datum(u_o: &GridFunction1D, m: usize) -> Result<GridFunction1D> {
    if m == 0 {
        return Err(Error::Invalid("mollification index m must be at least 1".into()));
    }
    let nodes = u_o.nodes();
    let (a, b) = (nodes[0], nodes[nodes.len() - 1]);
    let delta = (b - a) / m as f64;
    let max_h = nodes.windows(2).map(|w| w[1] - w[0]).fold(0.0, f64::max);
    let min_h = nodes.windows(2).map(|w| w[1] - w[0]).fold(f64::INFINITY, f64::min);
    if delta < 2.0 * max_h {
        return Err(Error::Resolution(format!(
            "mollifier width {delta} is below two grid cells ({max_h}); lower m or refine the grid"
        )));
    }
    let r = 0.5 * delta;
    let nq = KERNEL_SAMPLES_MIN.max(4 * (r / min_h).ceil() as usize) | 1;
    let offsets: Vec<f64> = (0..nq).map(|q| -1.0 + (2.0 * q as f64 + 1.0) / nq as f64).collect();
    let raw: Vec<f64> = offsets.iter().map(|&s| kernel(s)).collect();
    let total: f64 = raw.iter().sum();
    let weights: Vec<f64> = raw.iter().map(|k| k / total).collect();

    let values = nodes
        .iter()
        .map(|&x| {
            let psi = cutoff(a, b, delta, x);
            if psi == 0.0 {
                return 0.0;
            }
            let smooth: f64 = offsets
                .iter()
                .zip(&weights)
                .map(|(&s, &w)| w * u_o.eval(x + r * s))
                .sum();
            psi * smooth
        })
        .collect();
    GridFunction1D::new(nodes.to_vec(), values)
}
