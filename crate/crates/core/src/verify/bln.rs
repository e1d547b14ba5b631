use super::report::{classify_levels, KRow, LevelRow, ResidualReport, Verdict, Witness};
use super::trace::TraceSeries;
use crate::model::{BoundaryData, FluxModel, Side};

pub const DEFAULT_K_POINTS: usize = 129;
pub const BLN_MIN_SAMPLES: usize = 64;

/// Symmetric signum: `sgn(0) = 0`.
#[inline]
pub fn sgn(x: f64) -> f64 {
    if x > 0.0 {
        1.0
    } else if x < 0.0 {
        -1.0
    } else {
        0.0
    }
}

/// Uniform levels on `[-m - 0.5, m + 0.5]`.
pub fn default_k_grid(m: f64) -> Vec<f64> {
    let hi = m.abs() + 0.5;
    let n = DEFAULT_K_POINTS;
    (0..n)
        .map(|j| -hi + 2.0 * hi * j as f64 / (n - 1) as f64)
        .collect()
}

/// `[sgn(tr - k) - sgn(u_b - k)] [f(tr) - f(k)] ν` at one boundary point.
pub fn bln_residual(flux: &FluxModel, side: Side, xi: f64, t: f64, tr: f64, ub: f64, k: f64) -> f64 {
    (sgn(tr - k) - sgn(ub - k)) * (flux.f(t, xi, tr) - flux.f(t, xi, k)) * side.normal()
}

fn boundary_point(tr: &TraceSeries, a: f64, b: f64) -> f64 {
    match tr.side {
        Side::Left => a,
        Side::Right => b,
    }
}

/// Evaluates the boundary entropy inequality at every time level and every
/// `k` in `k_grid`, plus the exact values `u_b(t)` and `tr u(t)`.
/// `(a, b)` locates the boundary point handed to the flux.
pub fn check_bln_inequality(
    tr: &TraceSeries,
    ub: &BoundaryData,
    flux: &FluxModel,
    (a, b): (f64, f64),
    k_grid: &[f64],
    tol: f64,
) -> ResidualReport {
    let side = tr.side;
    let xi = boundary_point(tr, a, b);
    let mut per_k: Vec<KRow> = k_grid
        .iter()
        .map(|&k| KRow {
            k,
            min_residual: f64::INFINITY,
            witness: Witness::default(),
        })
        .collect();
    let mut arg_min = Witness {
        value: f64::INFINITY,
        ..Witness::default()
    };
    let mut level_min = Vec::with_capacity(tr.len());
    for (&t, &v) in tr.times.iter().zip(&tr.values) {
        let g = ub.value(side, t);
        let mut m = f64::INFINITY;
        let note = |k: f64, r: f64, m: &mut f64, arg: &mut Witness| {
            if r < *m {
                *m = r;
            }
            if r < arg.value {
                *arg = Witness {
                    t: Some(t),
                    k: Some(k),
                    value: r,
                    ..Witness::default()
                };
            }
        };
        for row in per_k.iter_mut() {
            let r = bln_residual(flux, side, xi, t, v, g, row.k);
            if r < row.min_residual {
                row.min_residual = r;
                row.witness = Witness {
                    t: Some(t),
                    k: Some(row.k),
                    value: r,
                    ..Witness::default()
                };
            }
            note(row.k, r, &mut m, &mut arg_min);
        }
        for k in [g, v] {
            note(k, bln_residual(flux, side, xi, t, v, g, k), &mut m, &mut arg_min);
        }
        level_min.push(m);
    }
    let violating: Vec<bool> = level_min.iter().map(|&m| m < -tol).collect();
    let (ok, warnings) = classify_levels(&violating, &tr.times);
    ResidualReport {
        check: format!("bln_inequality_{}", side_name(side)),
        min_residual: arg_min.value,
        arg_min,
        tolerance: tol,
        verdict: Verdict::from_bool(ok),
        per_k,
        per_level: tr
            .times
            .iter()
            .zip(&level_min)
            .map(|(&t, &value)| LevelRow { t, value })
            .collect(),
        warnings,
    }
}

/// At each time level, the minimum over `k` between `u_b` and `tr u` of
/// `sgn(tr - u_b) [f(tr) - f(k)] ν`, which must vanish.
pub fn check_bln_min(tr: &TraceSeries, ub: &BoundaryData, flux: &FluxModel, (a, b): (f64, f64), tol: f64) -> ResidualReport {
    let side = tr.side;
    let xi = boundary_point(tr, a, b);
    let n = BLN_MIN_SAMPLES;
    let mut worst = Witness::default();
    let mut per_level = Vec::with_capacity(tr.len());
    for (&t, &v) in tr.times.iter().zip(&tr.values) {
        let g = ub.value(side, t);
        let s = sgn(v - g);
        let fv = flux.f(t, xi, v);
        let (lo, hi) = (g.min(v), g.max(v));
        let (mut m, mut km) = (f64::INFINITY, lo);
        for j in 0..n {
            let k = if j == n - 1 { hi } else { lo + (hi - lo) * j as f64 / (n - 1) as f64 };
            let r = s * (fv - flux.f(t, xi, k)) * side.normal();
            if r < m {
                m = r;
                km = k;
            }
        }
        if m.abs() > worst.value.abs() || worst.t.is_none() {
            worst = Witness {
                t: Some(t),
                k: Some(km),
                value: m,
                ..Witness::default()
            };
        }
        per_level.push(LevelRow { t, value: m });
    }
    let violating: Vec<bool> = per_level.iter().map(|r| r.value.abs() > tol).collect();
    let (ok, warnings) = classify_levels(&violating, &tr.times);
    ResidualReport {
        check: format!("bln_min_{}", side_name(side)),
        min_residual: worst.value,
        arg_min: worst,
        tolerance: tol,
        verdict: Verdict::from_bool(ok),
        per_k: Vec::new(),
        per_level,
        warnings,
    }
}

fn side_name(side: Side) -> &'static str {
    match side {
        Side::Left => "left",
        Side::Right => "right",
    }
}
