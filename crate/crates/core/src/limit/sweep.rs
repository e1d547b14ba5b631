use log::{info, warn};
use serde::{Deserialize, Serialize};

use super::fv::solve_fv_entropy_with;
use super::schedule::{CauchyReport, EpsSchedule};
use crate::bounds::{compute_final_bounds, BoundSet};
use crate::error::{Error, Result};
use crate::lift::{solve_harmonic_lift, translate_problem, untranslate_solution};
use crate::model::{mollify_initial_datum, Problem, SamplingSpec, Side};
use crate::par;
use crate::viscous::{solve_viscous_with, Field, Grid1D, ViscousOptions};

/// Solves at every viscosity of the schedule; no hypothesis on the data.
pub fn direct_viscous_sweep(p: &Problem, sched: &EpsSchedule, grid: &Grid1D) -> Result<(Vec<Field>, CauchyReport)> {
    sched.check_resolvable(grid)?;
    let opts = ViscousOptions::for_problem(p);
    let fields = par::try_map(sched.values(), |&eps| {
        solve_viscous_with(p, eps, grid, &opts).map_err(|e| Error::AtEpsilon {
            eps,
            source: Box::new(e),
        })
    })?;
    let report = CauchyReport::from_fields(sched.values(), &fields)?;
    if !report.monotone || report.non_contracting_tail {
        info!("`{}`: Cauchy distances do not contract: {:?}", p.label, report.distances);
    }
    Ok((fields, report))
}

/// Vanishing-viscosity program for homogeneous boundary data. Returns the
/// smallest-`ε` field as the limit candidate.
pub fn vanishing_viscosity_solve(p: &Problem, sched: &EpsSchedule, grid: &Grid1D) -> Result<(Field, CauchyReport)> {
    if !p.boundary.is_homogeneous(p.horizon) {
        return Err(Error::Hypothesis(
            "vanishing_viscosity_solve needs u_b ≡ 0; use full_solve for other boundary data".into(),
        ));
    }
    let (mut fields, report) = direct_viscous_sweep(p, sched, grid)?;
    Ok((fields.pop().expect("non-empty schedule"), report))
}

/// Same as [`direct_viscous_sweep`], keeping only the smallest-`ε` field.
pub fn direct_viscous_limit(p: &Problem, sched: &EpsSchedule, grid: &Grid1D) -> Result<(Field, CauchyReport)> {
    let (mut fields, report) = direct_viscous_sweep(p, sched, grid)?;
    Ok((fields.pop().expect("non-empty schedule"), report))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FullSolveOptions {
    /// Mollification index used when `u_o` does not vanish at the endpoints;
    /// `None` turns an incompatibility into an error.
    pub mollify: Option<usize>,
    pub sampling: Option<SamplingSpec>,
}

impl Default for FullSolveOptions {
    fn default() -> Self {
        FullSolveOptions {
            mollify: Some(16),
            sampling: None,
        }
    }
}

#[derive(Clone, Debug)]
pub struct FullSolution {
    pub field: Field,
    pub cauchy: CauchyReport,
    pub bounds: BoundSet,
    /// Mollification index actually applied.
    pub mollified: Option<usize>,
    /// The problem actually solved (mollified data when applicable).
    pub problem: Problem,
}

/// Lift, translate, (mollify), sweep, untranslate, then attach bounds.
pub fn full_solve(p: &Problem, sched: &EpsSchedule, grid: &Grid1D, opts: &FullSolveOptions) -> Result<FullSolution> {
    for side in Side::BOTH {
        let v = p.boundary.value(side, 0.0);
        if v != 0.0 {
            return Err(Error::Compatibility(format!(
                "full_solve needs u_b(0, ξ) = 0, got {v} at x = {}",
                p.domain.point(side)
            )));
        }
    }
    let (mut solved, mut mollified) = (p.clone(), None);
    if p.initial.first() != 0.0 || p.initial.last() != 0.0 {
        let m = opts.mollify.ok_or_else(|| {
            Error::Compatibility(format!(
                "u_o(ξ) = 0 = u_b(0, ξ) fails (u_o(a) = {}, u_o(b) = {}) and mollification is disabled",
                p.initial.first(),
                p.initial.last()
            ))
        })?;
        solved = p.with_initial(mollify_initial_datum(&p.initial, m)?)?;
        mollified = Some(m);
    }
    let lift = solve_harmonic_lift(&solved.boundary, grid);
    let translated = translate_problem(&solved, &lift)?;
    let (v, cauchy) = vanishing_viscosity_solve(&translated, sched, grid)?;
    let field = untranslate_solution(&v, &lift)?;
    let spec = opts.sampling.unwrap_or_else(|| SamplingSpec::for_horizon(p.horizon));
    let bounds = compute_final_bounds(&solved, &spec)?;
    if !p.boundary.is_homogeneous(p.horizon) {
        info!(
            "`{}`: only u_o(ξ) = u_b(0, ξ) is enforced; higher-order compatibility at t = 0 is not checked",
            p.label
        );
        if bounds.lift.is_some_and(|h| h.heuristic) {
            warn!(
                "`{}`: Hoelder norms of u_b are sampled, not certified; translated bounds are estimates",
                p.label
            );
        }
    }
    Ok(FullSolution {
        field,
        cauchy,
        bounds,
        mollified,
        problem: solved,
    })
}

/// Limit candidate for any instance: the homogeneous program, the lifted
/// pipeline when `u_b(0, ·) = 0`, and a direct sweep otherwise.
pub fn vanishing_viscosity_limit(p: &Problem, sched: &EpsSchedule, grid: &Grid1D) -> Result<(Field, CauchyReport)> {
    if p.boundary.is_homogeneous(p.horizon) {
        return vanishing_viscosity_solve(p, sched, grid);
    }
    let zero_start = Side::BOTH.iter().all(|&s| p.boundary.value(s, 0.0) == 0.0);
    if zero_start && p.boundary.holder().is_some() {
        let s = full_solve(p, sched, grid, &FullSolveOptions::default())?;
        return Ok((s.field, s.cauchy));
    }
    direct_viscous_limit(p, sched, grid)
}

/// FV reference on the same grid as a viscous field.
pub fn fv_reference(p: &Problem, grid: &Grid1D) -> Result<Field> {
    solve_fv_entropy_with(p, grid, &ViscousOptions::for_problem(p))
}

/// Final-time `L1` distances between solutions for successive mollification
/// indices `m0, 2 m0, …`.
pub fn mollification_sweep(
    p: &Problem,
    m0: usize,
    levels: usize,
    sched: &EpsSchedule,
    grid: &Grid1D,
) -> Result<Vec<(usize, f64)>> {
    let ms: Vec<usize> = (0..levels).map(|j| m0 << j).collect();
    let opts: Vec<FullSolveOptions> = ms
        .iter()
        .map(|&m| FullSolveOptions {
            mollify: Some(m),
            sampling: None,
        })
        .collect();
    let finals = opts
        .iter()
        .map(|o| full_solve(p, sched, grid, o).map(|s| s.field))
        .collect::<Result<Vec<Field>>>()?;
    let nt = grid.nt;
    Ok(ms
        .windows(2)
        .zip(finals.windows(2))
        .map(|(m, f)| (m[0], f[0].row_l1_distance(nt, f[1].row(nt))))
        .collect())
}
