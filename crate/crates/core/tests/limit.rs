use bln_core::catalog::{build, burgers, exact_solution, linear, CatalogParams};
use bln_core::limit::*;
use bln_core::model::{BoundaryData, Domain1D, FluxModel, GridFunction1D, Problem, SourceModel};
use bln_core::viscous::{cfl_grid, Field, Grid1D};
use bln_core::Error;

fn catalog(name: &str) -> Problem {
    build(name, &CatalogParams::default()).unwrap()
}

fn grid(p: &Problem, nx: usize, courant: f64) -> Grid1D {
    let dx = p.domain.length() / (nx - 1) as f64;
    let nt = (p.horizon / (courant * dx)).round() as usize;
    Grid1D::uniform(&p.domain, p.horizon, nx, nt).unwrap()
}

#[test]
fn fv_shock_travels_at_half_speed() {
    let p = catalog("burgers_shock");
    let g = grid(&p, 401, 0.4);
    let u = solve_fv_entropy(&p, &g).unwrap();
    for k in [g.nt / 2, g.nt] {
        let t = g.t(k);
        let row = u.row(k);
        // position where the profile crosses 1/2
        let i = row.iter().position(|&v| v < 0.5).unwrap();
        let x = g.x(i);
        assert!((x - (0.5 + 0.5 * t)).abs() <= 3.0 * g.dx(), "t={t}: shock at {x}");
    }
}

#[test]
fn fv_outflow_keeps_interior_state() {
    let p = catalog("bln_outflow");
    let u = solve_fv_entropy(&p, &grid(&p, 201, 0.4)).unwrap();
    assert!(u.data().iter().all(|&v| (v + 1.0).abs() < 1e-12));
}

#[test]
fn fv_pure_decay() {
    let s = SourceModel::new("minus_u", |_, _, u| -u);
    let init = GridFunction1D::constant(0.0, 1.0, 1.0);
    let p = Problem::new("decay", Domain1D::unit(), 1.0, FluxModel::zero(), s, init, BoundaryData::zero()).unwrap();
    let g = Grid1D::uniform(&p.domain, 1.0, 11, 1000).unwrap();
    let u = solve_fv_entropy(&p, &g).unwrap();
    for k in 0..=g.nt {
        let e = (-g.t(k)).exp();
        assert!(u.row(k).iter().all(|v| (v - e).abs() <= g.dt), "t={}", g.t(k));
    }
}

#[test]
fn fv_rejects_cfl_violation() {
    let p = catalog("burgers_shock");
    let g = grid(&p, 101, 0.9);
    assert!(matches!(solve_fv_entropy(&p, &g), Err(Error::Cfl { .. })));
}

#[test]
fn fv_is_order_preserving() {
    let init = |shift: f64| GridFunction1D::from_fn(0.0, 1.0, 201, move |x| (6.0 * x).sin() * 0.8 + shift * x * (1.0 - x)).unwrap();
    let d = Domain1D::unit();
    let mk = |s| Problem::new("o", d, 0.3, burgers(), SourceModel::zero(), init(s), BoundaryData::constant(0.1, -0.2)).unwrap();
    let (p, q) = (mk(0.0), mk(0.5));
    let g = Grid1D::uniform(&d, 0.3, 201, 300).unwrap();
    let (u, v) = (solve_fv_entropy(&p, &g).unwrap(), solve_fv_entropy(&q, &g).unwrap());
    assert!(u.data().iter().zip(v.data()).all(|(a, b)| a <= b));
}

#[test]
fn zero_problem_sweep_is_identically_zero() {
    let p = catalog("zero");
    let g = Grid1D::uniform(&p.domain, p.horizon, 101, 100).unwrap();
    let (u, c) = vanishing_viscosity_solve(&p, &EpsSchedule::default_for(&g).unwrap(), &g).unwrap();
    assert_eq!(u.sup_norm(), 0.0);
    assert!(c.distances.iter().all(|&d| d == 0.0));
}

#[test]
fn advection_distances_contract() {
    let p = catalog("linear_advection");
    let g = cfl_grid(&p, 401, 0.5).unwrap();
    let (_, c) = vanishing_viscosity_solve(&p, &EpsSchedule::default_for(&g).unwrap(), &g).unwrap();
    assert!(c.monotone, "{:?}", c.distances);
    let mean = c.ratios.iter().sum::<f64>() / c.ratios.len() as f64;
    assert!(mean <= 0.8, "{:?}", c.ratios);
}

#[test]
fn rarefaction_limit_matches_fv() {
    let p = catalog("burgers_rarefaction");
    let g = cfl_grid(&p, 401, 0.5).unwrap();
    let (u, _) = vanishing_viscosity_limit(&p, &EpsSchedule::default_for(&g).unwrap(), &g).unwrap();
    let r = fv_reference(&p, &g).unwrap();
    assert!(u.l1_distance(&r).unwrap() <= 2e-2 * p.horizon);
}

#[test]
fn non_homogeneous_problem_needs_full_solve() {
    let p = catalog("minus_x_flux");
    let g = Grid1D::uniform(&p.domain, p.horizon, 51, 100).unwrap();
    assert!(matches!(
        vanishing_viscosity_solve(&p, &EpsSchedule::default_for(&g).unwrap(), &g),
        Err(Error::Hypothesis(_))
    ));
}

#[test]
fn full_solve_with_zero_boundary_is_the_plain_sweep() {
    let p = catalog("linear_advection");
    let g = cfl_grid(&p, 201, 0.5).unwrap();
    let sched = EpsSchedule::default_for(&g).unwrap();
    let s = full_solve(&p, &sched, &g, &FullSolveOptions::default()).unwrap();
    let (u, c) = vanishing_viscosity_solve(&p, &sched, &g).unwrap();
    assert_eq!(s.field.data(), u.data());
    assert_eq!(s.cauchy, c);
    assert_eq!(s.mollified, None);
}

fn exact_field(name: &str, g: Grid1D) -> Field {
    let e = exact_solution(name).unwrap();
    Field::from_fn(g, 0.0, e)
}

#[test]
fn full_solve_recovers_exact_solutions() {
    for (name, tol) in [("minus_x_flux", 5e-3), ("advection_inflow_ramp", 2e-2)] {
        let p = catalog(name);
        let g = cfl_grid(&p, 201, 0.5).unwrap();
        let s = full_solve(&p, &EpsSchedule::default_for(&g).unwrap(), &g, &FullSolveOptions::default()).unwrap();
        let err = s.field.l1_distance(&exact_field(name, g)).unwrap();
        assert!(err <= tol, "{name}: {err}");
    }
}

#[test]
fn incompatible_data_needs_mollification() {
    let init = GridFunction1D::from_fn(0.0, 1.0, 1001, |_| 0.5).unwrap();
    let p = Problem::new("c", Domain1D::unit(), 0.2, linear(1.0), SourceModel::zero(), init, BoundaryData::zero()).unwrap();
    let g = cfl_grid(&p, 101, 0.5).unwrap();
    let sched = EpsSchedule::default_for(&g).unwrap();
    let off = FullSolveOptions {
        mollify: None,
        sampling: None,
    };
    assert!(matches!(full_solve(&p, &sched, &g, &off), Err(Error::Compatibility(_))));
    let s = full_solve(&p, &sched, &g, &FullSolveOptions::default()).unwrap();
    assert_eq!(s.mollified, Some(16));
    assert_eq!(s.problem.initial.first(), 0.0);
}

#[test]
fn nonzero_initial_boundary_value_is_rejected() {
    let p = catalog("bln_outflow");
    let g = cfl_grid(&p, 101, 0.5).unwrap();
    assert!(matches!(
        full_solve(&p, &EpsSchedule::default_for(&g).unwrap(), &g, &FullSolveOptions::default()),
        Err(Error::Compatibility(_))
    ));
}

#[test]
fn mollified_runs_converge() {
    let init = GridFunction1D::from_fn(0.0, 1.0, 2001, |x| 0.5 + 0.3 * x).unwrap();
    let p = Problem::new("m", Domain1D::unit(), 0.2, linear(1.0), SourceModel::zero(), init, BoundaryData::zero()).unwrap();
    let g = cfl_grid(&p, 201, 0.5).unwrap();
    let d = mollification_sweep(&p, 4, 4, &EpsSchedule::default_for(&g).unwrap(), &g).unwrap();
    assert!(d.windows(2).all(|w| w[1].1 < w[0].1), "{d:?}");
}

#[test]
fn schedule_validation() {
    let g = Grid1D::new(0.0, 1.0, 101, 10, 0.01).unwrap();
    assert!(EpsSchedule::new(vec![]).is_err());
    assert!(EpsSchedule::new(vec![0.1, 0.2]).is_err());
    assert!(EpsSchedule::new(vec![1e-4]).unwrap().check_resolvable(&g).is_err());
    let s = EpsSchedule::default_for(&g).unwrap();
    assert_eq!(s.len(), DEFAULT_LEVELS);
    assert!(s.smallest() >= EPS_FLOOR_DX * g.dx());
}
