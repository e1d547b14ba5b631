//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
//! failure.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use bln_core::bounds::compute_final_bounds;
use bln_core::catalog::{self, build, burgers, linear, random_problem, CatalogParams};
use bln_core::lift::{solve_harmonic_lift, translate_problem, untranslate_solution};
use bln_core::limit::{
    direct_viscous_sweep, full_solve, fv_reference, solve_fv_entropy, vanishing_viscosity_limit,
    vanishing_viscosity_solve, EpsSchedule, FullSolveOptions,
};
use bln_core::model::{
    BoundaryData, Domain1D, GridFunction1D, Problem, SamplingSpec, Side, SourceModel, SupNormReport,
};
use bln_core::verify::{
    bln_residual, check_bln_inequality, check_bln_min, check_stability, default_k_grid, entropy_residual,
    extract_trace, kruzkov_pairs, quad_tolerance, residual_matrix, test_family, ResidualOptions,
    DEFAULT_QUAD_CONSTANT,
};
use bln_core::viscous::{cfl_grid, solve_viscous, time_lipschitz_deficit, Field, Grid1D};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn catalog(name: &str) -> Problem {
    build(name, &CatalogParams::default()).expect("catalog entry")
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn exact_solution_regression() -> Outcome {
    let start = Instant::now();
    let p = catalog("minus_x_flux");
    let g = cfl_grid(&p, 201, 0.5).map_err(err)?;
    let s = full_solve(&p, &EpsSchedule::default_for(&g).map_err(err)?, &g, &FullSolveOptions::default())
        .map_err(err)?;
    let exact = Field::from_fn(g, 0.0, |t, _| t);
    let e = s.field.l1_distance(&exact).map_err(err)?;
    let took = start.elapsed();
    check(
        e <= 5e-3 && took < Duration::from_secs(5),
        format!("L1 error {e:.3e} (limit 5e-3), {took:.2?} (limit 5s)"),
    )
}

struct SuiteResult {
    linf: Outcome,
    tv: Outcome,
    lip: Outcome,
}

/// Criteria 2 to 4 share one sweep per instance.
fn random_suite() -> SuiteResult {
    let start = Instant::now();
    let mut worst_linf = f64::NEG_INFINITY;
    let mut worst_tv = f64::NEG_INFINITY;
    let mut worst_lip = f64::NEG_INFINITY;
    let mut solves = 0;
    let mut failure = None;
    for seed in 0..50u64 {
        let run = || -> Result<(f64, f64, f64, usize), String> {
            let p = random_problem(seed, 3.0).map_err(err)?;
            let bounds = compute_final_bounds(&p, &SamplingSpec::for_horizon(p.horizon)).map_err(err)?;
            if bounds.m(p.horizon) > 3.0 {
                return Err(format!("seed {seed}: M(T) = {} exceeds 3", bounds.m(p.horizon)));
            }
            let g = cfl_grid(&p, 201, 0.5).map_err(err)?;
            let sched = EpsSchedule::default_for(&g).map_err(err)?;
            let (fields, _) = direct_viscous_sweep(&p, &sched, &g).map_err(err)?;
            let (mut linf, mut tv, mut lip) = (f64::NEG_INFINITY, f64::NEG_INFINITY, f64::NEG_INFINITY);
            for u in &fields {
                let scale = (1.0 + u.sup_norm()) * p.domain.length() * p.horizon;
                for k in 0..u.n_rows() {
                    let t = g.t(k);
                    linf = linf.max(u.row_sup(k) - bounds.m(t) - 1e-6);
                    tv = tv.max((u.row_tv(k) - bounds.l_eps(t, u.epsilon)) / scale - 1e-3);
                }
                lip = lip.max(time_lipschitz_deficit(u, &bounds) / scale - 1e-2);
            }
            Ok((linf, tv, lip, fields.len()))
        };
        match run() {
            Ok((a, b, c, n)) => {
                worst_linf = worst_linf.max(a);
                worst_tv = worst_tv.max(b);
                worst_lip = worst_lip.max(c);
                solves += n;
            }
            Err(e) => {
                failure = Some(e);
                break;
            }
        }
    }
    let took = start.elapsed();
    if let Some(e) = failure {
        return SuiteResult {
            linf: Err(e.clone()),
            tv: Err(e.clone()),
            lip: Err(e),
        };
    }
    let timing = format!("{solves} solves in {took:.2?} (limit 60s)");
    let in_time = took < Duration::from_secs(60);
    SuiteResult {
        linf: check(
            worst_linf <= 0.0 && in_time,
            format!("max(|u| - M(t) - 1e-6) = {worst_linf:.3e}; {timing}"),
        ),
        tv: check(
            worst_tv <= 0.0,
            format!("max((TV - L_eps)/scale - 1e-3) = {worst_tv:.3e}"),
        ),
        lip: check(
            worst_lip <= 0.0,
            format!("max(deficit/scale - 1e-2) = {worst_lip:.3e}"),
        ),
    }
}

fn cauchy_property() -> Outcome {
    let mut lines = Vec::new();
    let mut ok = true;
    for name in ["linear_advection", "burgers_rarefaction"] {
        let p = catalog(name);
        let g = cfl_grid(&p, 401, 0.5).map_err(err)?;
        let sched = EpsSchedule::default_for(&g).map_err(err)?;
        let (_, c) = vanishing_viscosity_solve(&p, &sched, &g).map_err(err)?;
        ok &= c.monotone && c.distances.len() == 5 && c.last_over_first <= 0.25;
        lines.push(format!(
            "{name}: monotone={} d_last/d_first={:.3}",
            c.monotone, c.last_over_first
        ));
    }
    check(ok, lines.join("; "))
}

fn oracle_equivalence() -> Outcome {
    let mut worst: f64 = 0.0;
    let mut arg = "";
    let mut ok = true;
    for name in catalog::NAMES {
        let p = catalog(name);
        let g = cfl_grid(&p, 401, 0.5).map_err(err)?;
        let sched = EpsSchedule::default_for(&g).map_err(err)?;
        let (u, _) = vanishing_viscosity_limit(&p, &sched, &g).map_err(|e| format!("{name}: {e}"))?;
        let r = fv_reference(&p, &g).map_err(|e| format!("{name}: {e}"))?;
        let rel = u.l1_distance(&r).map_err(err)? / (p.domain.length() * p.horizon);
        ok &= rel <= 2e-2;
        if rel >= worst {
            worst = rel;
            arg = name;
        }
    }
    check(
        ok,
        format!("max ||u_inf - u_FV|| / ((b-a)T) = {worst:.3e} on {arg} (limit 2e-2), {} instances", catalog::NAMES.len()),
    )
}

fn bln_boundary_condition() -> Outcome {
    let p = catalog("bln_outflow");
    let g = cfl_grid(&p, 401, 0.5).map_err(err)?;
    let (u, _) = vanishing_viscosity_limit(&p, &EpsSchedule::default_for(&g).map_err(err)?, &g).map_err(err)?;
    let tr = extract_trace(&u, Side::Left).map_err(err)?;
    let dev = tr.values.iter().map(|v| (v + 1.0).abs()).fold(0.0, f64::max);
    let gap = tr
        .times
        .iter()
        .zip(&tr.values)
        .map(|(&t, v)| (v - p.boundary.value(Side::Left, t)).abs())
        .fold(f64::INFINITY, f64::min);
    let ab = (p.domain.a, p.domain.b);
    let m = compute_final_bounds(&p, &SamplingSpec::for_horizon(p.horizon)).map_err(err)?.m(p.horizon);
    let ineq = check_bln_inequality(&tr, &p.boundary, &p.flux, ab, &default_k_grid(m), 1e-2);
    let min = check_bln_min(&tr, &p.boundary, &p.flux, ab, 1e-2);
    let witness = bln_residual(&p.flux, Side::Left, p.domain.a, 0.0, -1.0, 0.5, 0.0);
    check(
        dev <= 2e-2 && gap > 0.0 && ineq.passed() && min.passed() && witness == 1.0,
        format!(
            "max |tr + 1| = {dev:.3e}, min |tr - u_b| = {gap:.3}, inequality {:?} (min {:.2e}), min-form {:?} (worst {:.2e}), witness(k=0) = {witness}",
            ineq.verdict, ineq.min_residual, min.verdict, min.min_residual
        ),
    )
}

fn entropy_residuals() -> Outcome {
    let p = catalog("constant");
    let g = cfl_grid(&p, 201, 0.5).map_err(err)?;
    let c = Field::from_fn(g, 0.0, |_, _| 0.5);
    let fam = test_family(&p.domain, p.horizon, 16, 7).map_err(err)?;
    let mat = residual_matrix(&c, &p, &kruzkov_pairs(&default_k_grid(0.5)), &fam).map_err(err)?;
    let constant_zero = mat.iter().flatten().all(|&r| r == 0.0);
    let mut ok = constant_zero;
    let mut lines = vec![format!("constant residual exactly 0: {constant_zero}")];
    for name in ["burgers_shock", "burgers_rarefaction"] {
        let p = catalog(name);
        let mut tols = Vec::new();
        let mut mins = Vec::new();
        for nx in [101usize, 201, 401] {
            let dx = p.domain.length() / (nx - 1) as f64;
            let nt = (p.horizon / (0.4 * dx)).round() as usize;
            let g = Grid1D::uniform(&p.domain, p.horizon, nx, nt).map_err(err)?;
            let u = solve_fv_entropy(&p, &g).map_err(err)?;
            let rep = entropy_residual(&u, &p, &kruzkov_pairs(&default_k_grid(1.0)), &fam, &ResidualOptions::default())
                .map_err(err)?;
            ok &= rep.passed() && rep.min_residual >= -rep.tolerance;
            tols.push(quad_tolerance(&u, &fam[0], DEFAULT_QUAD_CONSTANT));
            mins.push(rep.min_residual);
        }
        let shrink: Vec<f64> = tols.windows(2).map(|w| w[0] / w[1]).collect();
        ok &= shrink.iter().all(|&s| s >= 1.5);
        lines.push(format!(
            "{name}: min residual {:?}, tol shrink {:?}",
            mins.iter().map(|m| format!("{m:.2e}")).collect::<Vec<_>>(),
            shrink.iter().map(|s| format!("{s:.2}")).collect::<Vec<_>>()
        ));
    }
    check(ok, lines.join("; "))
}

fn sup_norms(p: &Problem, radius: f64) -> Result<SupNormReport, String> {
    SupNormReport::compute(&p.flux, &p.source, &p.domain, p.horizon, radius, &SamplingSpec::for_horizon(p.horizon))
        .map_err(err)
}

fn stability() -> Outcome {
    let d = Domain1D::unit();
    let horizon = 0.5;
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mk = |c: [f64; 3]| {
        let init = GridFunction1D::from_fn(0.0, 1.0, 1001, move |x| {
            let s = 2.0 * x - 1.0;
            4.0 * x * (1.0 - x) * (c[0] + c[1] * s + c[2] * s * s)
        })?;
        Problem::new("burgers_pair", d, horizon, burgers(), SourceModel::zero(), init, BoundaryData::zero())
    };
    let g = Grid1D::uniform(&d, horizon, 201, 400).map_err(err)?;
    let eps = EpsSchedule::default_for(&g).map_err(err)?.smallest();
    let mut worst = f64::INFINITY;
    let mut ok = true;
    for _ in 0..20 {
        let mut coeffs = || [rng.gen_range(-1.0..1.0), rng.gen_range(-0.5..0.5), rng.gen_range(-0.5..0.5)];
        let (pu, pv) = (mk(coeffs()).map_err(err)?, mk(coeffs()).map_err(err)?);
        let (u, v) = (solve_viscous(&pu, eps, &g).map_err(err)?, solve_viscous(&pv, eps, &g).map_err(err)?);
        let scale = (1.0 + u.sup_norm().max(v.sup_norm())) * d.length() * horizon;
        let norms = sup_norms(&pu, 2.0)?;
        let rep = check_stability(&u, &v, &pu, &pv, &norms, 1e-2 * scale).map_err(err)?;
        ok &= rep.passed() && rep.l_big_f == 0.0;
        worst = worst.min(rep.min_margin);
    }
    // Boundary perturbation on linear advection.
    let delta = 0.1;
    let init = GridFunction1D::from_fn(0.0, 1.0, 1001, catalog::bump(0.5, 0.2)).map_err(err)?;
    let pu = Problem::new("adv", d, horizon, linear(1.0), SourceModel::zero(), init, BoundaryData::zero()).map_err(err)?;
    let pv = pu.with_boundary(BoundaryData::constant(delta, 0.0));
    let g = cfl_grid(&pu, 201, 0.5).map_err(err)?;
    let eps = EpsSchedule::default_for(&g).map_err(err)?.smallest();
    let (u, v) = (solve_viscous(&pu, eps, &g).map_err(err)?, solve_viscous(&pv, eps, &g).map_err(err)?);
    let norms = sup_norms(&pu, 1.5)?;
    let scale = (1.0 + u.sup_norm().max(v.sup_norm())) * d.length() * horizon;
    let rep = check_stability(&u, &v, &pu, &pv, &norms, 1e-2 * scale).map_err(err)?;
    ok &= rep.passed();
    check(
        ok,
        format!(
            "20 Burgers pairs: min margin {worst:.3e}; boundary pair (L_f = {:.3}): margin {:.3e}",
            rep.l_f, rep.min_margin
        ),
    )
}

fn elliptic_lift() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let mut equalities = true;
    for _ in 0..100 {
        let c: [f64; 6] = std::array::from_fn(|_| rng.gen_range(-2.0..2.0));
        let w = rng.gen_range(0.5..6.0);
        let bd = BoundaryData::new(
            move |t| c[0] + c[1] * t + c[2] * (w * t).sin(),
            move |t| c[3] + c[4] * t * t + c[5] * (w * t).cos(),
        )
        .with_dt(move |t| c[1] + c[2] * w * (w * t).cos(), move |t| 2.0 * c[4] * t - c[5] * w * (w * t).sin());
        let (a, b) = (rng.gen_range(-1.0..0.0), rng.gen_range(0.5..2.0));
        let g = Grid1D::new(a, b, rng.gen_range(4..120), 25, 0.04).map_err(err)?;
        let lift = solve_harmonic_lift(&bd, &g);
        for k in 0..=g.nt {
            let t = g.t(k);
            let psi = bd.value(Side::Left, t).abs().max(bd.value(Side::Right, t).abs());
            let dpsi = bd.dt_value(Side::Left, t).abs().max(bd.dt_value(Side::Right, t).abs());
            equalities &= lift.z.row_sup(k) == psi && lift.dt_z.row_sup(k) == dpsi;
        }
    }
    let p = catalog("advection_inflow_ramp");
    let g = cfl_grid(&p, 201, 0.5).map_err(err)?;
    let lift = solve_harmonic_lift(&p.boundary, &g);
    let q = translate_problem(&p, &lift).map_err(err)?;
    let (v, _) = vanishing_viscosity_solve(&q, &EpsSchedule::default_for(&g).map_err(err)?, &g).map_err(err)?;
    let u = untranslate_solution(&v, &lift).map_err(err)?;
    let mut worst: f64 = 0.0;
    for k in 0..=g.nt {
        let t = g.t(k);
        worst = worst.max((u.at(k, 0) - p.boundary.value(Side::Left, t)).abs());
        worst = worst.max((u.at(k, g.nx - 1) - p.boundary.value(Side::Right, t)).abs());
    }
    check(
        equalities && worst <= g.dt,
        format!("el1/el2 equalities on 100 instances: {equalities}; round-trip boundary error {worst:.3e} (dt = {:.3e})", g.dt),
    )
}

fn main() -> ExitCode {
    let total = Instant::now();
    let suite = random_suite();
    let results: Vec<(&str, Outcome)> = vec![
        ("1 exact-solution regression (minus_x_flux)", exact_solution_regression()),
        ("2 L-infinity a priori bound", suite.linf),
        ("3 total-variation bound", suite.tv),
        ("4 time-Lipschitz bound", suite.lip),
        ("5 epsilon-Cauchy property", cauchy_property()),
        ("6 oracle equivalence", oracle_equivalence()),
        ("7 BLN boundary condition", bln_boundary_condition()),
        ("8 entropy residual", entropy_residuals()),
        ("9 L1 stability", stability()),
        ("10 elliptic lift", elliptic_lift()),
    ];
    let mut failed = 0;
    for (name, r) in &results {
        match r {
            Ok(d) => println!("PASS criterion {name}: {d}"),
            Err(d) => {
                failed += 1;
                println!("FAIL criterion {name}: {d}");
            }
        }
    }
    println!("{} of {} criteria passed in {:.2?}", results.len() - failed, results.len(), total.elapsed());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
