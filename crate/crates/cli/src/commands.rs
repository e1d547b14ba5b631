use std::fs;
use std::path::Path;

use anyhow::{bail, Context as _, Result};
use log::info;

use bln_core::bounds::{compute_final_bounds, BoundSet};
use bln_core::catalog;
use bln_core::io::{self, BoundsFile, ReportFile};
use bln_core::limit::{direct_viscous_sweep, vanishing_viscosity_limit, CauchyReport, EpsSchedule};
use bln_core::model::{Problem, SamplingSpec, Side, SupNormReport};
use bln_core::verify::{
    check_bln_inequality, check_bln_min, check_initial_trace, check_stability, default_k_grid, entropy_residual,
    extract_trace, kruzkov_pairs, test_family, Record, ResidualOptions, TraceSummary,
};
use bln_core::viscous::{cfl_grid, Field, FieldMeta, Grid1D};

use crate::config::{Check, Config};

/// Rows of the bounds table written next to a field.
const BOUND_ROWS: usize = 17;

/// Smallest viscosity of a refinement level, in units of `dx`.
const REFINE_EPS_PER_DX: f64 = 0.1;

pub struct Outcome {
    pub passed: bool,
}

fn schedule(cfg: &Config, grid: &Grid1D) -> Result<EpsSchedule> {
    Ok(match &cfg.schedule.eps {
        Some(v) if v.is_empty() => bail!("schedule.eps is empty"),
        Some(v) => {
            let s = EpsSchedule::new(v.clone())?;
            s.check_resolvable(grid)?;
            s
        }
        None => EpsSchedule::default_for(grid)?,
    })
}

fn bounds(p: &Problem) -> Result<BoundSet> {
    Ok(compute_final_bounds(p, &SamplingSpec::for_horizon(p.horizon))?)
}

fn solve_field(cfg: &Config, p: &Problem) -> Result<(Field, CauchyReport)> {
    solve_on(cfg, p, cfl_grid(p, cfg.grid.nx, cfg.grid.courant)?)
}

fn solve_on(cfg: &Config, p: &Problem, g: Grid1D) -> Result<(Field, CauchyReport)> {
    let sched = schedule(cfg, &g)?;
    info!("solving {} on {} x {} nodes, eps {:?}", p.label, g.nx, g.nt + 1, sched.values());
    Ok(vanishing_viscosity_limit(p, &sched, &g)?)
}

fn meta(cfg: &Config, p: &Problem, u: &Field) -> FieldMeta {
    FieldMeta {
        epsilon: u.epsilon,
        grid: u.grid,
        problem_hash: cfg.instance_hash(),
        label: p.label.clone(),
    }
}

fn report_line(r: &Record) {
    println!(
        "{:?} {}: min {:.6e}, tol {:.3e}",
        r.verdict, r.check, r.min_residual, r.tolerance
    );
    for w in &r.warnings {
        println!("  warning: {w}");
    }
}

pub fn solve(cfg: &Config, out: &Path) -> Result<Outcome> {
    let p = cfg.build_problem()?;
    let b = bounds(&p)?;
    let (u, cauchy) = solve_field(cfg, &p)?;
    fs::create_dir_all(out).with_context(|| format!("creating {}", out.display()))?;
    io::write_field(out, &u, &meta(cfg, &p, &u))?;
    io::write_json(&out.join(io::BOUNDS_JSON), &BoundsFile::new(&cfg.instance_hash(), b, BOUND_ROWS))?;
    fs::write(out.join(io::SWEEP_CSV), io::sweep_csv(&cauchy))?;
    println!(
        "solved {}: eps_min {:.3e}, |u|_inf {:.6}, Cauchy monotone {}",
        p.label,
        u.epsilon,
        u.sup_norm(),
        cauchy.monotone
    );
    Ok(Outcome { passed: true })
}

pub fn verify(cfg: &Config, out: &Path) -> Result<Outcome> {
    let p = cfg.build_problem()?;
    let hash = cfg.instance_hash();
    let b = bounds(&p)?;
    let u = match &cfg.verify.field {
        Some(dir) => {
            let (u, m) = io::read_field(dir)?;
            if m.problem_hash != hash {
                bail!(
                    "field in {} was produced by configuration {}, not {hash}",
                    dir.display(),
                    m.problem_hash
                );
            }
            u
        }
        None => solve_field(cfg, &p)?.0,
    };
    let v = &cfg.verify;
    let m = u.sup_norm().max(b.ub_sup);
    let k_grid = default_k_grid(m);
    let mut report = ReportFile::default();
    if v.checks.contains(&Check::Entropy) {
        let fam = test_family(&p.domain, p.horizon, v.test_functions, v.seed)?;
        let opts = ResidualOptions {
            quad_constant: v.quad_constant,
        };
        let ent = entropy_residual(&u, &p, &kruzkov_pairs(&k_grid), &fam, &opts)?;
        report.records.push(ent.record(&hash));
    }
    if v.checks.contains(&Check::Bln) {
        let ab = (p.domain.a, p.domain.b);
        for side in Side::BOTH {
            let tr = extract_trace(&u, side)?;
            report
                .records
                .push(check_bln_inequality(&tr, &p.boundary, &p.flux, ab, &k_grid, v.bln_tol).record(&hash));
            report.records.push(check_bln_min(&tr, &p.boundary, &p.flux, ab, v.bln_tol).record(&hash));
            report.traces.push(TraceSummary::new(&tr, &p.boundary));
        }
    }
    if v.checks.contains(&Check::InitialTrace) {
        let lip = b.time_lip_constant(p.horizon);
        report.records.push(check_initial_trace(&u, &p.initial, lip).record(&hash));
    }
    fs::create_dir_all(out).with_context(|| format!("creating {}", out.display()))?;
    io::write_report(&out.join(io::REPORT_JSON), &report)?;
    report.records.iter().for_each(report_line);
    for t in &report.traces {
        println!(
            "trace {:?}: final {:.6} vs datum {:.6}, |tr - u_b| in [{:.3e}, {:.3e}]",
            t.side, t.trace_final, t.datum_final, t.min_gap, t.max_gap
        );
    }
    Ok(Outcome {
        passed: report.passed(),
    })
}

pub fn sweep(cfg: &Config, out: &Path) -> Result<Outcome> {
    let p = cfg.build_problem()?;
    let g = cfl_grid(&p, cfg.grid.nx, cfg.grid.courant)?;
    let sched = schedule(cfg, &g)?;
    if sched.len() < 2 {
        bail!("a sweep needs at least two viscosities, got {}", sched.len());
    }
    let (_, cauchy) = direct_viscous_sweep(&p, &sched, &g)?;
    fs::create_dir_all(out).with_context(|| format!("creating {}", out.display()))?;
    fs::write(out.join(io::SWEEP_CSV), io::sweep_csv(&cauchy))?;
    for (i, d) in cauchy.distances.iter().enumerate() {
        println!("d_{i} = {d:.6e} (eps {:.3e} -> {:.3e})", cauchy.eps[i], cauchy.eps[i + 1]);
    }
    println!(
        "{} cauchy: monotone {}, d_last/d_first {:.3}",
        if cauchy.monotone { "PASS" } else { "FAIL" },
        cauchy.monotone,
        cauchy.last_over_first
    );
    if !cfg.sweep.refine.is_empty() {
        let name = cfg.problem.catalog.as_deref().unwrap_or_default();
        let Some(exact) = catalog::exact_solution(name) else {
            bail!("grid refinement needs a catalog entry with a closed-form solution");
        };
        let mut rows = Vec::new();
        for &nx in &cfg.sweep.refine {
            let g = cfl_grid(&p, nx, cfg.grid.courant)?;
            // eps tracks dx so the study measures the discretisation alone
            let sched = EpsSchedule::geometric(REFINE_EPS_PER_DX * g.dx() * 32.0, 6)?;
            let (u, _) = vanishing_viscosity_limit(&p, &sched, &g)?;
            let e = u.l1_distance(&Field::from_fn(g, 0.0, exact))? / (p.domain.length() * p.horizon);
            println!("nx {nx}: relative L1 error {e:.6e}");
            rows.push((nx, g.dx(), e));
        }
        fs::write(out.join("refinement.csv"), io::refinement_csv(&rows))?;
        if let Some(order) = io::observed_order(&rows) {
            println!("observed order {order:.3}");
        }
    }
    Ok(Outcome {
        passed: cauchy.monotone,
    })
}

pub fn stability(cfg: &Config, out: &Path) -> Result<Outcome> {
    let pu = cfg.build_problem()?;
    let pv = cfg.build_perturbed(&pu)?;
    let tol = cfg.stability.as_ref().map_or(1e-2, |s| s.tol);
    let radius = bounds(&pu)?.m(pu.horizon).max(bounds(&pv)?.m(pv.horizon));
    let norms = SupNormReport::compute(
        &pu.flux,
        &pu.source,
        &pu.domain,
        pu.horizon,
        radius,
        &SamplingSpec::for_horizon(pu.horizon),
    )?;
    // one grid for both, at the stricter of the two stable steps
    let (gu, gv) = (cfl_grid(&pu, cfg.grid.nx, cfg.grid.courant)?, cfl_grid(&pv, cfg.grid.nx, cfg.grid.courant)?);
    let g = if gu.dt <= gv.dt { gu } else { gv };
    let (u, _) = solve_on(cfg, &pu, g)?;
    let (v, _) = solve_on(cfg, &pv, g)?;
    let scale = (1.0 + u.sup_norm().max(v.sup_norm())) * pu.domain.length() * pu.horizon;
    let rep = check_stability(&u, &v, &pu, &pv, &norms, tol * scale)?;
    let report = ReportFile {
        records: vec![rep.record(&cfg.instance_hash())],
        traces: Vec::new(),
    };
    fs::create_dir_all(out).with_context(|| format!("creating {}", out.display()))?;
    io::write_report(&out.join(io::REPORT_JSON), &report)?;
    println!(
        "{:?} stability: L_f {:.4}, L_F {:.4}, min margin {:.6e}, tol {:.3e}",
        rep.verdict, rep.l_f, rep.l_big_f, rep.min_margin, rep.tolerance
    );
    Ok(Outcome { passed: rep.passed() })
}
