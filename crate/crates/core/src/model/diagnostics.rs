use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::domain::Side;
use super::problem::Problem;
use super::smooth::Smooth3;

/// Relative tolerance when auditing hand-coded derivatives.
pub const DERIVATIVE_REL_TOL: f64 = 1e-5;
const AUDIT_SAMPLES: usize = 32;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiagnosticCheck {
    pub name: String,
    pub passed: bool,
    pub message: String,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct DiagnosticsReport {
    pub checks: Vec<DiagnosticCheck>,
    pub warnings: Vec<String>,
}

impl DiagnosticsReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn check(&self, name: &str) -> Option<&DiagnosticCheck> {
        self.checks.iter().find(|c| c.name == name)
    }

    fn push(&mut self, name: &str, passed: bool, message: String) {
        self.checks.push(DiagnosticCheck {
            name: name.to_string(),
            passed,
            message,
        });
    }
}

/// Diagnoses the data of a problem without modifying it.
pub fn validate_problem(p: &Problem) -> DiagnosticsReport {
    let mut rep = DiagnosticsReport::default();
    let (ua, ub) = (p.initial.first(), p.initial.last());

    let bad: Vec<String> = [(Side::Left, ua), (Side::Right, ub)]
        .iter()
        .filter(|(_, v)| *v != 0.0)
        .map(|(s, v)| format!("u_o({}) = {v}", p.domain.point(*s)))
        .collect();
    rep.push(
        "initial_vanishes_at_boundary",
        bad.is_empty(),
        if bad.is_empty() { "ok".into() } else { bad.join("; ") },
    );

    let bad: Vec<String> = Side::BOTH
        .iter()
        .map(|&s| (s, p.boundary.value(s, 0.0)))
        .filter(|(_, v)| *v != 0.0)
        .map(|(s, v)| format!("u_b(0, {}) = {v}", p.domain.point(s)))
        .collect();
    rep.push(
        "boundary_zero_at_origin",
        bad.is_empty(),
        if bad.is_empty() { "ok".into() } else { bad.join("; ") },
    );

    let bad: Vec<String> = [(Side::Left, ua), (Side::Right, ub)]
        .iter()
        .filter_map(|&(s, uo)| {
            let b = p.boundary.value(s, 0.0);
            (uo != b).then(|| format!("at x = {}: u_o = {uo} but u_b(0) = {b}", p.domain.point(s)))
        })
        .collect();
    rep.push(
        "compatibility",
        bad.is_empty(),
        if bad.is_empty() { "u_o(ξ) = u_b(0, ξ) at both endpoints".into() } else { bad.join("; ") },
    );

    let radius = (p.initial.sup_norm() + p.boundary.sup_norm(p.horizon, p.horizon / 64.0)).max(1.0);
    for (name, func) in [("flux_derivatives", p.flux.func()), ("source_derivatives", p.source.func())] {
        let msgs = audit_partials(func, p, radius);
        rep.push(name, msgs.is_empty(), if msgs.is_empty() { "ok".into() } else { msgs.join("; ") });
    }

    let tv = p.initial.tv();
    rep.push("initial_tv_finite", tv.is_finite(), format!("TV(u_o) = {tv}"));

    if !p.boundary.has_dt() {
        rep.warnings
            .push("no time-derivative evaluators for u_b; finite differences are used".into());
    }
    rep.warnings.push(
        "Hoelder regularity of u_b (C^{3,α}) and second-order compatibility at t=0 are not verified".into(),
    );
    rep
}

fn audit_partials(func: &Smooth3, p: &Problem, radius: f64) -> Vec<String> {
    let mut rng = ChaCha8Rng::seed_from_u64(0xd1a6);
    let pts: Vec<(f64, f64, f64)> = (0..AUDIT_SAMPLES)
        .map(|_| {
            (
                rng.gen_range(0.0..=p.horizon),
                rng.gen_range(p.domain.a..=p.domain.b),
                rng.gen_range(-radius..=radius),
            )
        })
        .collect();
    let mut out = Vec::new();
    for partial in func.supplied() {
        let worst = pts
            .iter()
            .map(|&(t, x, u)| {
                let s = func.partial(partial, t, x, u);
                let r = func.fd_reference(partial, t, x, u);
                ((s - r).abs() / s.abs().max(r.abs()).max(1.0), (t, x, u, s, r))
            })
            .fold((0.0, (0.0, 0.0, 0.0, 0.0, 0.0)), |a, b| if b.0 > a.0 { b } else { a });
        if worst.0 > DERIVATIVE_REL_TOL {
            let (t, x, u, s, r) = worst.1;
            out.push(format!(
                "∂{partial}: supplied {s} vs difference {r} at (t={t}, x={x}, u={u})"
            ));
        }
    }
    out
}
