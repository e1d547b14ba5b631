//! Explicit a priori constants and bounds.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{Domain1D, HolderNorms, Problem, SamplingSpec, SupNormReport};

const MAX_BOX_ITERATIONS: usize = 30;
const BOX_GROWTH: f64 = 1.05;

/// `(e^{c t} − 1)/c`, accurate for small `c t`.
fn expm1_over(c: f64, t: f64) -> f64 {
    if c == 0.0 {
        t
    } else {
        (c * t).exp_m1() / c
    }
}

/// `c1 = 1 + ‖∂u div f‖ + ‖∂u F‖`, `c2 = ‖div f(·,·,0)‖ + ‖F(·,·,0)‖`.
pub fn compute_c1_c2(norms: &SupNormReport) -> Result<(f64, f64)> {
    let c1 = 1.0 + norms.get("du_div_f")? + norms.get("du_F")?;
    let c2 = norms.get("div_f_at_zero")? + norms.get("F_at_zero")?;
    Ok((c1, c2))
}

/// Radius `M(t) = (‖u_o‖ + ‖u_b‖) e^{c1 t} + (c2/c1)(e^{c1 t} − 1)`.
pub fn m_radius(c1: f64, c2: f64, data_norm: f64, t: f64) -> f64 {
    data_norm * (c1 * t).exp() + c2 * expm1_over(c1, t)
}

pub fn compute_m(norms: &SupNormReport, u_o_norm: f64, u_b_norm: f64, t: f64) -> Result<f64> {
    let (c1, c2) = compute_c1_c2(norms)?;
    Ok(m_radius(c1, c2, u_o_norm + u_b_norm, t))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ACoeffs {
    pub a1: f64,
    pub a2: f64,
    pub a3: f64,
    pub a4: f64,
}

/// The four total-variation coefficients of the viscous problem.
/// Interior norms carry the factor `|Ω| = b − a`, boundary norms the
/// factor `|∂Ω| = 2`.
pub fn compute_a_coeffs(norms: &SupNormReport, domain: &Domain1D) -> Result<ACoeffs> {
    let o = domain.geometry_constant;
    let len = domain.length();
    let bdry = domain.boundary_measure();
    let g = |k: &str| norms.get(k);
    let a1 = o * len * (g("div_f")? + g("F")?);
    let a2 = o
        * (len
            * (g("grad_div_f")? + g("grad_F")? + g("div_f")? + g("F")? + g("dt_div_f")? + g("dt_F")?)
            + bdry * (g("div_f_boundary_at_zero")? + g("F_boundary_at_zero")?));
    let a3 = o + g("du_f")?;
    let a4 = o * (1.0 + g("dt_du_f")? + g("du_F")? + g("grad_du_f")? + g("du_f")?);
    Ok(ACoeffs { a1, a2, a3, a4 })
}

/// `L(t) = (A1 + A2 t + A3 ‖∇u_o‖_{L1}) e^{A4 t}`.
pub fn compute_l(a: &ACoeffs, grad_uo_l1: f64, t: f64) -> f64 {
    (a.a1 + a.a2 * t + a.a3 * grad_uo_l1) * (a.a4 * t).exp()
}

/// `L_ε(t) = (A1 + A2 t + A3 ‖∇u_o‖_{L1} + ε ‖Δu_o‖_{L1}) e^{A4 t}`.
pub fn compute_l_eps(a: &ACoeffs, grad_uo_l1: f64, t: f64, eps: f64, laplacian_uo_l1: f64) -> f64 {
    (a.a1 + a.a2 * t + a.a3 * grad_uo_l1 + eps * laplacian_uo_l1) * (a.a4 * t).exp()
}

/// Coefficients of the translated problem with homogeneous boundary data.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TranslatedCoeffs {
    pub s1: f64,
    pub s2: f64,
    pub s3: f64,
    pub s4: f64,
}

pub fn compute_translated_coeffs(
    norms: &SupNormReport,
    lift: &HolderNorms,
    domain: &Domain1D,
) -> Result<TranslatedCoeffs> {
    let o = domain.geometry_constant;
    let scale = domain.length().max(domain.boundary_measure());
    let g = |k: &str| norms.get(k);
    let (c2a, c3a) = (lift.c2_alpha, lift.c3_alpha);
    let df = g("dt_f")?.max(g("div_f")?).max(g("du_f")?);
    let df_w1 = [df, g("dtt_f")?, g("dt_div_f")?, g("grad_div_f")?, g("grad_du_f")?, g("duu_f")?, g("dt_du_f")?]
        .into_iter()
        .fold(0.0, f64::max);
    let f_w1 = [g("F")?, g("dt_F")?, g("grad_F")?, g("du_F")?].into_iter().fold(0.0, f64::max);
    let du_f_src_w1 = [g("du_F")?, g("dt_du_F")?, g("grad_du_F")?, g("duu_F")?]
        .into_iter()
        .fold(0.0, f64::max);
    let duu = g("duu_f")?;
    let s1 = o * scale * (df + g("F")? + (1.0 + df) * c2a);
    let s2 = o * scale * (df_w1 + f_w1 + (1.0 + df_w1 + du_f_src_w1) * c3a + duu * c3a * c3a);
    let s3 = o + g("du_f")?;
    let s4 = o * (1.0 + df_w1 + g("du_F")? + duu * c2a);
    Ok(TranslatedCoeffs { s1, s2, s3, s4 })
}

/// Every constant and bound for one problem instance. Norms are taken on
/// the self-consistent box `[0,T] × Ω × [−R, R]`, which contains `U(t)`
/// for all `t ≤ T`, so each bound is valid at every `t ≤ T`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundSet {
    pub horizon: f64,
    pub box_radius: f64,
    pub c1: f64,
    pub c2: f64,
    pub a: ACoeffs,
    pub script_a: Option<TranslatedCoeffs>,
    pub lift: Option<HolderNorms>,
    pub uo_sup: f64,
    pub ub_sup: f64,
    pub dt_ub_sup: f64,
    pub tv_uo: f64,
    pub laplacian_uo_l1: f64,
    pub homogeneous: bool,
    pub length: f64,
    pub norms: SupNormReport,
}

impl BoundSet {
    /// `M(t)`: radius of `U(t)`.
    pub fn m(&self, t: f64) -> f64 {
        m_radius(self.c1, self.c2, self.uo_sup + self.ub_sup, t)
    }

    pub fn l(&self, t: f64) -> f64 {
        compute_l(&self.a, self.tv_uo, t)
    }

    pub fn l_eps(&self, t: f64, eps: f64) -> f64 {
        compute_l_eps(&self.a, self.tv_uo, t, eps, self.laplacian_uo_l1)
    }

    /// Final sup-norm bound, including the `‖∂t u_b‖` term.
    pub fn linf_bound(&self, t: f64) -> f64 {
        (self.uo_sup + self.ub_sup) * (self.c1 * t).exp() + (self.c2 + self.dt_ub_sup) * expm1_over(self.c1, t)
    }

    /// Bound on `TV(v(t))` for the translated solution.
    pub fn translated_tv_bound(&self, t: f64) -> Option<f64> {
        self.script_a
            .map(|s| (s.s1 + s.s2 * t + s.s3 * self.tv_uo) * (s.s4 * t).exp())
    }

    /// Bound on `TV(z(t))` for the affine lift.
    pub fn lift_tv_bound(&self) -> f64 {
        match &self.lift {
            Some(h) if !self.homogeneous => (self.length * h.c2_alpha).max(2.0 * self.ub_sup),
            _ => 0.0,
        }
    }

    /// Total-variation bound: `L(t)` in the homogeneous case, otherwise
    /// the translated bound plus `TV(z)`.
    pub fn tv_bound(&self, t: f64) -> f64 {
        if self.homogeneous {
            return self.l(t);
        }
        match self.translated_tv_bound(t) {
            Some(v) => v + self.lift_tv_bound(),
            None => f64::INFINITY,
        }
    }

    /// Rate `C(t)` with `‖u(t) − u(s)‖_{L1} ≤ C(max(s,t)) |t − s|`.
    pub fn time_lip_constant(&self, t: f64) -> f64 {
        if self.homogeneous {
            return self.l(t);
        }
        match self.translated_tv_bound(t) {
            Some(v) => v + self.length * self.dt_ub_sup,
            None => f64::INFINITY,
        }
    }

    pub fn time_lip_bound(&self, s: f64, t: f64) -> f64 {
        self.time_lip_constant(s.max(t)) * (t - s).abs()
    }

    /// Flat table of the bound functions at `n + 1` equispaced times.
    pub fn table(&self, n: usize) -> Vec<BoundRow> {
        (0..=n)
            .map(|k| {
                let t = self.horizon * k as f64 / n.max(1) as f64;
                BoundRow {
                    t,
                    m: self.m(t),
                    l: self.l(t),
                    linf_bound: self.linf_bound(t),
                    tv_bound: self.tv_bound(t),
                    time_lip_constant: self.time_lip_constant(t),
                }
            })
            .collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundRow {
    pub t: f64,
    pub m: f64,
    pub l: f64,
    pub linf_bound: f64,
    pub tv_bound: f64,
    pub time_lip_constant: f64,
}

/// Finds `R` with `max(M(T), L∞-bound(T)) ≤ R` when the constants are
/// computed on `[−R, R]`.
pub fn self_consistent_norms(p: &Problem, spec: &SamplingSpec) -> Result<(SupNormReport, f64)> {
    let data = p.initial.sup_norm() + p.boundary.sup_norm(p.horizon, spec.t_step / 8.0);
    let dt_ub = p.boundary.dt_sup_norm(p.horizon, spec.t_step / 8.0);
    let mut r = data;
    for _ in 0..MAX_BOX_ITERATIONS {
        let norms = match SupNormReport::compute(&p.flux, &p.source, &p.domain, p.horizon, r, spec) {
            Ok(n) => n,
            Err(Error::Resolution(_)) => break,
            Err(e) => return Err(e),
        };
        let (c1, c2) = compute_c1_c2(&norms)?;
        let need = m_radius(c1, c2 + dt_ub, data, p.horizon);
        if need <= r {
            return Ok((norms, r));
        }
        r = BOX_GROWTH * need;
    }
    Err(Error::NoSelfConsistentBox {
        iterations: MAX_BOX_ITERATIONS,
        radius: r,
    })
}

/// Constants and bounds on `[0, T]`. Nonhomogeneous boundary data need a
/// registered Hoelder surrogate.
pub fn compute_final_bounds(p: &Problem, spec: &SamplingSpec) -> Result<BoundSet> {
    let (norms, box_radius) = self_consistent_norms(p, spec)?;
    let homogeneous = p.boundary.is_homogeneous(p.horizon);
    let lift = match p.boundary.holder_norms(p.horizon) {
        Ok(h) => Some(h),
        Err(Error::MissingHolderSurrogate) if homogeneous => None,
        Err(e) => return Err(e),
    };
    let zero_lift = HolderNorms {
        c2_alpha: 0.0,
        c3_alpha: 0.0,
        heuristic: false,
    };
    let script_a = Some(compute_translated_coeffs(&norms, lift.as_ref().unwrap_or(&zero_lift), &p.domain)?);
    let (c1, c2) = compute_c1_c2(&norms)?;
    Ok(BoundSet {
        horizon: p.horizon,
        box_radius,
        c1,
        c2,
        a: compute_a_coeffs(&norms, &p.domain)?,
        script_a,
        lift,
        uo_sup: p.initial.sup_norm(),
        ub_sup: p.boundary.sup_norm(p.horizon, spec.t_step / 8.0),
        dt_ub_sup: p.boundary.dt_sup_norm(p.horizon, spec.t_step / 8.0),
        tv_uo: p.initial.tv(),
        laplacian_uo_l1: p.initial.laplacian_l1(),
        homogeneous,
        length: p.domain.length(),
        norms,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeMap;

    fn report(pairs: &[(&str, f64)]) -> SupNormReport {
        let mut e: BTreeMap<String, f64> = crate::model::entry_names().map(|n| (n.to_string(), 0.0)).collect();
        for (k, v) in pairs {
            e.insert(k.to_string(), *v);
        }
        SupNormReport::from_entries(1.0, 1.0, e)
    }

    #[test]
    fn c1_c2_examples() {
        assert_eq!(compute_c1_c2(&report(&[("du_f", 1.0)])).unwrap(), (1.0, 0.0));
        assert_eq!(
            compute_c1_c2(&report(&[("div_f", 1.0), ("div_f_at_zero", 1.0)])).unwrap(),
            (1.0, 1.0)
        );
        assert_eq!(compute_c1_c2(&report(&[("du_div_f", 1.0), ("du_F", 1.0)])).unwrap(), (3.0, 0.0));
        let missing = SupNormReport::from_entries(0.0, 0.0, BTreeMap::new());
        assert_eq!(compute_c1_c2(&missing), Err(Error::MissingNorm("du_div_f".into())));
    }

    #[test]
    fn m_examples() {
        assert!((m_radius(1.0, 0.0, 1.0, 1.0) - std::f64::consts::E).abs() < 1e-15);
        assert_eq!(m_radius(2.5, 0.7, 1.25, 0.0), 1.25);
        assert!((m_radius(1.0, 1.0, 0.0, 1.0) - (std::f64::consts::E - 1.0)).abs() < 1e-15);
        // linear in the data when c2 = 0
        assert!((m_radius(1.3, 0.0, 2.0, 0.7) - 2.0 * m_radius(1.3, 0.0, 1.0, 0.7)).abs() < 1e-14);
    }

    #[test]
    fn a_coeffs_zero_flux() {
        let a = compute_a_coeffs(&report(&[]), &Domain1D::unit()).unwrap();
        assert_eq!(a, ACoeffs { a1: 0.0, a2: 0.0, a3: 2.0, a4: 2.0 });
        let a = compute_a_coeffs(&report(&[("du_f", 1.0)]), &Domain1D::unit()).unwrap();
        assert_eq!(a.a3, 3.0);
    }

    #[test]
    fn l_examples() {
        let a = ACoeffs { a1: 0.0, a2: 0.0, a3: 2.0, a4: 2.0 };
        assert_eq!(compute_l(&a, 0.0, 0.0), 0.0);
        let a = ACoeffs { a1: 1.0, a2: 1.0, a3: 1.0, a4: 0.0 };
        assert_eq!(compute_l(&a, 2.0, 3.0), 6.0);
        assert_eq!(compute_l_eps(&a, 2.0, 3.0, 0.0, 5.0), compute_l(&a, 2.0, 3.0));
        let a = ACoeffs { a1: 1.0, a2: 1.0, a3: 1.0, a4: 0.3 };
        let slope = (compute_l_eps(&a, 2.0, 1.5, 0.2, 4.0) - compute_l_eps(&a, 2.0, 1.5, 0.1, 4.0)) / 0.1;
        assert!((slope - 4.0 * (0.45f64).exp()).abs() < 1e-9);
    }

    #[test]
    fn translated_coeffs_monotone_in_lift() {
        let r = report(&[("du_f", 1.0), ("duu_f", 1.0), ("F", 0.5)]);
        let d = Domain1D::unit();
        let mut prev = None;
        for k in 0..10 {
            let c = k as f64 * 0.5;
            let s = compute_translated_coeffs(&r, &HolderNorms { c2_alpha: c, c3_alpha: c, heuristic: true }, &d).unwrap();
            if let Some(p) = prev {
                let p: TranslatedCoeffs = p;
                assert!(s.s1 >= p.s1 && s.s2 >= p.s2 && s.s3 >= p.s3 && s.s4 >= p.s4);
            }
            prev = Some(s);
        }
    }
}
