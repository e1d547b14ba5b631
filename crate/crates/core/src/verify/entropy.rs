use serde::{Deserialize, Serialize};

use super::bln::sgn;
use crate::error::{Error, Result};
use crate::model::{FluxModel, SourceModel};

const GL_NODES: [f64; 4] = [
    0.183_434_642_495_649_8,
    0.525_532_409_916_329,
    0.796_666_477_413_626_7,
    0.960_289_856_497_536_3,
];
const GL_WEIGHTS: [f64; 4] = [
    0.362_683_783_378_362,
    0.313_706_645_877_887_3,
    0.222_381_034_453_374_5,
    0.101_228_536_290_376_3,
];

/// Convexity slack for sampled second differences.
pub const CONVEXITY_TOL: f64 = 1e-9;

/// Entropy / entropy-flux pairs. The flux is normalized by `𝓕(t, x, k) = 0`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum EntropyPair {
    /// `|u - k|`.
    Kruzkov { k: f64 },
    /// `sqrt(1/l + (u - k)^2)`.
    Smooth { k: f64, l: u32 },
}

impl EntropyPair {
    pub fn k(&self) -> f64 {
        match *self {
            EntropyPair::Kruzkov { k } | EntropyPair::Smooth { k, .. } => k,
        }
    }

    pub fn label(&self) -> String {
        match *self {
            EntropyPair::Kruzkov { k } => format!("kruzkov(k={k})"),
            EntropyPair::Smooth { k, l } => format!("smooth(k={k},l={l})"),
        }
    }

    pub fn e(&self, u: f64) -> f64 {
        match *self {
            EntropyPair::Kruzkov { k } => (u - k).abs(),
            EntropyPair::Smooth { k, l } => (1.0 / l as f64 + (u - k) * (u - k)).sqrt(),
        }
    }

    pub fn de(&self, u: f64) -> f64 {
        match *self {
            EntropyPair::Kruzkov { k } => sgn(u - k),
            EntropyPair::Smooth { .. } => (u - self.k()) / self.e(u),
        }
    }

    /// Entropy flux `𝓕(t, x, u)`.
    pub fn q(&self, flux: &FluxModel, t: f64, x: f64, u: f64) -> f64 {
        match *self {
            EntropyPair::Kruzkov { k } => sgn(u - k) * (flux.f(t, x, u) - flux.f(t, x, k)),
            EntropyPair::Smooth { .. } => self.integrate(u, |w| flux.du_f(t, x, w)),
        }
    }

    /// `∂x 𝓕` at frozen `u`.
    pub fn div_q(&self, flux: &FluxModel, t: f64, x: f64, u: f64) -> f64 {
        match *self {
            EntropyPair::Kruzkov { k } => sgn(u - k) * (flux.div_f(t, x, u) - flux.div_f(t, x, k)),
            EntropyPair::Smooth { .. } => self.integrate(u, |w| flux.du_div_f(t, x, w)),
        }
    }

    /// Zeroth-order term of the entropy inequality:
    /// `𝓔'(u) (F(u) - div f(u)) + div 𝓕(u)`, in Kruzkov's reduced form for
    /// the `|u - k|` family.
    pub fn source_term(&self, flux: &FluxModel, source: &SourceModel, t: f64, x: f64, u: f64) -> f64 {
        match *self {
            EntropyPair::Kruzkov { k } => sgn(u - k) * (source.F(t, x, u) - flux.div_f(t, x, k)),
            EntropyPair::Smooth { .. } => {
                self.de(u) * (source.F(t, x, u) - flux.div_f(t, x, u)) + self.div_q(flux, t, x, u)
            }
        }
    }

    /// Boundary flux `𝓕(u_b) - 𝓔'(u_b) (f(u_b) - f(tr))` (before the normal).
    pub fn boundary_flux(&self, flux: &FluxModel, t: f64, xi: f64, ub: f64, tr: f64) -> f64 {
        match *self {
            EntropyPair::Kruzkov { k } => sgn(ub - k) * (flux.f(t, xi, tr) - flux.f(t, xi, k)),
            EntropyPair::Smooth { .. } => {
                self.q(flux, t, xi, ub) - self.de(ub) * (flux.f(t, xi, ub) - flux.f(t, xi, tr))
            }
        }
    }

    /// `∫_k^u 𝓔'(w) g(w) dw` on panels that shrink geometrically towards `k`,
    /// where `𝓔'` varies on the scale `l^{-1/2}`.
    fn integrate(&self, u: f64, g: impl Fn(f64) -> f64) -> f64 {
        let (k, l) = match *self {
            EntropyPair::Smooth { k, l } => (k, l as f64),
            EntropyPair::Kruzkov { k } => (k, f64::INFINITY),
        };
        let s = u - k;
        if s == 0.0 {
            return 0.0;
        }
        let inner = 0.05 / l.sqrt();
        let mut panels = Vec::new();
        let mut hi = 1.0;
        while hi * s.abs() > inner && panels.len() < 60 {
            panels.push((0.5 * hi, hi));
            hi *= 0.5;
        }
        panels.push((0.0, hi));
        let mut sum = 0.0;
        for (p0, p1) in panels {
            let (w0, w1) = (k + p0 * s, k + p1 * s);
            let (mid, half) = (0.5 * (w0 + w1), 0.5 * (w1 - w0));
            for (x, wt) in GL_NODES.iter().zip(GL_WEIGHTS) {
                for w in [mid - half * x, mid + half * x] {
                    sum += wt * half * self.de(w) * g(w);
                }
            }
        }
        sum
    }

    /// Sampled second differences of `𝓔` on `[lo, hi]`.
    pub fn check_convex(&self, lo: f64, hi: f64, n: usize) -> Result<()> {
        let h = (hi - lo) / n.max(2) as f64;
        for j in 1..n {
            let u = lo + h * j as f64;
            let d2 = self.e(u - h) - 2.0 * self.e(u) + self.e(u + h);
            if d2 < -CONVEXITY_TOL {
                return Err(Error::Hypothesis(format!(
                    "{} is not convex near u = {u} (second difference {d2})",
                    self.label()
                )));
            }
        }
        Ok(())
    }

    /// Checks `𝓔' ∂u f = ∂u 𝓕` at the given points by central differences.
    /// Points too close to the kink of `|u - k|` are skipped.
    pub fn check_compatible(&self, flux: &FluxModel, points: &[(f64, f64, f64)], rel_tol: f64) -> Result<()> {
        let h = 1e-5;
        for &(t, x, u) in points {
            if matches!(self, EntropyPair::Kruzkov { .. }) && (u - self.k()).abs() < 2.0 * h {
                continue;
            }
            let lhs = self.de(u) * flux.du_f(t, x, u);
            let rhs = (self.q(flux, t, x, u + h) - self.q(flux, t, x, u - h)) / (2.0 * h);
            if (lhs - rhs).abs() > rel_tol * (1.0 + lhs.abs()) {
                return Err(Error::Hypothesis(format!(
                    "{}: entropy flux incompatible at (t={t}, x={x}, u={u}): {lhs} vs {rhs}",
                    self.label()
                )));
            }
        }
        Ok(())
    }
}

/// Kruzkov pairs, one per level.
pub fn kruzkov_pairs(levels: &[f64]) -> Vec<EntropyPair> {
    levels.iter().map(|&k| EntropyPair::Kruzkov { k }).collect()
}
