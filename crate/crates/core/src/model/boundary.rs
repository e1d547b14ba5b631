use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::domain::Side;
use super::smooth::{fd_time, Eval1, FD_STEP_FIRST};
use crate::error::{Error, Result};

/// Step used when higher time derivatives of the boundary datum are
/// obtained by nested differences.
const HIGHER_FD_STEP: f64 = 1e-3;

/// How `‖u_b‖_{C^{k,α}}` is obtained for the translated-problem coefficients.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum HolderSurrogate {
    /// Sum of sampled sup-norms of time derivatives up to order `k` plus a
    /// sampled Hoelder quotient of the `k`-th derivative at scale `h_min`.
    /// The result is a heuristic upper estimate.
    Sampled { alpha: f64, h_min: f64 },
    /// User-certified values of the two norms (constant in time).
    Fixed { c2: f64, c3: f64 },
}

impl HolderSurrogate {
    pub fn sampled(alpha: f64, h_min: f64) -> Self {
        assert!(alpha > 0.0 && alpha < 1.0, "Hoelder exponent must lie in ]0,1[");
        assert!(h_min > 0.0);
        HolderSurrogate::Sampled { alpha, h_min }
    }

    pub fn fixed(c2: f64, c3: f64) -> Self {
        HolderSurrogate::Fixed { c2, c3 }
    }
}

/// Surrogate values of `‖u_b‖_{C^{2,α}([0,t])}` and `‖u_b‖_{C^{3,α}([0,t])}`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct HolderNorms {
    pub c2_alpha: f64,
    pub c3_alpha: f64,
    /// True when the values come from sampling rather than a certificate.
    pub heuristic: bool,
}

/// Dirichlet data on the two boundary points.
#[derive(Clone)]
pub struct BoundaryData {
    left: Eval1,
    right: Eval1,
    dt_left: Option<Eval1>,
    dt_right: Option<Eval1>,
    zero_at_origin: bool,
    identically_zero: bool,
    holder: Option<HolderSurrogate>,
}

impl fmt::Debug for BoundaryData {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("BoundaryData")
            .field("left(0)", &(self.left)(0.0))
            .field("right(0)", &(self.right)(0.0))
            .field("zero_at_origin", &self.zero_at_origin)
            .field("identically_zero", &self.identically_zero)
            .field("holder", &self.holder)
            .finish()
    }
}

impl BoundaryData {
    pub fn new(
        left: impl Fn(f64) -> f64 + Send + Sync + 'static,
        right: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        BoundaryData {
            left: Arc::new(left),
            right: Arc::new(right),
            dt_left: None,
            dt_right: None,
            zero_at_origin: false,
            identically_zero: false,
            holder: None,
        }
    }

    pub fn from_arcs(left: Eval1, right: Eval1) -> Self {
        BoundaryData {
            left,
            right,
            dt_left: None,
            dt_right: None,
            zero_at_origin: false,
            identically_zero: false,
            holder: None,
        }
    }

    /// Homogeneous data `u_b ≡ 0`.
    pub fn zero() -> Self {
        let z: Eval1 = Arc::new(|_| 0.0);
        BoundaryData {
            left: z.clone(),
            right: z.clone(),
            dt_left: Some(z.clone()),
            dt_right: Some(z),
            zero_at_origin: true,
            identically_zero: true,
            holder: Some(HolderSurrogate::fixed(0.0, 0.0)),
        }
    }

    pub fn constant(left: f64, right: f64) -> Self {
        if left == 0.0 && right == 0.0 {
            return Self::zero();
        }
        BoundaryData::new(move |_| left, move |_| right)
            .with_dt(|_| 0.0, |_| 0.0)
            .with_holder(HolderSurrogate::fixed(left.abs().max(right.abs()), left.abs().max(right.abs())))
    }

    pub fn with_dt(
        mut self,
        dt_left: impl Fn(f64) -> f64 + Send + Sync + 'static,
        dt_right: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        self.dt_left = Some(Arc::new(dt_left));
        self.dt_right = Some(Arc::new(dt_right));
        self
    }

    pub fn with_holder(mut self, h: HolderSurrogate) -> Self {
        self.holder = Some(h);
        self
    }

    /// Asserts `u_b(0, ·) = 0`; fails unless both values are exactly zero.
    pub fn assert_zero_at_origin(mut self) -> Result<Self> {
        let (l, r) = ((self.left)(0.0), (self.right)(0.0));
        if l != 0.0 || r != 0.0 {
            return Err(Error::Compatibility(format!(
                "boundary datum flagged zero at t=0 but u_b(0,a)={l}, u_b(0,b)={r}"
            )));
        }
        self.zero_at_origin = true;
        Ok(self)
    }

    pub fn zero_at_origin(&self) -> bool {
        self.zero_at_origin
    }

    pub fn holder(&self) -> Option<&HolderSurrogate> {
        self.holder.as_ref()
    }

    pub fn evaluator(&self, side: Side) -> &Eval1 {
        match side {
            Side::Left => &self.left,
            Side::Right => &self.right,
        }
    }

    #[inline]
    pub fn value(&self, side: Side, t: f64) -> f64 {
        (self.evaluator(side))(t)
    }

    /// Time derivative: supplied evaluator or centered difference.
    pub fn dt_value(&self, side: Side, t: f64) -> f64 {
        let supplied = match side {
            Side::Left => &self.dt_left,
            Side::Right => &self.dt_right,
        };
        match supplied {
            Some(g) => g(t),
            None => fd_time(&**self.evaluator(side), t, FD_STEP_FIRST),
        }
    }

    pub fn has_dt(&self) -> bool {
        self.dt_left.is_some() && self.dt_right.is_some()
    }

    /// True when the datum was built as `u_b ≡ 0`, or vanishes exactly on a
    /// 257-point sample of `[0, horizon]`.
    pub fn is_homogeneous(&self, horizon: f64) -> bool {
        if self.identically_zero {
            return true;
        }
        (0..=256).all(|j| {
            let t = horizon * j as f64 / 256.0;
            self.value(Side::Left, t) == 0.0 && self.value(Side::Right, t) == 0.0
        })
    }

    /// Certified-by-sampling `‖u_b‖_{L∞([0,t] × ∂Ω)}` on the lattice `j·step`.
    pub fn sup_norm(&self, t: f64, step: f64) -> f64 {
        if self.identically_zero {
            return 0.0;
        }
        Side::BOTH
            .iter()
            .map(|&s| lattice_sup(|tau| self.value(s, tau), t, step))
            .fold(0.0, f64::max)
    }

    /// Certified-by-sampling `‖∂_t u_b‖_{L∞([0,t] × ∂Ω)}`.
    pub fn dt_sup_norm(&self, t: f64, step: f64) -> f64 {
        if self.identically_zero {
            return 0.0;
        }
        Side::BOTH
            .iter()
            .map(|&s| lattice_sup(|tau| self.dt_value(s, tau), t, step))
            .fold(0.0, f64::max)
    }

    /// `k`-th time derivative, `k ≤ 3`.
    pub fn time_derivative(&self, side: Side, k: usize, t: f64) -> f64 {
        let h = HIGHER_FD_STEP * (1.0 + t.abs());
        match k {
            0 => self.value(side, t),
            1 => self.dt_value(side, t),
            2 => (self.dt_value(side, t + h) - self.dt_value(side, t - h)) / (2.0 * h),
            3 => {
                (self.dt_value(side, t + h) - 2.0 * self.dt_value(side, t) + self.dt_value(side, t - h))
                    / (h * h)
            }
            _ => panic!("time derivatives above order 3 are not available"),
        }
    }

    /// Surrogate Hoelder norms on `[0, t]`.
    pub fn holder_norms(&self, t: f64) -> Result<HolderNorms> {
        let h = self.holder.ok_or(Error::MissingHolderSurrogate)?;
        match h {
            HolderSurrogate::Fixed { c2, c3 } => Ok(HolderNorms {
                c2_alpha: c2,
                c3_alpha: c3,
                heuristic: false,
            }),
            HolderSurrogate::Sampled { alpha, h_min } => {
                let n = (t / h_min).ceil().max(0.0) as usize;
                let lattice: Vec<f64> = (0..=n).map(|j| j as f64 * h_min).collect();
                let mut sup = [0.0_f64; 4];
                let mut quot = [0.0_f64; 4];
                for side in Side::BOTH {
                    for k in 0..4 {
                        let vals: Vec<f64> = lattice.iter().map(|&s| self.time_derivative(side, k, s)).collect();
                        let vplus: Vec<f64> =
                            lattice.iter().map(|&s| self.time_derivative(side, k, s + h_min)).collect();
                        for (v, w) in vals.iter().zip(&vplus) {
                            sup[k] = sup[k].max(v.abs());
                            quot[k] = quot[k].max((w - v).abs() / h_min.powf(alpha));
                        }
                    }
                }
                let c2 = sup[0] + sup[1] + sup[2] + quot[2];
                let c3 = sup[0] + sup[1] + sup[2] + sup[3] + quot[3];
                Ok(HolderNorms {
                    c2_alpha: c2,
                    c3_alpha: c3,
                    heuristic: true,
                })
            }
        }
    }
}

/// Max of `|g|` over lattice cells `[j·step, (j+1)·step]` meeting `[0, t]`,
/// each inflated by half its increment.
pub(crate) fn lattice_sup(g: impl Fn(f64) -> f64, t: f64, step: f64) -> f64 {
    let cells = ((t / step).ceil() as usize).max(1);
    let vals: Vec<f64> = (0..=cells).map(|j| g(j as f64 * step)).collect();
    vals.windows(2)
        .map(|w| w[0].abs().max(w[1].abs()) + 0.5 * (w[1] - w[0]).abs())
        .fold(0.0, f64::max)
}
