//! Named problem instances and a seeded random-problem generator.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::bounds::{compute_c1_c2, m_radius, self_consistent_norms};
use crate::error::{Error, Result};
use crate::model::{
    BoundaryData, Domain1D, FluxModel, GridFunction1D, HolderSurrogate, Partial, Problem, SamplingSpec,
    SourceModel,
};

pub const NAMES: &[&str] = &[
    "zero",
    "constant",
    "linear_advection",
    "burgers_rarefaction",
    "burgers_shock",
    "minus_x_flux",
    "x_advection",
    "decaying_source",
    "bln_outflow",
    "advection_inflow_ramp",
];

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CatalogParams {
    /// Overrides the entry's default horizon.
    pub horizon: Option<f64>,
    /// Nodes used to represent the initial datum.
    pub init_nodes: usize,
    /// State of the `constant` entry.
    pub value: f64,
}

impl Default for CatalogParams {
    fn default() -> Self {
        CatalogParams {
            horizon: None,
            init_nodes: 2001,
            value: 0.5,
        }
    }
}

/// Flux depending on `u` only, with closed-form `u`-derivatives.
pub fn flux_of_u(
    name: &str,
    f: impl Fn(f64) -> f64 + Send + Sync + 'static,
    df: impl Fn(f64) -> f64 + Send + Sync + 'static,
    d2f: impl Fn(f64) -> f64 + Send + Sync + 'static,
) -> FluxModel {
    let mut m = FluxModel::new(name, move |_, _, u| f(u))
        .with_partial(Partial::DU, move |_, _, u| df(u))
        .with_partial(Partial::DUU, move |_, _, u| d2f(u));
    for p in [Partial::DT, Partial::DX, Partial::DTT, Partial::DXX, Partial::DTX, Partial::DTU, Partial::DXU] {
        m = m.with_partial(p, |_, _, _| 0.0);
    }
    m
}

pub fn burgers() -> FluxModel {
    flux_of_u("burgers", |u| 0.5 * u * u, |u| u, |_| 1.0)
}

pub fn linear(speed: f64) -> FluxModel {
    flux_of_u("linear", move |u| speed * u, move |_| speed, |_| 0.0)
}

/// `cos²` bump supported on `[c − w, c + w]`.
pub fn bump(c: f64, w: f64) -> impl Fn(f64) -> f64 {
    move |x: f64| {
        let s = (x - c) / w;
        if s.abs() >= 1.0 {
            0.0
        } else {
            let q = (0.5 * PI * s).cos();
            q * q
        }
    }
}

fn ramp_holder(horizon: f64) -> HolderSurrogate {
    // ‖t‖ + ‖1‖ on [0, T]; higher derivatives vanish
    HolderSurrogate::fixed(horizon + 1.0, horizon + 1.0)
}

pub fn build(name: &str, params: &CatalogParams) -> Result<Problem> {
    let d = Domain1D::unit();
    let n = params.init_nodes.max(2);
    let gf = |g: &dyn Fn(f64) -> f64| GridFunction1D::from_fn(d.a, d.b, n, g);
    let horizon = |default: f64| params.horizon.unwrap_or(default);
    let step = |left: f64, right: f64, at: f64| move |x: f64| if x < at { left } else { right };
    let p = match name {
        "zero" => Problem::new(
            "zero",
            d,
            horizon(1.0),
            FluxModel::zero(),
            SourceModel::zero(),
            gf(&|_| 0.0)?,
            BoundaryData::zero(),
        ),
        "constant" => {
            let c = params.value;
            Problem::new(
                format!("constant(c={c})"),
                d,
                horizon(0.5),
                burgers(),
                SourceModel::zero(),
                gf(&|_| c)?,
                BoundaryData::constant(c, c),
            )
        }
        "linear_advection" => Problem::new(
            "linear_advection",
            d,
            horizon(0.5),
            linear(1.0),
            SourceModel::zero(),
            gf(&bump(0.3, 0.15))?,
            BoundaryData::zero(),
        ),
        "burgers_rarefaction" => Problem::new(
            "burgers_rarefaction",
            d,
            horizon(0.5),
            burgers(),
            SourceModel::zero(),
            gf(&step(0.0, 1.0, 0.5))?,
            BoundaryData::zero(),
        ),
        "burgers_shock" => Problem::new(
            "burgers_shock",
            d,
            horizon(0.5),
            burgers(),
            SourceModel::zero(),
            gf(&step(1.0, 0.0, 0.5))?,
            BoundaryData::constant(1.0, 0.0),
        ),
        "minus_x_flux" => {
            let t_end = horizon(1.0);
            let f = FluxModel::new("minus_x", |_, x, _| -x)
                .with_partial(Partial::DX, |_, _, _| -1.0)
                .with_partial(Partial::DU, |_, _, _| 0.0);
            Problem::new(
                "minus_x_flux",
                d,
                t_end,
                f,
                SourceModel::zero(),
                gf(&|_| 0.0)?,
                BoundaryData::new(|t| t, |t| t)
                    .with_dt(|_| 1.0, |_| 1.0)
                    .with_holder(ramp_holder(t_end))
                    .assert_zero_at_origin()?,
            )
        }
        "x_advection" => {
            let f = FluxModel::new("x_times_u", |_, x, u| x * u)
                .with_partial(Partial::DU, |_, x, _| x)
                .with_partial(Partial::DX, |_, _, u| u)
                .with_partial(Partial::DXU, |_, _, _| 1.0)
                .with_partial(Partial::DUU, |_, _, _| 0.0)
                .with_partial(Partial::DXX, |_, _, _| 0.0);
            Problem::new(
                "x_advection",
                d,
                horizon(0.5),
                f,
                SourceModel::zero(),
                gf(&bump(0.35, 0.2))?,
                BoundaryData::zero(),
            )
        }
        "decaying_source" => {
            let s = SourceModel::new("minus_u", |_, _, u| -u)
                .with_partial(Partial::DU, |_, _, _| -1.0)
                .with_partial(Partial::DT, |_, _, _| 0.0)
                .with_partial(Partial::DX, |_, _, _| 0.0);
            Problem::new(
                "decaying_source",
                d,
                horizon(1.0),
                FluxModel::zero(),
                s,
                gf(&bump(0.5, 0.3))?,
                BoundaryData::zero(),
            )
        }
        "bln_outflow" => Problem::new(
            "bln_outflow",
            d,
            horizon(0.5),
            burgers(),
            SourceModel::zero(),
            gf(&|_| -1.0)?,
            BoundaryData::constant(0.5, -1.0),
        ),
        "advection_inflow_ramp" => {
            let t_end = horizon(1.0);
            Problem::new(
                "advection_inflow_ramp",
                d,
                t_end,
                linear(1.0),
                SourceModel::zero(),
                gf(&|_| 0.0)?,
                BoundaryData::new(|t| t, |_| 0.0)
                    .with_dt(|_| 1.0, |_| 0.0)
                    .with_holder(ramp_holder(t_end))
                    .assert_zero_at_origin()?,
            )
        }
        other => {
            return Err(Error::Invalid(format!(
                "unknown catalog entry `{other}`; known: {}",
                NAMES.join(", ")
            )))
        }
    }?;
    Ok(p)
}

/// Closed-form solution for the entries that have one.
pub fn exact_solution(name: &str) -> Option<fn(f64, f64) -> f64> {
    match name {
        "zero" => Some(|_, _| 0.0),
        "minus_x_flux" => Some(|t, _| t),
        "advection_inflow_ramp" => Some(|t, x| (t - x).max(0.0)),
        "linear_advection" => Some(|t, x| bump(0.3, 0.15)(x - t)),
        "decaying_source" => Some(|t, x| (-t).exp() * bump(0.5, 0.3)(x)),
        "bln_outflow" => Some(|_, _| -1.0),
        _ => None,
    }
}

/// Problem with a random polynomial flux `(1 + βx)·p(u)`, a source
/// `σ sin(πx) + κu`, a polynomial initial datum vanishing at the endpoints and
/// `u_b ≡ 0`. Draws are rejected until `M(T) ≤ max_radius`.
pub fn random_problem(seed: u64, max_radius: f64) -> Result<Problem> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let d = Domain1D::unit();
    let horizon = 0.5;
    for _ in 0..64 {
        let a1: f64 = rng.gen_range(-1.0..1.0);
        let a2: f64 = rng.gen_range(-1.0..1.0);
        let a3: f64 = rng.gen_range(-0.3..0.3);
        let beta: f64 = rng.gen_range(-0.5..0.5);
        let sigma: f64 = rng.gen_range(-0.5..0.5);
        let kappa: f64 = rng.gen_range(-0.5..0.5);
        let amps: [f64; 3] = [rng.gen_range(-1.0..1.0), rng.gen_range(-0.5..0.5), rng.gen_range(-0.3..0.3)];

        let pu = move |u: f64| a1 * u + 0.5 * a2 * u * u + a3 * u * u * u / 3.0;
        let dpu = move |u: f64| a1 + a2 * u + a3 * u * u;
        let d2pu = move |u: f64| a2 + 2.0 * a3 * u;
        let flux = FluxModel::new(format!("poly#{seed}"), move |_, x, u| (1.0 + beta * x) * pu(u))
            .with_partial(Partial::DU, move |_, x, u| (1.0 + beta * x) * dpu(u))
            .with_partial(Partial::DX, move |_, _, u| beta * pu(u))
            .with_partial(Partial::DXU, move |_, _, u| beta * dpu(u))
            .with_partial(Partial::DUU, move |_, x, u| (1.0 + beta * x) * d2pu(u))
            .with_partial(Partial::DXX, |_, _, _| 0.0)
            .with_partial(Partial::DT, |_, _, _| 0.0)
            .with_partial(Partial::DTT, |_, _, _| 0.0)
            .with_partial(Partial::DTX, |_, _, _| 0.0)
            .with_partial(Partial::DTU, |_, _, _| 0.0);
        let source = SourceModel::new(format!("affine#{seed}"), move |_, x, u| sigma * (PI * x).sin() + kappa * u)
            .with_partial(Partial::DU, move |_, _, _| kappa)
            .with_partial(Partial::DX, move |_, x, _| sigma * PI * (PI * x).cos())
            .with_partial(Partial::DT, |_, _, _| 0.0)
            .with_partial(Partial::DTU, |_, _, _| 0.0)
            .with_partial(Partial::DXU, |_, _, _| 0.0)
            .with_partial(Partial::DUU, |_, _, _| 0.0);
        let init = GridFunction1D::from_fn(d.a, d.b, 1001, |x| {
            let s = 2.0 * x - 1.0;
            4.0 * x * (1.0 - x) * (amps[0] + amps[1] * s + amps[2] * s * s)
        })?;
        let p = Problem::new(
            format!("random#{seed}"),
            d,
            horizon,
            flux,
            source,
            init,
            BoundaryData::zero(),
        )?;
        let spec = SamplingSpec::for_horizon(horizon);
        let Ok((norms, _)) = self_consistent_norms(&p, &spec) else {
            continue;
        };
        let (c1, c2) = compute_c1_c2(&norms)?;
        if m_radius(c1, c2, p.initial.sup_norm(), horizon) <= max_radius {
            return Ok(p);
        }
    }
    Err(Error::Invalid(format!("no random problem with M(T) <= {max_radius} for seed {seed}")))
}
