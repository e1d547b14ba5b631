//! TOML run configuration and problem construction.

use std::path::{Path, PathBuf};
use std::sync::Arc;

use anyhow::{bail, Context as _, Result};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use bln_core::catalog::{self, CatalogParams};
use bln_core::model::{
    BoundaryData, Domain1D, FluxModel, GridFunction1D, HolderSurrogate, Problem, SourceModel,
};

pub const MIN_NX: usize = 16;

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Config {
    /// Output directory; `--out` overrides it.
    pub out: Option<PathBuf>,
    pub problem: ProblemSpec,
    pub grid: GridSpec,
    pub schedule: ScheduleSpec,
    pub verify: VerifySpec,
    pub sweep: SweepSpec,
    pub stability: Option<StabilitySpec>,
}

/// Either a catalog entry or user expressions. Expressions use `t`, `x`, `u`
/// as appropriate plus the usual functions and constants (`pi`, `e`).
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ProblemSpec {
    pub catalog: Option<String>,
    pub label: Option<String>,
    pub horizon: Option<f64>,
    /// State of the `constant` catalog entry.
    pub value: Option<f64>,
    pub a: f64,
    pub b: f64,
    /// `f(t, x, u)`
    pub flux: Option<String>,
    /// `F(t, x, u)`
    pub source: Option<String>,
    /// `u_o(x)`
    pub initial: Option<String>,
    /// `u_b(t, a)`
    pub left: Option<String>,
    /// `u_b(t, b)`
    pub right: Option<String>,
    pub init_nodes: usize,
    /// Hoelder exponent of the sampled surrogate for non-zero boundary data.
    pub holder_alpha: f64,
}

impl Default for ProblemSpec {
    fn default() -> Self {
        ProblemSpec {
            catalog: None,
            label: None,
            horizon: None,
            value: None,
            a: 0.0,
            b: 1.0,
            flux: None,
            source: None,
            initial: None,
            left: None,
            right: None,
            init_nodes: 1001,
            holder_alpha: 0.5,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GridSpec {
    pub nx: usize,
    /// Safety factor applied to the stable time step.
    pub courant: f64,
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec { nx: 201, courant: 0.5 }
    }
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ScheduleSpec {
    /// Explicit viscosities, strictly decreasing. Absent means the default
    /// geometric schedule for the grid.
    pub eps: Option<Vec<f64>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Check {
    Entropy,
    Bln,
    InitialTrace,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct VerifySpec {
    pub checks: Vec<Check>,
    /// Directory holding `field.csv` and `field.meta.json`; the field is
    /// solved afresh when absent.
    pub field: Option<PathBuf>,
    pub test_functions: usize,
    pub quad_constant: f64,
    pub bln_tol: f64,
    pub seed: u64,
}

impl Default for VerifySpec {
    fn default() -> Self {
        VerifySpec {
            checks: vec![Check::Entropy, Check::Bln, Check::InitialTrace],
            field: None,
            test_functions: 16,
            quad_constant: bln_core::verify::DEFAULT_QUAD_CONSTANT,
            bln_tol: 1e-2,
            seed: 0,
        }
    }
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SweepSpec {
    /// Node counts for the grid-refinement study.
    pub refine: Vec<usize>,
}

/// The second problem `v` differs from `u` in its data only.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct StabilitySpec {
    pub initial: Option<String>,
    pub left: Option<String>,
    pub right: Option<String>,
    /// Relative to `(1 + ‖u‖∞)(b − a)T`.
    pub tol: f64,
}

impl Default for StabilitySpec {
    fn default() -> Self {
        StabilitySpec {
            initial: None,
            left: None,
            right: None,
            tol: 1e-2,
        }
    }
}

impl Config {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        let cfg: Config = toml::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.grid.nx < MIN_NX {
            bail!("grid.nx must be at least {MIN_NX}, got {}", self.grid.nx);
        }
        if !(self.grid.courant > 0.0 && self.grid.courant <= 1.0) {
            bail!("grid.courant must lie in ]0, 1], got {}", self.grid.courant);
        }
        if self.verify.checks.is_empty() {
            bail!("verify.checks is empty");
        }
        if let Some(n) = self.sweep.refine.iter().find(|&&n| n < MIN_NX) {
            bail!("sweep.refine entries must be at least {MIN_NX}, got {n}");
        }
        let p = &self.problem;
        let custom = [&p.flux, &p.source, &p.initial, &p.left, &p.right].iter().any(|e| e.is_some());
        match (&p.catalog, custom) {
            (Some(_), true) => bail!("problem.catalog cannot be combined with expressions"),
            (None, false) => bail!("problem needs either `catalog` or `flux` and `initial` expressions"),
            (None, true) if p.flux.is_none() || p.initial.is_none() => {
                bail!("custom problems need at least `flux` and `initial`")
            }
            _ => {}
        }
        Ok(())
    }

    /// SHA-256 of the canonical form of the sections that determine the
    /// solution: problem, grid and schedule.
    pub fn instance_hash(&self) -> String {
        let canon = serde_json::to_string(&(&self.problem, &self.grid, &self.schedule)).expect("config serializes");
        hex::encode(Sha256::digest(canon.as_bytes()))
    }

    pub fn build_problem(&self) -> Result<Problem> {
        let s = &self.problem;
        if let Some(name) = &s.catalog {
            let mut params = CatalogParams {
                horizon: s.horizon,
                init_nodes: s.init_nodes,
                ..CatalogParams::default()
            };
            if let Some(v) = s.value {
                params.value = v;
            }
            return Ok(catalog::build(name, &params)?);
        }
        let domain = Domain1D::new(s.a, s.b)?;
        let horizon = s.horizon.unwrap_or(1.0);
        let flux_src = s.flux.as_deref().unwrap_or("0");
        let source_src = s.source.as_deref().unwrap_or("0");
        let f = Expr::parse(flux_src, &["t", "x", "u"])?;
        let g = Expr::parse(source_src, &["t", "x", "u"])?;
        let flux = FluxModel::new(flux_src, move |t, x, u| f.eval(&[t, x, u]));
        let source = if source_src.trim() == "0" {
            SourceModel::zero()
        } else {
            SourceModel::new(source_src, move |t, x, u| g.eval(&[t, x, u]))
        };
        let initial = initial_datum(s.initial.as_deref().unwrap_or("0"), &domain, s.init_nodes)?;
        let boundary = boundary_data(s.left.as_deref(), s.right.as_deref(), s.holder_alpha)?;
        let label = s.label.clone().unwrap_or_else(|| format!("custom:{}", &self.instance_hash()[..16]));
        Ok(Problem::new(label, domain, horizon, flux, source, initial, boundary)?)
    }

    /// The `v` problem of a stability run.
    pub fn build_perturbed(&self, base: &Problem) -> Result<Problem> {
        let Some(st) = &self.stability else {
            bail!("the stability command needs a [stability] section");
        };
        let mut v = base.clone();
        if let Some(src) = &st.initial {
            v = v.with_initial(initial_datum(src, &base.domain, self.problem.init_nodes)?)?;
        }
        if st.left.is_some() || st.right.is_some() {
            let keep = |side| {
                let b = base.boundary.clone();
                move |t: f64| b.value(side, t)
            };
            let left: Arc<dyn Fn(f64) -> f64 + Send + Sync> = match &st.left {
                Some(src) => expr1(src)?,
                None => Arc::new(keep(bln_core::model::Side::Left)),
            };
            let right: Arc<dyn Fn(f64) -> f64 + Send + Sync> = match &st.right {
                Some(src) => expr1(src)?,
                None => Arc::new(keep(bln_core::model::Side::Right)),
            };
            v = v.with_boundary(
                BoundaryData::from_arcs(left, right)
                    .with_holder(HolderSurrogate::sampled(self.problem.holder_alpha, 1e-3)),
            );
        }
        Ok(v)
    }
}

fn expr1(src: &str) -> Result<Arc<dyn Fn(f64) -> f64 + Send + Sync>> {
    let e = Expr::parse(src, &["t"])?;
    Ok(Arc::new(move |t| e.eval(&[t])))
}

fn initial_datum(src: &str, d: &Domain1D, n: usize) -> Result<GridFunction1D> {
    let e = Expr::parse(src, &["x"])?;
    Ok(GridFunction1D::from_fn(d.a, d.b, n.max(2), |x| e.eval(&[x]))?)
}

fn boundary_data(left: Option<&str>, right: Option<&str>, alpha: f64) -> Result<BoundaryData> {
    let zero = |s: Option<&str>| s.is_none_or(|s| s.trim() == "0");
    if zero(left) && zero(right) {
        return Ok(BoundaryData::zero());
    }
    if !(alpha > 0.0 && alpha < 1.0) {
        bail!("problem.holder_alpha must lie in ]0, 1[, got {alpha}");
    }
    let l = expr1(left.unwrap_or("0"))?;
    let r = expr1(right.unwrap_or("0"))?;
    let b = BoundaryData::from_arcs(l, r).with_holder(HolderSurrogate::sampled(alpha, 1e-3));
    Ok(if b.value(bln_core::model::Side::Left, 0.0) == 0.0 && b.value(bln_core::model::Side::Right, 0.0) == 0.0 {
        b.assert_zero_at_origin()?
    } else {
        b
    })
}

thread_local! {
    // meval contexts are not Send, so each thread keeps its own builtins
    static BUILTINS: meval::Context<'static> = meval::Context::new();
}

/// Unused variable slots are bound under a name no expression can contain.
const PAD: &str = "#";

/// Parsed expression over named variables; evaluation binds them by position.
struct Expr {
    expr: meval::Expr,
    vars: Vec<&'static str>,
}

impl Expr {
    fn parse(src: &str, vars: &[&'static str]) -> Result<Self> {
        assert!(vars.len() <= 3);
        let expr: meval::Expr = src.parse().with_context(|| format!("parsing expression `{src}`"))?;
        let e = Expr { expr, vars: vars.to_vec() };
        // surfaces unknown variables and functions at load time
        let probe = vec![0.5; vars.len()];
        e.try_eval(&probe).with_context(|| format!("evaluating expression `{src}`"))?;
        Ok(e)
    }

    fn try_eval(&self, vals: &[f64]) -> std::result::Result<f64, meval::Error> {
        let mut bound = [(PAD, 0.0); 3];
        for (slot, (name, v)) in bound.iter_mut().zip(self.vars.iter().zip(vals)) {
            *slot = (name, *v);
        }
        BUILTINS.with(|ctx| self.expr.eval_with_context((bound, ctx)))
    }

    fn eval(&self, vals: &[f64]) -> f64 {
        self.try_eval(vals).unwrap_or(f64::NAN)
    }
}
