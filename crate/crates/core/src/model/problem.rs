use std::fmt;

use super::boundary::BoundaryData;
use super::domain::Domain1D;
use super::grid_function::GridFunction1D;
use super::models::{FluxModel, SourceModel};
use crate::error::{Error, Result};

/// A complete instance of the initial-boundary value problem.
#[derive(Clone)]
pub struct Problem {
    /// Human-readable identity; hashed into output metadata.
    pub label: String,
    pub domain: Domain1D,
    pub horizon: f64,
    pub flux: FluxModel,
    pub source: SourceModel,
    pub initial: GridFunction1D,
    pub boundary: BoundaryData,
}

impl fmt::Debug for Problem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Problem")
            .field("label", &self.label)
            .field("domain", &self.domain)
            .field("horizon", &self.horizon)
            .field("flux", &self.flux.name)
            .field("source", &self.source.name)
            .finish()
    }
}

impl Problem {
    pub fn new(
        label: impl Into<String>,
        domain: Domain1D,
        horizon: f64,
        flux: FluxModel,
        source: SourceModel,
        initial: GridFunction1D,
        boundary: BoundaryData,
    ) -> Result<Self> {
        if !(horizon.is_finite() && horizon > 0.0) {
            return Err(Error::Invalid(format!("horizon must be positive, got {horizon}")));
        }
        let nodes = initial.nodes();
        let tol = 1e-12 * (1.0 + domain.length());
        if (nodes[0] - domain.a).abs() > tol || (nodes[nodes.len() - 1] - domain.b).abs() > tol {
            return Err(Error::Invalid(format!(
                "initial datum defined on [{}, {}] but the domain is [{}, {}]",
                nodes[0],
                nodes[nodes.len() - 1],
                domain.a,
                domain.b
            )));
        }
        Ok(Problem {
            label: label.into(),
            domain,
            horizon,
            flux,
            source,
            initial,
            boundary,
        })
    }

    /// Same problem with a different initial datum.
    pub fn with_initial(&self, initial: GridFunction1D) -> Result<Self> {
        Problem::new(
            self.label.clone(),
            self.domain,
            self.horizon,
            self.flux.clone(),
            self.source.clone(),
            initial,
            self.boundary.clone(),
        )
    }

    /// Same problem with different boundary data.
    pub fn with_boundary(&self, boundary: BoundaryData) -> Self {
        Problem {
            boundary,
            ..self.clone()
        }
    }

    /// Stable 64-bit FNV-1a hash of the label, as lowercase hex.
    pub fn hash_hex(&self) -> String {
        let mut h: u64 = 0xcbf29ce484222325;
        for b in self.label.bytes() {
            h ^= b as u64;
            h = h.wrapping_mul(0x100000001b3);
        }
        format!("{h:016x}")
    }
}
