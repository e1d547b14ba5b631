use thiserror::Error;

/// Errors raised by the solvers, bound calculators and checkers.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("evaluator `{what}` returned a non-finite value at (t={t}, x={x}, u={u})")]
    NonFinite {
        what: String,
        t: f64,
        x: f64,
        u: f64,
    },

    #[error("missing norm entry `{0}` in sup-norm report")]
    MissingNorm(String),

    #[error(
        "no Hoelder surrogate registered for the boundary datum; call \
         `BoundaryData::with_holder(HolderSurrogate::sampled(alpha, h_min))` \
         or `HolderSurrogate::fixed(c2, c3)` before computing final bounds"
    )]
    MissingHolderSurrogate,

    #[error("could not find a self-consistent u-box after {iterations} iterations (last radius {radius})")]
    NoSelfConsistentBox { iterations: usize, radius: f64 },

    #[error("resolution too coarse: {0}")]
    Resolution(String),

    #[error("solver blew up at step {step} (t={t}): {reason}")]
    Blowup { step: usize, t: f64, reason: String },

    #[error("CFL condition violated: dt={dt} exceeds the stable limit {limit}")]
    Cfl { dt: f64, limit: f64 },

    #[error("viscous solve failed for eps={eps}: {source}")]
    AtEpsilon {
        eps: f64,
        #[source]
        source: Box<Error>,
    },

    #[error("compatibility violated: {0}")]
    Compatibility(String),

    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    #[error("test function rejected: {0}")]
    TestFunction(String),

    #[error("hypothesis violated: {0}")]
    Hypothesis(String),

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// True for failures that originate in a solver running away.
    pub fn is_blowup(&self) -> bool {
        match self {
            Error::Blowup { .. } => true,
            Error::AtEpsilon { source, .. } => source.is_blowup(),
            _ => false,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
