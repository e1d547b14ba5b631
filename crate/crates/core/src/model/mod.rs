//! Problem instances, grid functions and certified box norms.

mod boundary;
mod diagnostics;
mod domain;
mod grid_function;
mod models;
mod mollify;
mod problem;
mod smooth;
mod supnorm;

pub use boundary::{BoundaryData, HolderNorms, HolderSurrogate};
pub use diagnostics::{validate_problem, DiagnosticCheck, DiagnosticsReport, DERIVATIVE_REL_TOL};
pub use domain::{Domain1D, Side, DEFAULT_GEOMETRY_CONSTANT};
pub use grid_function::{segment_abs_integral, tv, uniform_nodes, GridFunction1D};
pub use models::{FluxModel, SourceModel};
pub use mollify::{cutoff, mollify_initial_datum};
pub use problem::Problem;
pub use smooth::{fd_time, Eval1, Eval3, NormFn, Partial, Smooth3, FD_STEP_FIRST, FD_STEP_SECOND};
pub use supnorm::{entry_names, sup_norm_over_box, SamplingSpec, SupNormReport};
