//! Boundary traces and the checks that decide whether a computed field is an
//! entropy solution: boundary entropy inequalities, entropy residuals,
//! attainment of the initial datum and `L1` stability.

mod bln;
mod entropy;
mod initial;
mod report;
mod residual;
mod stability;
mod test_fn;
mod trace;

pub use bln::{bln_residual, check_bln_inequality, check_bln_min, default_k_grid, sgn, BLN_MIN_SAMPLES, DEFAULT_K_POINTS};
pub use entropy::{kruzkov_pairs, EntropyPair, CONVEXITY_TOL};
pub use initial::{check_initial_trace, InitialTraceReport, INITIAL_LEVELS};
pub use report::{KRow, LevelRow, Record, ResidualReport, Verdict, Witness};
pub use residual::{entropy_residual, quad_tolerance, residual_matrix, residual_scale, ResidualOptions, DEFAULT_QUAD_CONSTANT};
pub use stability::{check_stability, StabilityReport, StabilityRow};
pub use test_fn::{test_family, TestFunction, MIN_FAMILY_SIZE};
pub use trace::{extract_trace, extract_trace_at, extract_trace_with, layer_offset, TraceSeries, TraceSummary, DEFAULT_AVERAGING_RADIUS};
