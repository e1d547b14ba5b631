//! Vanishing-viscosity limit and the finite-volume reference solver.

mod fv;
mod schedule;
mod sweep;

pub use fv::{godunov_flux, solve_fv_entropy, solve_fv_entropy_with};
pub use schedule::{CauchyReport, EpsSchedule, DEFAULT_EPS0_FRACTION, DEFAULT_LEVELS, EPS_FLOOR_DX};
pub use sweep::{
    direct_viscous_limit, direct_viscous_sweep, full_solve, fv_reference, mollification_sweep,
    vanishing_viscosity_limit, vanishing_viscosity_solve, FullSolution, FullSolveOptions,
};
