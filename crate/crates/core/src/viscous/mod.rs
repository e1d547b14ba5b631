//! Parabolic regularization solved by an IMEX finite-difference scheme.

mod field;
mod grid;
mod scheme;
mod tridiag;

pub use field::{row_l1, trapezoid, Field, FieldMeta};
pub use grid::Grid1D;
pub use scheme::{
    cfl_from_speeds, cfl_grid, cfl_timestep, imex_step, llf_flux, local_speed, solve_viscous, solve_viscous_with,
    time_lipschitz_deficit, GrowthBound, StepWork, ViscousOptions, NT_MIN,
};
pub use tridiag::solve_tridiagonal;
