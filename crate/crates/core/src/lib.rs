//! Solver and verifier for scalar balance laws on bounded intervals with
//! entropy boundary conditions.

pub mod bounds;
pub mod catalog;
pub mod error;
pub mod io;
pub mod lift;
pub mod limit;
pub mod model;
pub mod par;
pub mod verify;
pub mod viscous;

pub use error::{Error, Result};
