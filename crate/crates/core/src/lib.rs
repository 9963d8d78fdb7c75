//! Path-conservative central-upwind solvers for the γ-based stiffened-gas
//! multifluid model in one and two space dimensions.

pub mod aweno;
pub mod error;
pub mod globalflux;
pub mod grid;
pub mod integrator;
pub mod io;
pub mod ldflux;
pub mod par;
pub mod problems;
pub mod recon;
pub mod state;
mod sweep;

pub use error::{Error, Result};
pub use grid::{Boundaries, Boundary, Dim, Field, Grid};
pub use integrator::{Scheme, SchemeConfig, Solver, TimeMethod};
pub use par::ExecPolicy;
pub use state::{ConservedState, FluidSpec, PrimitiveState, Vars};
