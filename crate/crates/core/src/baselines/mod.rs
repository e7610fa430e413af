//! Reference solutions: SDE simulation, a finite-difference Kushner–Stratonovich
//! solver, a bootstrap particle filter and the Kalman–Bucy filter.

mod density;
mod fd;
mod kalman;
mod pf;
mod sde;

pub use density::{empirical_density, Axis, GridDensity};
pub use fd::{fd_ks_solver_1d, FdSolver, BOUNDARY_TOL, NEGATIVE_TOL};
pub use kalman::{kalman_bucy, LinearModel};
pub use pf::{bootstrap_pf, systematic_resample, BootstrapFilter, ParticleSet};
pub use sde::{simulate, stream_rng, SimulationOutput, Stream};
