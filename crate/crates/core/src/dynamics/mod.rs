//! Linear flow, truncated nonlinearity, ETDRK4 time stepping and the
//! conserved functionals.
//!
//! In Fourier variables the equation reads `∂_t û = iω_α û + N̂(u)` with
//! `ω_α(ξ,η) = ξ|ξ|^α − η²/ξ` and
//! `N̂(u) = ½ iξ φ̃ F[(P̃u)²]`, where `P̃` multiplies by the truncation
//! symbol times the dealiasing mask.

mod conserved;
mod dispersion;
mod etdrk4;
mod nonlinear;
mod solver;

pub use conserved::{energy, energy_parts, mass, EnergyParts};
pub use dispersion::{omega, propagate_linear, DispersionParams};
pub use etdrk4::Etdrk4;
pub use nonlinear::{nonlinear_spectrum, nonlinear_term, Dealias, Nonlinearity};
pub use solver::{simulate, step, SolverConfig, Trajectory};
