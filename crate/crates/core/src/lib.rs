//! Pseudo-spectral simulation and numerical estimate laboratory for the
//! dispersion-generalized KP-II equation
//!
//! ```text
//! ∂_t u − ∂_x D_x^α u + ∂_x^{-1} ∂_y² u = u ∂_x u,   (x, y) ∈ ℝ × 𝕋
//! ```
//!
//! The crate is organised bottom-up:
//!
//! * [`spectral`] grids, transforms, Fourier multipliers, Littlewood–Paley and
//!   truncation projections, anisotropic Sobolev norms.
//! * [`dynamics`] dispersion relation, exact linear propagator, the truncated
//!   quadratic nonlinearity, an exponential Runge–Kutta integrator and the
//!   conserved functionals.
//! * [`resonance`] the resonance function, its two-part split and case
//!   classification.
//! * [`flatgeom`] flatness defects, null directions, flat parallelograms,
//!   tilings and lattice measures on ℝ × ℤ.
//! * [`estimates`] L⁴ Strichartz fits on Knapp data, binned convolution
//!   bounds on frequency atoms and the modulation-weighted X_N norm.
//! * [`longtime`] weighted mass monotonicity, rightward mass and the line
//!   soliton.
//! * [`harness`] experiment configuration, dispatch and checkpoints.
//!
//! Data-parallel loops go through [`par`]; disabling the default `parallel`
//! feature makes every one of them sequential with identical results.

// `!(x > 0.0)` style guards are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod dynamics;
pub mod error;
pub mod estimates;
pub mod flatgeom;
pub mod harness;
pub mod longtime;
pub mod par;
pub mod resonance;
pub mod spectral;

pub use error::{Error, Result};

pub use num_complex::Complex64;
