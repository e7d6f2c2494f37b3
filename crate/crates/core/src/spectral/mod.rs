//! Discretized cylinder, its frequency lattice and the Fourier-side toolkit.
//!
//! The x-line is replaced by a periodic box of length `lx`, so the ξ-lattice
//! is `dξ·ℤ` with `dξ = 2π/lx`; the y-circle has period 2π and integer η.
//!
//! # Normalization
//!
//! All transform constants live here. The forward transform is the
//! unnormalized DFT `c_k = Σ_j u_j e^{-i k·x_j}`; the inverse carries
//! `1/(nx·ny)`. With cell area `ΔxΔy = A/(nx·ny)`, `A = 2π·lx`, Parseval reads
//!
//! ```text
//! Σ_j |u_j|² ΔxΔy = (A / (nx·ny)²) Σ_k |c_k|²
//! ```
//!
//! and [`Grid::cell_weight`] returns `√A/(nx·ny)`, the factor that turns a
//! coefficient modulus into its L² contribution.

pub(crate) mod fft;
mod grid;
mod norms;
mod projection;
mod random;
mod spectrum;

pub use grid::Grid;
pub use norms::{norm_bs, norm_hs};
pub use random::random_smooth;
pub use projection::{
    bump, dyadic_levels, lp_annulus, project_dyadic, project_truncation, truncation_symbol,
    Truncation,
};
pub use spectrum::{
    analyze, apply_multiplier, synthesize, synthesize_complex, try_apply_multiplier, Field, Spectrum,
};
