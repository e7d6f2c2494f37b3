use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{apply_multiplier, Grid, Spectrum};
use crate::{Error, Result};

/// Radially decreasing cutoff: 1 on `[0, 1]`, 0 on `[2, ∞)`, with a quintic
/// smoothstep shoulder, so the profile is C² across both knots.
pub fn bump(t: f64) -> f64 {
    let t = t.abs();
    if t <= 1.0 {
        1.0
    } else if t >= 2.0 {
        0.0
    } else {
        let s = t - 1.0;
        1.0 - s * s * s * (10.0 + s * (-15.0 + 6.0 * s))
    }
}

/// Annular profile `η₀(τ/2) − η₀(τ)`, supported in `1 ≤ |τ| ≤ 4`.
pub fn lp_annulus(tau: f64) -> f64 {
    bump(0.5 * tau) - bump(tau)
}

/// Galerkin truncation level.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Truncation {
    /// Multiply by `φ(|(ξ,η)|/M)(1 − φ(M|ξ|))`.
    Finite(f64),
    /// No truncation: the low-ξ cut is disabled and the mean is kept.
    None,
}

impl Truncation {
    pub fn finite(m: f64) -> Result<Self> {
        if !(m.is_finite() && m >= 1.0) {
            return Err(Error::Domain(format!("truncation level {m} must be >= 1")));
        }
        Ok(Truncation::Finite(m))
    }
}

pub fn truncation_symbol(trunc: Truncation, xi: f64, eta: f64) -> f64 {
    match trunc {
        Truncation::None => 1.0,
        Truncation::Finite(m) => bump(xi.hypot(eta) / m) * (1.0 - bump(m * xi)),
    }
}

pub fn project_truncation(spectrum: &Spectrum, trunc: Truncation) -> Spectrum {
    apply_multiplier(spectrum, |xi, eta| {
        Complex64::new(truncation_symbol(trunc, xi, eta as f64), 0.0)
    })
}

/// Littlewood–Paley piece `P_N`, the multiplier `η₁(|ξ|/N)`.
pub fn project_dyadic(spectrum: &Spectrum, n: f64) -> Result<Spectrum> {
    if !is_dyadic(n) {
        return Err(Error::Domain(format!("{n} is not a power of two")));
    }
    Ok(apply_multiplier(spectrum, |xi, _| {
        Complex64::new(lp_annulus(xi / n), 0.0)
    }))
}

pub(crate) fn is_dyadic(n: f64) -> bool {
    n > 0.0 && n.is_finite() && n.log2().fract() == 0.0
}

/// Dyadic levels whose pieces sum to the identity on every lattice point
/// with `ξ ≠ 0`.
pub fn dyadic_levels(grid: &Grid) -> Vec<f64> {
    let lo = (grid.dxi() / 4.0).log2().floor() as i32;
    let hi = (grid.dxi() * (grid.nx() / 2) as f64).log2().ceil() as i32;
    (lo..=hi).map(|k| 2f64.powi(k)).collect()
}
