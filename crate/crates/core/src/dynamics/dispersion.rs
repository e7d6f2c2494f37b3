use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::spectral::{apply_multiplier, Spectrum};
use crate::{Error, Result};

/// Dispersion exponent `α ∈ [1, 2]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DispersionParams {
    alpha: f64,
}

impl DispersionParams {
    pub fn new(alpha: f64) -> Result<Self> {
        if !(1.0..=2.0).contains(&alpha) {
            return Err(Error::Domain(format!("alpha out of [1,2]: {alpha}")));
        }
        Ok(DispersionParams { alpha })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// `ω_α` without the `ξ ≠ 0` check; callers guarantee it.
    pub(crate) fn omega_raw(&self, xi: f64, eta: f64) -> f64 {
        xi * xi.abs().powf(self.alpha) - eta * eta / xi
    }
}

/// `ω_α(ξ, η) = ξ|ξ|^α − η²/ξ`.
pub fn omega(params: &DispersionParams, xi: f64, eta: f64) -> Result<f64> {
    if xi == 0.0 {
        return Err(Error::Domain("omega is undefined at xi = 0".into()));
    }
    Ok(params.omega_raw(xi, eta))
}

/// `S(t)`: multiplies every `ξ ≠ 0` mode by `e^{itω}`; the `ξ = 0` row is
/// left untouched.
pub fn propagate_linear(spectrum: &Spectrum, params: &DispersionParams, t: f64) -> Spectrum {
    apply_multiplier(spectrum, |xi, eta| {
        if xi == 0.0 {
            Complex64::new(1.0, 0.0)
        } else {
            Complex64::from_polar(1.0, t * params.omega_raw(xi, eta as f64))
        }
    })
}
