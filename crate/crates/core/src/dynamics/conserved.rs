use serde::{Deserialize, Serialize};

use super::DispersionParams;
use crate::spectral::{analyze, Field};
use crate::{Error, Result};

/// `∫ u² dx dy` by the trapezoid rule.
pub fn mass(field: &Field) -> f64 {
    field.integrate(|v| v * v)
}

/// The three summands of the energy.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnergyParts {
    /// `½ ∫ |D_x^{α/2} u|²`
    pub dispersive: f64,
    /// `½ ∫ |∂_x⁻¹ ∂_y u|²`, entering with a minus sign.
    pub transverse: f64,
    /// `∫ u³ / 6`
    pub cubic: f64,
}

impl EnergyParts {
    pub fn total(&self) -> f64 {
        self.dispersive - self.transverse + self.cubic
    }
}

/// Modes `(0, η ≠ 0)` below this fraction of the largest coefficient count
/// as transform round-off rather than a constraint violation.
const CONSTRAINT_TOL: f64 = 1e-10;

pub fn energy_parts(field: &Field, params: &DispersionParams) -> Result<EnergyParts> {
    let s = analyze(field);
    let g = *s.grid();
    let c = s.coeffs();
    let scale = s.max_abs().max(f64::MIN_POSITIVE);
    for j in 1..g.ny() {
        if c[g.flat(0, j)].norm() > CONSTRAINT_TOL * scale {
            return Err(Error::InfiniteWeight { eta: g.eta(j) });
        }
    }
    let w = g.cell_weight().powi(2);
    let (mut disp, mut trans) = (0.0, 0.0);
    for i in 0..g.nx() {
        let xi = g.xi(i);
        if xi == 0.0 {
            continue;
        }
        let d = xi.abs().powf(params.alpha());
        for j in 0..g.ny() {
            let a = c[g.flat(i, j)].norm_sqr();
            let r = g.eta(j) as f64 / xi;
            disp += d * a;
            trans += r * r * a;
        }
    }
    Ok(EnergyParts {
        dispersive: 0.5 * w * disp,
        transverse: 0.5 * w * trans,
        cubic: field.integrate(|v| v * v * v) / 6.0,
    })
}

/// `E_α(u) = ∫ ½|D_x^{α/2}u|² − ½|∂_x⁻¹∂_y u|² + u³/6`.
pub fn energy(field: &Field, params: &DispersionParams) -> Result<f64> {
    energy_parts(field, params).map(|p| p.total())
}
