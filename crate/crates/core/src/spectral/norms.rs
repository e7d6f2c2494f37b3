use super::Spectrum;
use crate::{Error, Result};

fn japanese(x: f64) -> f64 {
    (1.0 + x * x).sqrt()
}

fn weighted_norm(spectrum: &Spectrum, weight: impl Fn(f64, i64) -> f64) -> f64 {
    let g = spectrum.grid();
    let c = spectrum.coeffs();
    let mut acc = 0.0;
    for i in 0..g.nx() {
        let xi = g.xi(i);
        for j in 0..g.ny() {
            let w = weight(xi, g.eta(j));
            acc += w * w * c[g.flat(i, j)].norm_sqr();
        }
    }
    acc.sqrt() * g.cell_weight()
}

/// `‖⟨ξ⟩^{s1} ⟨η⟩^{s2} û‖_{L²}`.
pub fn norm_hs(spectrum: &Spectrum, s1: f64, s2: f64) -> f64 {
    weighted_norm(spectrum, |xi, eta| {
        japanese(xi).powf(s1) * japanese(eta as f64).powf(s2)
    })
}

/// `‖⟨ξ⟩^s (1 + |η|/|ξ|) û‖_{L²}`, with weight 1 on the mean mode.
///
/// Fails if any mode `(0, η ≠ 0)` is nonzero, where the weight is infinite.
pub fn norm_bs(spectrum: &Spectrum, s: f64) -> Result<f64> {
    let g = spectrum.grid();
    for j in 1..g.ny() {
        if spectrum.coeffs()[g.flat(0, j)].norm() > 0.0 {
            return Err(Error::InfiniteWeight { eta: g.eta(j) });
        }
    }
    Ok(weighted_norm(spectrum, |xi, eta| {
        if xi == 0.0 {
            1.0
        } else {
            japanese(xi).powf(s) * (1.0 + eta.unsigned_abs() as f64 / xi.abs())
        }
    }))
}
