use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::spectral::{
    analyze, synthesize, synthesize_complex, truncation_symbol, Field, Grid, Spectrum, Truncation,
};

/// Dealiasing rule applied to the quadratic product.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Dealias {
    /// Keep `|k| ≤ K` with `3K < n` in each direction.
    TwoThirds,
    None,
}

impl Dealias {
    fn keeps(self, k: i64, n: usize) -> bool {
        match self {
            Dealias::TwoThirds => 3 * k.unsigned_abs() < n as u64,
            Dealias::None => true,
        }
    }
}

/// `u ↦ ½ P̃ ∂_x (P̃u)²` on a fixed grid, with the combined truncation and
/// dealiasing mask tabulated once.
#[derive(Debug, Clone)]
pub struct Nonlinearity {
    grid: Grid,
    mask: Vec<f64>,
}

impl Nonlinearity {
    pub fn new(grid: Grid, trunc: Truncation, dealias: Dealias) -> Self {
        let mut mask = vec![0.0; grid.len()];
        for i in 0..grid.nx() {
            for j in 0..grid.ny() {
                let (k, eta) = (grid.kx(i), grid.eta(j));
                mask[grid.flat(i, j)] =
                    if dealias.keeps(k, grid.nx()) && dealias.keeps(eta, grid.ny()) {
                        truncation_symbol(trunc, grid.xi(i), eta as f64)
                    } else {
                        0.0
                    };
            }
        }
        Nonlinearity { grid, mask }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    /// Evaluate `N̂(v)` for a spectrum on this grid.
    pub fn apply(&self, v: &Spectrum) -> Spectrum {
        let g = self.grid;
        let mut masked = v.clone();
        masked
            .coeffs_mut()
            .iter_mut()
            .zip(&self.mask)
            .for_each(|(c, m)| *c *= m);
        let w = synthesize_complex(&masked);
        let sq: Vec<f64> = w.iter().map(|c| c.re * c.re).collect();
        let mut out = analyze(&Field::from_raw(g, sq));
        let ny = g.ny();
        for (i, row) in out.coeffs_mut().chunks_mut(ny).enumerate() {
            let factor = Complex64::new(0.0, 0.5 * g.xi(i));
            for (j, c) in row.iter_mut().enumerate() {
                *c *= factor * self.mask[i * ny + j];
            }
        }
        out
    }
}

/// `½ P̃_M ∂_x (P̃_M v)²` as a spectrum.
pub fn nonlinear_spectrum(v: &Spectrum, trunc: Truncation, dealias: Dealias) -> Spectrum {
    Nonlinearity::new(*v.grid(), trunc, dealias).apply(v)
}

/// `½ P̃_M ∂_x (P̃_M u)²` with two-thirds dealiasing.
pub fn nonlinear_term(field: &Field, trunc: Truncation) -> Field {
    synthesize(&nonlinear_spectrum(&analyze(field), trunc, Dealias::TwoThirds))
}
