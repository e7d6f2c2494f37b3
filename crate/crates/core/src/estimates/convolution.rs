use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::AtomSet;
use crate::{Error, Result};

/// Bin widths in `τ` and `ξ`; `η` is never binned.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BinGrid {
    tau: f64,
    xi: f64,
}

pub(crate) type BinKey = (i64, i64, i64);

impl BinGrid {
    pub fn new(tau: f64, xi: f64) -> Result<Self> {
        if !(tau > 0.0 && xi > 0.0 && tau.is_finite() && xi.is_finite()) {
            return Err(Error::Domain(format!("bin widths must be positive: ({tau}, {xi})")));
        }
        Ok(BinGrid { tau, xi })
    }

    /// Sixteen bins across the narrowest slab among `sets`: the `τ`-width of
    /// `|τ − ω| ≤ L` is `2L`, the `ξ`-width is taken as `N`.
    pub fn for_sets(sets: &[&AtomSet]) -> Result<Self> {
        let l = sets.iter().map(|s| s.l()).fold(f64::INFINITY, f64::min);
        let n = sets.iter().map(|s| s.n()).fold(f64::INFINITY, f64::min);
        BinGrid::new(l / 8.0, n / 16.0)
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    pub fn xi(&self) -> f64 {
        self.xi
    }

    pub fn volume(&self) -> f64 {
        self.tau * self.xi
    }

    /// Bins are centred on the lattice `bτ ℤ × bξ ℤ`.
    pub fn key(&self, tau: f64, xi: f64, eta: i64) -> BinKey {
        (
            (tau / self.tau).round() as i64,
            (xi / self.xi).round() as i64,
            eta,
        )
    }

    pub fn refined(&self, factor: f64) -> Result<Self> {
        BinGrid::new(self.tau / factor, self.xi / factor)
    }

    fn check(&self, sets: &[&AtomSet]) -> Result<()> {
        for s in sets {
            if self.tau > s.l() / 8.0 || self.xi > s.n() / 8.0 {
                return Err(Error::Precondition(format!(
                    "bin resolution ({}, {}) coarser than slab (L = {}, N = {}) / 8",
                    self.tau,
                    self.xi,
                    s.l(),
                    s.n()
                )));
            }
        }
        Ok(())
    }
}

/// Total weight per bin.
pub(crate) fn histogram(f: &AtomSet, bins: &BinGrid) -> HashMap<BinKey, f64> {
    let mut h = HashMap::with_capacity(f.len());
    for a in f.atoms() {
        *h.entry(bins.key(a.tau, a.xi, a.eta)).or_insert(0.0) += a.weight;
    }
    h
}

fn sorted(h: &HashMap<BinKey, f64>) -> Vec<(BinKey, f64)> {
    let mut v: Vec<(BinKey, f64)> = h.iter().map(|(k, w)| (*k, *w)).collect();
    v.sort_unstable_by_key(|e| e.0);
    v
}

fn sum_squares(h: &HashMap<BinKey, f64>) -> f64 {
    sorted(h).iter().map(|e| e.1 * e.1).sum()
}

fn convolve(h1: &HashMap<BinKey, f64>, h2: &HashMap<BinKey, f64>) -> HashMap<BinKey, f64> {
    let (a, b) = (sorted(h1), sorted(h2));
    let mut out = HashMap::with_capacity(a.len().max(b.len()) * 4);
    for &(k1, w1) in &a {
        for &(k2, w2) in &b {
            *out
                .entry((k1.0 + k2.0, k1.1 + k2.1, k1.2 + k2.2))
                .or_insert(0.0) += w1 * w2;
        }
    }
    out
}

/// L² norm of `f` read as the density `H / (bτ bξ)` on its bins.
pub fn binned_l2(f: &AtomSet, bins: &BinGrid) -> f64 {
    (sum_squares(&histogram(f, bins)) / bins.volume()).sqrt()
}

/// `‖f₁ * f₂‖_{L²_{τ,ξ,η}}` of the binned convolution.
///
/// Inputs become bin histograms `H_i`, the histograms convolve exactly on
/// the bin lattice to `G`, and the result is `(Σ G² / (bτ bξ))^{1/2}`. Two
/// single atoms give `w₁ w₂ / (bτ bξ)^{1/2}`.
pub fn conv_l2(f1: &AtomSet, f2: &AtomSet, bins: &BinGrid) -> Result<f64> {
    bins.check(&[f1, f2])?;
    let g = convolve(&histogram(f1, bins), &histogram(f2, bins));
    Ok((sum_squares(&g) / bins.volume()).sqrt())
}

/// `∫ (f₁ * f₂) f₃` on the bin lattice: `Σ G H₃ / (bτ bξ)`.
pub fn trilinear_pairing(f1: &AtomSet, f2: &AtomSet, f3: &AtomSet, bins: &BinGrid) -> Result<f64> {
    bins.check(&[f1, f2, f3])?;
    let h1 = histogram(f1, bins);
    let h2 = histogram(f2, bins);
    let h3 = histogram(f3, bins);
    let (small, large) = if h1.len() <= h2.len() { (&h1, &h2) } else { (&h2, &h1) };
    let small = sorted(small);
    let mut s = 0.0;
    for (k3, w3) in sorted(&h3) {
        for (k, w) in &small {
            if let Some(v) = large.get(&(k3.0 - k.0, k3.1 - k.1, k3.2 - k.2)) {
                s += w * v * w3;
            }
        }
    }
    Ok(s / bins.volume())
}
