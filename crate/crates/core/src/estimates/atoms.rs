use serde::{Deserialize, Serialize};

use crate::dynamics::DispersionParams;
use crate::{Error, Result};

/// A weighted point mass at `(τ, ξ, η) ∈ ℝ × ℝ × ℤ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FreqAtom {
    pub tau: f64,
    pub xi: f64,
    pub eta: i64,
    pub weight: f64,
}

impl FreqAtom {
    pub fn new(tau: f64, xi: f64, eta: i64, weight: f64) -> Self {
        FreqAtom {
            tau,
            xi,
            eta,
            weight,
        }
    }

    /// `|τ − ω_α(ξ, η)|`.
    pub fn modulation(&self, params: &DispersionParams) -> f64 {
        (self.tau - params.omega_raw(self.xi, self.eta as f64)).abs()
    }

    /// `η / ξ`.
    pub fn slope(&self) -> f64 {
        self.eta as f64 / self.xi
    }
}

/// The modulation part of a slab: `|τ − ω| ∼ L` or `|τ − ω| ≤ L`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Modulation {
    Level(f64),
    AtMost(f64),
}

impl Modulation {
    pub fn size(&self) -> f64 {
        match *self {
            Modulation::Level(l) | Modulation::AtMost(l) => l,
        }
    }

    /// Dyadic convention: `Level(L)` holds `L/2 < m ≤ L`, `AtMost(L)` holds
    /// `m ≤ L`.
    pub fn admits(&self, m: f64) -> bool {
        match *self {
            Modulation::Level(l) => m > 0.5 * l && m <= l,
            Modulation::AtMost(l) => m <= l,
        }
    }
}

pub(crate) fn is_dyadic(x: f64) -> bool {
    x > 0.0 && x.is_finite() && x.log2().fract() == 0.0
}

/// Atoms supported in the slab `D_{N,L}` or `D_{N,≤L}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AtomSet {
    atoms: Vec<FreqAtom>,
    n: f64,
    modulation: Modulation,
    params: DispersionParams,
}

impl AtomSet {
    /// Checks `|ξ| ∈ [N/4, 4N]`, `|τ − ω| ≤ 4L` and finite nonnegative
    /// weights.
    pub fn new(
        atoms: Vec<FreqAtom>,
        n: f64,
        modulation: Modulation,
        params: DispersionParams,
    ) -> Result<Self> {
        if !is_dyadic(n) {
            return Err(Error::Domain(format!("N = {n} is not dyadic")));
        }
        let l = modulation.size();
        if !is_dyadic(l) {
            return Err(Error::Domain(format!("L = {l} is not dyadic")));
        }
        for a in &atoms {
            if !(a.weight >= 0.0 && a.weight.is_finite() && a.tau.is_finite()) {
                return Err(Error::Domain(format!("invalid atom {a:?}")));
            }
            let x = a.xi.abs();
            if !(x >= 0.25 * n && x <= 4.0 * n) {
                return Err(Error::Domain(format!("atom xi = {} outside |xi| ~ {n}", a.xi)));
            }
            if a.modulation(&params) > 4.0 * l {
                return Err(Error::Domain(format!(
                    "atom modulation {} outside L = {l}",
                    a.modulation(&params)
                )));
            }
        }
        Ok(AtomSet {
            atoms,
            n,
            modulation,
            params,
        })
    }

    pub fn atoms(&self) -> &[FreqAtom] {
        &self.atoms
    }

    pub fn n(&self) -> f64 {
        self.n
    }

    pub fn l(&self) -> f64 {
        self.modulation.size()
    }

    pub fn modulation(&self) -> Modulation {
        self.modulation
    }

    pub fn params(&self) -> &DispersionParams {
        &self.params
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    /// `Σ w²`, the squared L² mass with atoms read as orthonormal
    /// coefficients.
    pub fn mass(&self) -> f64 {
        self.atoms.iter().map(|a| a.weight * a.weight).sum()
    }
}

/// Routes atoms by modulation `m`: `m ≤ l_min` into `D_{N,≤l_min}`, the
/// rest into `D_{N,L}` with `L = 2^{⌈log₂ m⌉}`. Slabs come out ordered by
/// `L`; empty slabs are omitted.
pub fn modulation_split(
    f: &AtomSet,
    params: &DispersionParams,
    n: f64,
    l_min: f64,
) -> Result<Vec<AtomSet>> {
    if !(is_dyadic(l_min) && l_min >= 1.0) {
        return Err(Error::Domain(format!("l_min = {l_min} must be dyadic and >= 1")));
    }
    let mut low = Vec::new();
    let mut levels: std::collections::BTreeMap<i32, Vec<FreqAtom>> = Default::default();
    for a in f.atoms() {
        let m = a.modulation(params);
        if m <= l_min {
            low.push(*a);
        } else {
            let mut k = m.log2().ceil() as i32;
            if 2f64.powi(k - 1) >= m {
                k -= 1;
            } else if 2f64.powi(k) < m {
                k += 1;
            }
            levels.entry(k).or_default().push(*a);
        }
    }
    let mut out = Vec::new();
    if !low.is_empty() {
        out.push(AtomSet::new(low, n, Modulation::AtMost(l_min), *params)?);
    }
    for (k, atoms) in levels {
        out.push(AtomSet::new(atoms, n, Modulation::Level(2f64.powi(k)), *params)?);
    }
    Ok(out)
}

/// `Σ_L L^{1/2} (1 + L/N₊^{α+1})^{1/4} ‖f_L‖` over the slabs of a
/// partition; `weighted = false` drops the `(1 + L/N₊^{α+1})^{1/4}` factor.
pub fn xn_norm(
    parts: &[AtomSet],
    n: f64,
    params: &DispersionParams,
    weighted: bool,
) -> Result<f64> {
    let np = n.max(1.0).powf(params.alpha() + 1.0);
    let mut total = 0.0;
    for part in parts {
        if let Some(a) = part
            .atoms()
            .iter()
            .find(|a| !part.modulation().admits(a.modulation(params)))
        {
            return Err(Error::Hypothesis(format!(
                "uncovered atom at (tau, xi, eta) = ({}, {}, {})",
                a.tau, a.xi, a.eta
            )));
        }
        let l = part.l();
        let w = if weighted { (1.0 + l / np).powf(0.25) } else { 1.0 };
        total += l.sqrt() * w * part.mass().sqrt();
    }
    Ok(total)
}
