use serde::{Deserialize, Serialize};

use super::{binned_l2, conv_l2, AtomSet, BinGrid};
use crate::{Error, Result};

/// Which bilinear bound to compare against.
///
/// `FirstOrder` and `SecondOrder` ask every input to have ξ-support in an
/// interval of length `k`; `FirstOrder` also asks the slopes `η/ξ` of the
/// two inputs to stay `d` apart. `HighLow` asks `N₂ ≤ N₁/4` and slopes
/// within `d_star` of each other.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "lemma", rename_all = "kebab-case")]
pub enum LemmaTag {
    FirstOrder { k: f64, d: f64 },
    SecondOrder { k: f64 },
    HighLow { d_star: f64 },
}

impl LemmaTag {
    /// The right-hand side without the `‖f₁‖ ‖f₂‖` factor.
    pub fn bound(&self, f1: &AtomSet, f2: &AtomSet) -> f64 {
        let (l1, l2) = (f1.l(), f2.l());
        let (lmin, lmax) = (l1.min(l2), l1.max(l2));
        let jb = |x: f64| (1.0 + x * x).sqrt();
        match *self {
            LemmaTag::FirstOrder { k, d } => k.sqrt() * lmin.sqrt() * jb(lmax / d).sqrt(),
            LemmaTag::SecondOrder { k } => {
                let nmin = f1.n().min(f2.n());
                k.sqrt() * lmin.sqrt() * jb(lmax * nmin).powf(0.25)
            }
            LemmaTag::HighLow { d_star } => {
                let alpha = f1.params().alpha();
                d_star.ln().max(1.0)
                    * f2.n().sqrt()
                    * lmin.sqrt()
                    * jb(lmax / f1.n().powf(0.5 * alpha)).sqrt()
            }
        }
    }

    /// Bins for this bound: sixteen per narrowest slab or interval width.
    pub fn bins(&self, f1: &AtomSet, f2: &AtomSet) -> Result<BinGrid> {
        let base = BinGrid::for_sets(&[f1, f2])?;
        match *self {
            LemmaTag::FirstOrder { k, .. } | LemmaTag::SecondOrder { k } => {
                BinGrid::new(base.tau(), base.xi().min(k / 16.0))
            }
            LemmaTag::HighLow { .. } => Ok(base),
        }
    }

    fn verify(&self, f1: &AtomSet, f2: &AtomSet) -> Result<()> {
        for (i, f) in [f1, f2].into_iter().enumerate() {
            if f.is_empty() {
                return Err(Error::Empty(format!("f{} has no atoms", i + 1)));
            }
            if f.params() != f1.params() {
                return Err(Error::Hypothesis("inputs carry different alpha".into()));
            }
            if let Some(a) = f.atoms().iter().find(|a| a.modulation(f.params()) > f.l()) {
                return Err(Error::Hypothesis(format!(
                    "slab modulation bound L{} = {} exceeded at xi = {}",
                    i + 1,
                    f.l(),
                    a.xi
                )));
            }
        }
        let spread = |f: &AtomSet| {
            let lo = f.atoms().iter().map(|a| a.xi).fold(f64::INFINITY, f64::min);
            let hi = f.atoms().iter().map(|a| a.xi).fold(f64::NEG_INFINITY, f64::max);
            hi - lo
        };
        match *self {
            LemmaTag::FirstOrder { k, .. } | LemmaTag::SecondOrder { k } => {
                for (i, f) in [f1, f2].into_iter().enumerate() {
                    if spread(f) > k {
                        return Err(Error::Hypothesis(format!(
                            "interval length K = {k} exceeded by f{} (spread {})",
                            i + 1,
                            spread(f)
                        )));
                    }
                }
            }
            LemmaTag::HighLow { .. } => {
                if f2.n() > f1.n() / 4.0 {
                    return Err(Error::Hypothesis(format!(
                        "frequency separation N2 << N1 fails: N1 = {}, N2 = {}",
                        f1.n(),
                        f2.n()
                    )));
                }
            }
        }
        match *self {
            LemmaTag::FirstOrder { d, .. } => {
                let sep = slope_separation(f1, f2);
                if sep < d {
                    return Err(Error::Hypothesis(format!(
                        "transversality lower bound D = {d} violated: slopes come within {sep}"
                    )));
                }
            }
            LemmaTag::HighLow { d_star } => {
                let spread = slope_spread(f1, f2);
                if spread > d_star {
                    return Err(Error::Hypothesis(format!(
                        "slope upper bound D* = {d_star} violated: slopes differ by {spread}"
                    )));
                }
            }
            LemmaTag::SecondOrder { .. } => {}
        }
        Ok(())
    }
}

fn sorted_slopes(f: &AtomSet) -> Vec<f64> {
    let mut s: Vec<f64> = f.atoms().iter().map(|a| a.slope()).collect();
    s.sort_by(f64::total_cmp);
    s
}

/// `min |η₁/ξ₁ − η₂/ξ₂|` over pairs of atoms.
pub fn slope_separation(f1: &AtomSet, f2: &AtomSet) -> f64 {
    let (a, b) = (sorted_slopes(f1), sorted_slopes(f2));
    let (mut i, mut j) = (0, 0);
    let mut best = f64::INFINITY;
    while i < a.len() && j < b.len() {
        best = best.min((a[i] - b[j]).abs());
        if a[i] < b[j] {
            i += 1;
        } else {
            j += 1;
        }
    }
    best
}

/// `max |η₁/ξ₁ − η₂/ξ₂|` over pairs of atoms.
pub fn slope_spread(f1: &AtomSet, f2: &AtomSet) -> f64 {
    let (a, b) = (sorted_slopes(f1), sorted_slopes(f2));
    match (a.first(), a.last(), b.first(), b.last()) {
        (Some(a0), Some(a1), Some(b0), Some(b1)) => (a1 - b0).abs().max((b1 - a0).abs()),
        _ => 0.0,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RatioReport {
    pub ratio: f64,
    pub lhs: f64,
    pub rhs: f64,
}

/// `‖f₁ * f₂‖ / (bound · ‖f₁‖ ‖f₂‖)` after checking the hypotheses of the
/// chosen bound. All norms use the bins from [`LemmaTag::bins`].
pub fn bilinear_ratio(f1: &AtomSet, f2: &AtomSet, tag: &LemmaTag) -> Result<RatioReport> {
    tag.verify(f1, f2)?;
    let bins = tag.bins(f1, f2)?;
    let lhs = conv_l2(f1, f2, &bins)?;
    let rhs = tag.bound(f1, f2) * binned_l2(f1, &bins) * binned_l2(f2, &bins);
    if !(rhs > 0.0) {
        return Err(Error::Empty("inputs have zero mass".into()));
    }
    Ok(RatioReport {
        ratio: lhs / rhs,
        lhs,
        rhs,
    })
}
