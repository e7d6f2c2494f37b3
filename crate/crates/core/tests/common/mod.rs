#![allow(dead_code)]

use std::collections::HashMap;

use fkplab::dynamics::DispersionParams;
use fkplab::estimates::{AtomSet, BinGrid, FreqAtom, Modulation};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Atom-pair double loop.
pub fn brute_conv_l2(f1: &AtomSet, f2: &AtomSet, bins: &BinGrid) -> f64 {
    let mut out: HashMap<(i64, i64, i64), f64> = HashMap::new();
    for a in f1.atoms() {
        let ka = bins.key(a.tau, a.xi, a.eta);
        for b in f2.atoms() {
            let kb = bins.key(b.tau, b.xi, b.eta);
            *out.entry((ka.0 + kb.0, ka.1 + kb.1, ka.2 + kb.2)).or_default() += a.weight * b.weight;
        }
    }
    (out.values().map(|g| g * g).sum::<f64>() / bins.volume()).sqrt()
}

/// Atom triple loop.
pub fn brute_trilinear(f1: &AtomSet, f2: &AtomSet, f3: &AtomSet, bins: &BinGrid) -> f64 {
    let mut s = 0.0;
    for a in f1.atoms() {
        let ka = bins.key(a.tau, a.xi, a.eta);
        for b in f2.atoms() {
            let kb = bins.key(b.tau, b.xi, b.eta);
            for c in f3.atoms() {
                let kc = bins.key(c.tau, c.xi, c.eta);
                if (ka.0 + kb.0, ka.1 + kb.1, ka.2 + kb.2) == kc {
                    s += a.weight * b.weight * c.weight;
                }
            }
        }
    }
    s / bins.volume()
}

/// Atoms on a coarse lattice inside `D_{n,≤l}` so that bins collide.
pub fn tiny_set(rng: &mut ChaCha8Rng, params: DispersionParams, n: f64, l: f64, count: usize) -> AtomSet {
    let atoms = (0..count)
        .map(|_| {
            let xi = n * (0.5 + 0.125 * rng.gen_range(0..12) as f64);
            let eta = rng.gen_range(-2..=2);
            let m = l * 0.125 * rng.gen_range(-8..=8) as f64;
            let tau = fkplab::dynamics::omega(&params, xi, eta as f64).unwrap() + m;
            FreqAtom::new(tau, xi, eta, rng.gen_range(0.1..1.0))
        })
        .collect();
    AtomSet::new(atoms, n, Modulation::AtMost(l), params).unwrap()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
