use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{bilinear_ratio, slope_separation, slope_spread, AtomSet, FreqAtom, LemmaTag, Modulation};
use crate::dynamics::DispersionParams;
use crate::{par, Error, Result};

/// Seed of the randomized bilinear suites.
pub const SUITE_SEED: u64 = 0x4b50_3232;

/// Largest ratio seen by [`calibration_run`], per lemma.
pub const CALIBRATED_MAX: [(LemmaKind, f64); 3] = [
    (LemmaKind::FirstOrder, 0.4225658381724641),
    (LemmaKind::SecondOrder, 0.7883100804962939),
    (LemmaKind::HighLow, 0.3625666084969306),
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LemmaKind {
    FirstOrder,
    SecondOrder,
    HighLow,
}

impl LemmaKind {
    pub const ALL: [LemmaKind; 3] = [LemmaKind::FirstOrder, LemmaKind::SecondOrder, LemmaKind::HighLow];

    pub fn calibrated_max(self) -> f64 {
        CALIBRATED_MAX.iter().find(|c| c.0 == self).map(|c| c.1).unwrap()
    }
}

/// One admissible pair of atom sets, described by its generating
/// parameters.
///
/// Set `i` has `16` ξ-columns evenly spread over `[xi_i, xi_i + k]`, rows
/// `η ∈ eta_i.0 ..= eta_i.1` and `tau_samples` modulation offsets in
/// `[−L_i, L_i]` per column. With `uniform` the offsets are evenly spaced
/// and every weight is one; otherwise offsets are uniform random, atoms are
/// kept with probability `density` and weights are uniform in `(0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrialConfig {
    pub kind: LemmaKind,
    pub alpha: f64,
    pub n: [f64; 2],
    pub l: [f64; 2],
    pub k: f64,
    pub xi: [f64; 2],
    pub eta: [(i64, i64); 2],
    pub tau_samples: usize,
    pub uniform: bool,
    pub density: f64,
    /// Multiplies the measured slope separation (first order) or spread
    /// (high-low) to give `D` or `D*`.
    pub slack: f64,
    pub seed: u64,
}

const COLUMNS: usize = 16;

/// Builds the atom sets and the tag of a trial.
pub fn build_trial(cfg: &TrialConfig) -> Result<(AtomSet, AtomSet, LemmaTag)> {
    let params = DispersionParams::new(cfg.alpha)?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut sets = Vec::with_capacity(2);
    for i in 0..2 {
        let mut atoms = Vec::new();
        let l = cfg.l[i];
        for c in 0..COLUMNS {
            let xi = cfg.xi[i] + (c as f64 + 0.5) * cfg.k / COLUMNS as f64;
            for eta in cfg.eta[i].0..=cfg.eta[i].1 {
                let w0 = params.omega_raw(xi, eta as f64);
                for s in 0..cfg.tau_samples {
                    let (m, w) = if cfg.uniform {
                        (-l + (s as f64 + 0.5) * 2.0 * l / cfg.tau_samples as f64, 1.0)
                    } else {
                        let keep = rng.gen::<f64>() < cfg.density;
                        let m = rng.gen_range(-l..=l);
                        let w = 1.0 - rng.gen::<f64>();
                        if !keep {
                            continue;
                        }
                        (m, w)
                    };
                    atoms.push(FreqAtom::new(w0 + m, xi, eta, w));
                }
            }
        }
        sets.push(AtomSet::new(atoms, cfg.n[i], Modulation::AtMost(l), params)?);
    }
    let f2 = sets.pop().unwrap();
    let f1 = sets.pop().unwrap();
    if f1.is_empty() || f2.is_empty() {
        return Err(Error::Empty("trial produced an empty atom set".into()));
    }
    let tag = match cfg.kind {
        LemmaKind::FirstOrder => {
            let sep = slope_separation(&f1, &f2);
            if !(sep > 1e-9) {
                return Err(Error::Hypothesis("trial slopes are not transversal".into()));
            }
            LemmaTag::FirstOrder {
                k: cfg.k,
                d: sep * cfg.slack,
            }
        }
        LemmaKind::SecondOrder => LemmaTag::SecondOrder { k: cfg.k },
        LemmaKind::HighLow => LemmaTag::HighLow {
            d_star: slope_spread(&f1, &f2) * cfg.slack,
        },
    };
    Ok((f1, f2, tag))
}

/// Ratio of one trial.
pub fn trial_ratio(cfg: &TrialConfig) -> Result<f64> {
    let (f1, f2, tag) = build_trial(cfg)?;
    Ok(bilinear_ratio(&f1, &f2, &tag)?.ratio)
}

fn pick<T: Copy>(rng: &mut ChaCha8Rng, xs: &[T]) -> T {
    xs[rng.gen_range(0..xs.len())]
}

/// A random admissible configuration for `kind`.
pub fn random_config(kind: LemmaKind, rng: &mut ChaCha8Rng) -> TrialConfig {
    loop {
        let alpha = pick(rng, &[1.5, 2.0]);
        let (n, k) = match kind {
            LemmaKind::HighLow => {
                let n1 = pick(rng, &[8.0, 16.0]);
                let n2 = pick(rng, &[1.0, 2.0]);
                ([n1, n2], n2)
            }
            _ => {
                let n1 = pick(rng, &[1.0, 2.0, 4.0, 8.0]);
                let n2 = pick(rng, &[1.0, 2.0, 4.0, 8.0]);
                let nmin = f64::min(n1, n2);
                ([n1, n2], nmin * pick(rng, &[0.25, 0.5, 1.0]))
            }
        };
        let l = [
            2f64.powi(rng.gen_range(0..=6)),
            2f64.powi(rng.gen_range(0..=6)),
        ];
        let mut xi = [0.0; 2];
        for i in 0..2 {
            let lo = 0.5 * n[i];
            let hi = 2.0 * n[i] - k;
            let x = rng.gen_range(lo..=hi);
            xi[i] = if rng.gen_bool(0.5) { x } else { -x - k };
        }
        let mut eta = [(0, 0); 2];
        let e1: i64 = rng.gen_range(-8..=8);
        let e2 = e1 + rng.gen_range(-16..=16);
        for (i, e) in [e1, e2].into_iter().enumerate() {
            eta[i] = (e, e + rng.gen_range(0..=2));
        }
        let slack = match kind {
            LemmaKind::FirstOrder => rng.gen_range(0.25..=1.0),
            LemmaKind::SecondOrder => 1.0,
            LemmaKind::HighLow => rng.gen_range(1.0..=4.0),
        };
        let cfg = TrialConfig {
            kind,
            alpha,
            n,
            l,
            k,
            xi,
            eta,
            tau_samples: 16,
            uniform: false,
            density: rng.gen_range(0.2..=1.0),
            slack,
            seed: rng.gen(),
        };
        if build_trial(&cfg).is_ok() {
            return cfg;
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub kind: LemmaKind,
    pub trials: usize,
    pub seed: u64,
    pub max_ratio: f64,
    pub mean_ratio: f64,
    pub argmax: TrialConfig,
    pub ratios: Vec<f64>,
    /// `α` of each trial.
    pub alphas: Vec<f64>,
}

/// `trials` random admissible trials; trial `i` draws from its own stream
/// seeded by `seed + i`.
pub fn run_suite(kind: LemmaKind, trials: usize, seed: u64) -> Result<SuiteReport> {
    if trials == 0 {
        return Err(Error::Empty("suite needs at least one trial".into()));
    }
    let results = par::map_range(trials, |i| -> Result<(TrialConfig, f64)> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(i as u64));
        let cfg = random_config(kind, &mut rng);
        Ok((cfg, trial_ratio(&cfg)?))
    });
    let results: Vec<(TrialConfig, f64)> = results.into_iter().collect::<Result<_>>()?;
    summarize(kind, seed, results)
}

fn summarize(kind: LemmaKind, seed: u64, results: Vec<(TrialConfig, f64)>) -> Result<SuiteReport> {
    let (mut best, mut max_ratio) = (0, f64::NEG_INFINITY);
    for (i, r) in results.iter().enumerate() {
        if !r.1.is_finite() {
            return Err(Error::Domain(format!("non-finite ratio in trial {i}")));
        }
        if r.1 > max_ratio {
            best = i;
            max_ratio = r.1;
        }
    }
    let ratios: Vec<f64> = results.iter().map(|r| r.1).collect();
    let alphas: Vec<f64> = results.iter().map(|r| r.0.alpha).collect();
    Ok(SuiteReport {
        kind,
        trials: results.len(),
        seed,
        max_ratio,
        mean_ratio: ratios.iter().sum::<f64>() / ratios.len() as f64,
        argmax: results[best].0,
        ratios,
        alphas,
    })
}

/// The deterministic calibration family: dense uniform sets over a fixed
/// parameter grid.
pub fn calibration_configs(kind: LemmaKind) -> Vec<TrialConfig> {
    let mut out = Vec::new();
    for alpha in [1.5, 2.0] {
        for &(n1, n2) in match kind {
            LemmaKind::HighLow => &[(8.0, 1.0), (16.0, 2.0)][..],
            _ => &[(1.0, 1.0), (1.0, 4.0), (4.0, 4.0), (8.0, 2.0)][..],
        } {
            for l1 in [1.0, 8.0, 64.0] {
                for l2 in [1.0, 8.0, 64.0] {
                    let k = if kind == LemmaKind::HighLow { n2 } else { f64::min(n1, n2) };
                    let cfg = TrialConfig {
                        kind,
                        alpha,
                        n: [n1, n2],
                        l: [l1, l2],
                        k,
                        xi: [0.5 * n1, 0.5 * n2],
                        eta: [(0, 2), (4, 6)],
                        tau_samples: 16,
                        uniform: true,
                        density: 1.0,
                        slack: 1.0,
                        seed: 0,
                    };
                    if build_trial(&cfg).is_ok() {
                        out.push(cfg);
                    }
                }
            }
        }
    }
    out
}

/// Runs the calibration family and reports its largest ratio.
pub fn calibration_run(kind: LemmaKind) -> Result<SuiteReport> {
    let configs = calibration_configs(kind);
    if configs.is_empty() {
        return Err(Error::Empty("empty calibration family".into()));
    }
    let results = par::map(&configs, |c| trial_ratio(c).map(|r| (*c, r)));
    summarize(kind, 0, results.into_iter().collect::<Result<_>>()?)
}
