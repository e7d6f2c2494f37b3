//! Numerical counterparts of the linear and bilinear estimates: L⁴
//! Strichartz norms on Knapp caps, binned convolutions of frequency atoms
//! and the modulation-weighted X_N norm.

mod atoms;
mod bilinear;
mod convolution;
mod knapp;
mod strichartz;
mod suite;

pub use atoms::{modulation_split, xn_norm, AtomSet, FreqAtom, Modulation};
pub use bilinear::{bilinear_ratio, slope_separation, slope_spread, LemmaTag, RatioReport};
pub use convolution::{binned_l2, conv_l2, trilinear_pairing, BinGrid};
pub use knapp::{knapp_data, l4_norm, KnappSpec};
pub use strichartz::{knapp_generator, strichartz_fit, StrichartzFit};
pub use suite::{
    build_trial, calibration_configs, calibration_run, random_config, run_suite, trial_ratio,
    LemmaKind, SuiteReport, TrialConfig, CALIBRATED_MAX, SUITE_SEED,
};
