use serde::{Deserialize, Serialize};

use super::{propagate_linear, Dealias, DispersionParams, Etdrk4, Nonlinearity};
use crate::spectral::{analyze, Field, Spectrum, Truncation};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    pub params: DispersionParams,
    pub m_trunc: Truncation,
    pub dt: f64,
    pub t_end: f64,
    pub dealias: Dealias,
    pub snapshot_stride: usize,
    /// When false the nonlinearity is switched off and only the linear flow
    /// is integrated.
    pub nonlinear: bool,
}

impl SolverConfig {
    pub fn new(params: DispersionParams, m_trunc: Truncation, dt: f64, t_end: f64) -> Self {
        SolverConfig {
            params,
            m_trunc,
            dt,
            t_end,
            dealias: Dealias::TwoThirds,
            snapshot_stride: 1,
            nonlinear: true,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.dt.is_finite() && self.dt > 0.0) {
            return Err(Error::Domain(format!("dt = {} must be positive", self.dt)));
        }
        if !(self.t_end.is_finite() && self.t_end >= 0.0) {
            return Err(Error::Domain(format!("t_end = {} must be >= 0", self.t_end)));
        }
        if self.snapshot_stride == 0 {
            return Err(Error::Domain("snapshot_stride must be positive".into()));
        }
        Ok(())
    }

    /// Number of steps needed so that the final time is within `dt/2` of
    /// `t_end`.
    pub fn steps(&self) -> usize {
        (self.t_end / self.dt).round() as usize
    }

    fn stepper(&self, spectrum: &Spectrum) -> Stepper {
        if self.nonlinear {
            let nl = Nonlinearity::new(*spectrum.grid(), self.m_trunc, self.dealias);
            Stepper::Exp(Box::new(Etdrk4::new(self.params, self.dt, nl)))
        } else {
            Stepper::Linear
        }
    }
}

enum Stepper {
    Exp(Box<Etdrk4>),
    Linear,
}

impl Stepper {
    fn advance(&self, v: &Spectrum, params: &DispersionParams, dt: f64) -> Spectrum {
        match self {
            Stepper::Exp(s) => s.step(v),
            Stepper::Linear => propagate_linear(v, params, dt),
        }
    }
}

/// Time-stamped snapshots of one run.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub snapshots: Vec<(f64, Spectrum)>,
    pub config: SolverConfig,
}

impl Trajectory {
    pub fn times(&self) -> Vec<f64> {
        self.snapshots.iter().map(|(t, _)| *t).collect()
    }

    pub fn last(&self) -> &(f64, Spectrum) {
        self.snapshots.last().expect("trajectory holds at least u0")
    }

    pub fn len(&self) -> usize {
        self.snapshots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.snapshots.is_empty()
    }
}

/// One ETDRK4 step (or one exact linear step when the nonlinearity is off).
pub fn step(state: (f64, &Spectrum), config: &SolverConfig) -> Result<(f64, Spectrum)> {
    config.validate()?;
    let (t, v) = state;
    let next = config.stepper(v).advance(v, &config.params, config.dt);
    let t1 = t + config.dt;
    if !next.is_finite() {
        return Err(Error::BlowUp {
            t: t1,
            partial: None,
        });
    }
    Ok((t1, next))
}

/// Integrate from `u0` to `t_end`, keeping every `snapshot_stride`-th state
/// plus the initial and final ones.
pub fn simulate(u0: &Field, config: &SolverConfig) -> Result<Trajectory> {
    simulate_spectrum(analyze(u0).constrained(), config)
}

pub(crate) fn simulate_spectrum(v0: Spectrum, config: &SolverConfig) -> Result<Trajectory> {
    config.validate()?;
    let stepper = config.stepper(&v0);
    let n = config.steps();
    let mut traj = Trajectory {
        snapshots: vec![(0.0, v0.clone())],
        config: config.clone(),
    };
    let mut v = v0;
    for k in 1..=n {
        v = stepper.advance(&v, &config.params, config.dt);
        let t = k as f64 * config.dt;
        if !v.is_finite() {
            return Err(Error::BlowUp {
                t,
                partial: Some(Box::new(traj)),
            });
        }
        if k % config.snapshot_stride == 0 || k == n {
            traj.snapshots.push((t, v.clone()));
        }
    }
    Ok(traj)
}
