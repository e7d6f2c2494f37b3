use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::json;

use super::config::*;
use super::output::{json_bytes, write_atomic, Cell, Csv};
use super::save_checkpoint;
use crate::dynamics::{energy, mass, simulate, DispersionParams, SolverConfig};
use crate::estimates::{knapp_generator, run_suite, strichartz_fit};
use crate::flatgeom::{max_flat_length, null_directions, tile_flat, Rect, Surface, TilingOptions};
use crate::longtime::{frame_offsets, leftward_packet, line_soliton_at, monotonicity_scan, right_mass, WeightParams};
use crate::resonance::{lower_bound_ratio, Sampling};
use crate::spectral::{random_smooth, synthesize, Field, Grid, Truncation};
use crate::{Error, Result};

/// Files written by a run, relative to its directory.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunSummary {
    pub dir: PathBuf,
    pub files: Vec<String>,
}

struct Out<'a> {
    dir: &'a Path,
    files: Vec<String>,
}

impl Out<'_> {
    fn write(&mut self, name: &str, bytes: &[u8]) -> Result<()> {
        write_atomic(&self.dir.join(name), bytes)?;
        self.files.push(name.to_string());
        Ok(())
    }

    fn json<T: Serialize>(&mut self, name: &str, value: &T) -> Result<()> {
        self.write(name, &json_bytes(value)?)
    }
}

/// Runs the experiment into `dir`, which is created if needed. The
/// directory receives `config.toml`, the results and `manifest.json`.
pub fn run(config: &ExperimentConfig, dir: &Path) -> Result<RunSummary> {
    let tag = config.experiment.tag();
    let wrap = |e: Error| Error::Experiment {
        experiment: tag.to_string(),
        source: Box::new(e),
    };
    std::fs::create_dir_all(dir).map_err(|e| wrap(e.into()))?;
    let mut out = Out {
        dir,
        files: Vec::new(),
    };
    out.write("config.toml", config.to_toml()?.as_bytes())?;
    match &config.experiment {
        Experiment::Simulate(c) => run_simulate(c, config.seed, &mut out),
        Experiment::Strichartz(c) => run_strichartz(c, &mut out),
        Experiment::Resonance(c) => run_resonance(c, &mut out),
        Experiment::Flatset(c) => run_flatset(c, &mut out),
        Experiment::Bilinear(c) => run_bilinear(c, config.seed, &mut out),
        Experiment::Longtime(c) => run_longtime(c, &mut out),
    }
    .map_err(wrap)?;
    let manifest = json!({
        "tool": "fkplab",
        "version": env!("CARGO_PKG_VERSION"),
        "experiment": tag,
        "seed": config.seed,
        "files": out.files,
    });
    out.json("manifest.json", &manifest)?;
    Ok(RunSummary {
        dir: dir.to_path_buf(),
        files: out.files,
    })
}

fn truncation(m: Option<f64>) -> Result<Truncation> {
    match m {
        Some(m) => Truncation::finite(m),
        None => Ok(Truncation::None),
    }
}

fn run_simulate(c: &SimulateConfig, seed: u64, out: &mut Out) -> Result<()> {
    let grid = Grid::new(c.nx, c.ny, c.lx)?;
    let params = DispersionParams::new(c.alpha)?;
    let u0: Field = match c.initial {
        InitialData::Random { xi_c, eta_c, norm } => synthesize(&random_smooth(&grid, seed, xi_c, eta_c, norm)),
        InitialData::Soliton { c, x0 } => line_soliton_at(c, x0, &grid)?,
        InitialData::Packet { xi0, sigma, norm } => leftward_packet(&grid, xi0, sigma, norm)?,
    };
    let mut cfg = SolverConfig::new(params, truncation(c.m_trunc)?, c.dt, c.t_end);
    cfg.dealias = c.dealias;
    cfg.snapshot_stride = c.snapshot_stride;
    cfg.nonlinear = c.nonlinear;
    let traj = simulate(&u0, &cfg)?;
    let mut csv = Csv::new(&["step", "t", "mass", "energy"]);
    for (k, (t, s)) in traj.snapshots.iter().enumerate() {
        let f = synthesize(s);
        csv.row(&[
            Cell::I(k as i64),
            Cell::F(*t),
            Cell::F(mass(&f)),
            Cell::F(energy(&f, &params)?),
        ]);
        let name = format!("checkpoint_{k:04}.fkp");
        save_checkpoint(&out.dir.join(&name), *t, c.alpha, s)?;
        out.files.push(name);
    }
    out.write("diagnostics.csv", csv.as_str().as_bytes())
}

fn run_strichartz(c: &StrichartzConfig, out: &mut Out) -> Result<()> {
    let mut csv = Csv::new(&["alpha", "n", "value"]);
    let mut fits = Vec::new();
    for &alpha in &c.alphas {
        let params = DispersionParams::new(alpha)?;
        let fit = strichartz_fit(&params, &c.n_list, c.t_samples, knapp_generator(params, c.a, c.band, c.lx))?;
        for &(n, v) in &fit.points {
            csv.row(&[Cell::F(alpha), Cell::F(n), Cell::F(v)]);
        }
        fits.push(json!({
            "alpha": alpha,
            "slope": fit.slope,
            "stderr": fit.stderr,
            "intercept": fit.intercept,
            "residual": fit.residual,
            "target": (2.0 - alpha) / 8.0,
        }));
    }
    out.write("strichartz.csv", csv.as_str().as_bytes())?;
    out.json("fit.json", &fits)
}

fn run_resonance(c: &ResonanceConfig, out: &mut Out) -> Result<()> {
    let sampling = Sampling::Dyadic {
        shells: (c.shell_min..=c.shell_max).collect(),
        interior: c.interior,
        eta_cap: c.eta_cap,
    };
    let mut rows = Vec::new();
    for &alpha in &c.alphas {
        let rep = lower_bound_ratio(&DispersionParams::new(alpha)?, &sampling)?;
        rows.push(json!({
            "alpha": alpha,
            "c_observed": rep.ratio,
            "argmin": rep.argmin,
            "samples": rep.samples,
            "dominance_violations": rep.dominance_violations,
            "sign_violations": rep.sign_violations,
        }));
    }
    out.json("resonance.json", &rows)
}

fn run_flatset(c: &FlatsetConfig, out: &mut Out) -> Result<()> {
    let surface = Surface::FkpPhase(DispersionParams::new(c.alpha)?);
    let opts = TilingOptions::default();
    let dirs = null_directions(&surface, c.point)?;
    let mut csv = Csv::new(&["delta", "direction", "length"]);
    let mut tilings = Vec::new();
    for &delta in &c.deltas {
        for (k, d) in dirs.iter().enumerate() {
            let l = max_flat_length(&surface, c.point, *d, delta, &opts.rule)?;
            csv.row(&[Cell::F(delta), Cell::S(if k == 0 { "null1" } else { "null2" }), Cell::F(l)]);
        }
        if c.tile {
            let t = tile_flat(&surface, Rect::new(c.domain_xi, c.domain_eta)?, delta, &opts)?;
            tilings.push(json!({
                "delta": delta,
                "tiles": t.tiles.len(),
                "flatness_factor": t.flatness_factor,
                "max_overlap": t.max_overlap,
                "coverage_gap": t.coverage_gap,
                "overlap_per_log": t.max_overlap as f64 / (1.0 / delta).ln(),
            }));
        }
    }
    out.write("flatset.csv", csv.as_str().as_bytes())?;
    out.json("tiling.json", &tilings)
}

fn run_bilinear(c: &BilinearConfig, seed: u64, out: &mut Out) -> Result<()> {
    let mut csv = Csv::new(&["lemma", "trial", "alpha", "value"]);
    let mut summaries = Vec::new();
    for &kind in &c.lemmas {
        let rep = run_suite(kind, c.trials, seed)?;
        let name = serde_json::to_value(kind)?;
        let name = name.as_str().unwrap_or_default().to_string();
        for (i, (r, a)) in rep.ratios.iter().zip(&rep.alphas).enumerate() {
            csv.row(&[Cell::S(&name), Cell::I(i as i64), Cell::F(*a), Cell::F(*r)]);
        }
        summaries.push(json!({
            "lemma": name,
            "trials": rep.trials,
            "seed": rep.seed,
            "max_ratio": rep.max_ratio,
            "mean_ratio": rep.mean_ratio,
            "calibrated_max": kind.calibrated_max(),
            "argmax": rep.argmax,
        }));
    }
    out.write("bilinear.csv", csv.as_str().as_bytes())?;
    out.json("bilinear.json", &summaries)
}

fn run_longtime(c: &LongtimeConfig, out: &mut Out) -> Result<()> {
    let grid = Grid::new(c.nx, c.ny, c.lx)?;
    let params = DispersionParams::new(c.alpha)?;
    let u0 = leftward_packet(&grid, c.xi0, c.sigma, c.norm)?;
    let mut cfg = SolverConfig::new(params, Truncation::finite(c.m_trunc)?, c.dt, c.t_end);
    cfg.snapshot_stride = c.snapshot_stride;
    let traj = simulate(&u0, &cfg)?;
    let w = WeightParams::new(c.r, c.eps, 0.0, c.c)?;
    let reports = monotonicity_scan(&traj, &w, &frame_offsets(&grid, c.frames))?;
    let mut csv = Csv::new(&["t", "x0", "value"]);
    for rep in &reports {
        for &(t, v) in &rep.series {
            csv.row(&[Cell::F(t), Cell::F(rep.weight.x0), Cell::F(v)]);
        }
    }
    let m0 = mass(&u0);
    let (t, last) = traj.last();
    let rm = right_mass(&synthesize(last), c.gamma, *t)?;
    let worst = reports.iter().map(|r| r.relative_increase()).fold(0.0, f64::max);
    out.write("longtime.csv", csv.as_str().as_bytes())?;
    out.json(
        "summary.json",
        &json!({
            "max_relative_increase": worst,
            "initial_mass": m0,
            "right_mass": rm,
            "right_mass_fraction": rm / m0,
            "gamma": c.gamma,
            "t_end": t,
        }),
    )
}
