//! Acceptance gate. Every criterion prints one PASS/FAIL line per check to
//! stderr and the test fails if any check fails.

mod common;

use std::f64::consts::PI;
use std::io::Write;
use std::time::Instant;

use fkplab::dynamics::{energy, mass, simulate, DispersionParams, SolverConfig};
use fkplab::estimates::{conv_l2, knapp_generator, run_suite, strichartz_fit, trilinear_pairing, BinGrid, LemmaKind, SUITE_SEED};
use fkplab::flatgeom::*;
use fkplab::harness::{decode_checkpoint, encode_checkpoint, Experiment, ExperimentConfig};
use fkplab::longtime::{frame_offsets, leftward_packet, line_soliton_at, monotonicity_scan, right_mass, WeightParams};
use fkplab::resonance::{calibrated_lower_bound, lower_bound_ratio, Sampling};
use fkplab::spectral::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const MASS_DRIFT: f64 = 1e-8;
const ENERGY_DRIFT: f64 = 1e-6;
const CONSERVATION_SECONDS: f64 = 60.0;
const SHAPE_ERROR: f64 = 1e-4;
const SPEED_ERROR: f64 = 0.01;
const SLOPE_WINDOW: f64 = 0.08;
const STRICHARTZ_SECONDS: f64 = 600.0;
const NULL_RECT_ERROR: f64 = 1e-12;
/// Bound on `max_overlap / ln(1/δ)` shared by every δ.
const OVERLAP_PER_LOG: f64 = 1.0;
/// Bound on `lattice measure / N^{1−α/2}`; calibration run max is 0.059.
const LATTICE_CONST: f64 = 0.1;
/// Largest allowed spread `max / min` of that ratio across N for one α.
const LATTICE_SPREAD: f64 = 2.0;
const ORACLE_ERROR: f64 = 1e-10;
const SUITE_TRIALS: usize = 1000;
const SUITE_FACTOR: f64 = 10.0;
const WEIGHTED_INCREASE: f64 = 1e-6;
const RIGHT_MASS_FRACTION: f64 = 0.1;
const RETAINED_FRACTION: f64 = 0.9;
const ROUND_TRIP: f64 = 1e-12;
const PARSEVAL: f64 = 1e-10;
const LP_RECONSTRUCTION: f64 = 1e-12;

struct Gate {
    id: &'static str,
    failures: Vec<String>,
}

impl Gate {
    fn new(id: &'static str) -> Self {
        Gate { id, failures: Vec::new() }
    }

    fn check(&mut self, name: &str, ok: bool, detail: String) {
        let tag = if ok { "PASS" } else { "FAIL" };
        let _ = writeln!(std::io::stderr(), "{tag} [{}] {name}: {detail}", self.id);
        if !ok {
            self.failures.push(name.to_string());
        }
    }

    fn finish(self) {
        assert!(self.failures.is_empty(), "criterion {} failed: {:?}", self.id, self.failures);
    }
}

fn p(alpha: f64) -> DispersionParams {
    DispersionParams::new(alpha).unwrap()
}

fn single_thread<R: Send>(f: impl FnOnce() -> R + Send) -> R {
    rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap().install(f)
}

#[test]
fn c1_conservation() {
    let mut gate = Gate::new("1");
    let g = Grid::new(256, 64, 32.0 * PI).unwrap();
    let params = p(1.9);
    let u0 = synthesize(&random_smooth(&g, 1, 1.0, 2.0, 0.1).constrained());
    let mut cfg = SolverConfig::new(params, Truncation::None, 1e-3, 1.0);
    cfg.snapshot_stride = usize::MAX;
    let start = Instant::now();
    let traj = single_thread(|| simulate(&u0, &cfg)).unwrap();
    let secs = start.elapsed().as_secs_f64();
    let first = synthesize(&traj.snapshots[0].1);
    let last = synthesize(&traj.last().1);
    let (m0, m1) = (mass(&first), mass(&last));
    let (e0, e1) = (energy(&first, &params).unwrap(), energy(&last, &params).unwrap());
    let dm = (m1 - m0).abs() / m0;
    let de = (e1 - e0).abs() / e0.abs();
    gate.check("relative mass drift", dm <= MASS_DRIFT, format!("{dm:.3e} <= {MASS_DRIFT:e}"));
    gate.check("relative energy drift", de <= ENERGY_DRIFT, format!("{de:.3e} <= {ENERGY_DRIFT:e}"));
    gate.check(
        "single-threaded runtime",
        secs <= CONSERVATION_SECONDS,
        format!("{secs:.2} s <= {CONSERVATION_SECONDS} s"),
    );
    gate.finish();
}

fn centroid(u: &Field) -> f64 {
    let g = u.grid();
    let (mut num, mut den) = (0.0, 0.0);
    for i in 0..g.nx() {
        let w = u.at(i, 0).powi(2);
        num += w * g.x(i);
        den += w;
    }
    num / den
}

#[test]
fn c2_soliton() {
    let mut gate = Gate::new("2");
    let g = Grid::new(1024, 4, 64.0 * PI).unwrap();
    let (c, x0, t_end) = (1.0, -10.0, 5.0);
    let u0 = line_soliton_at(c, x0, &g).unwrap();
    let mut cfg = SolverConfig::new(p(2.0), Truncation::None, 1e-3, t_end);
    cfg.snapshot_stride = usize::MAX;
    let traj = simulate(&u0, &cfg).unwrap();
    let (t, v) = traj.last();
    let u = synthesize(v);
    let want = line_soliton_at(c, x0 + c * t, &g).unwrap();
    let diff: Vec<f64> = u.values().iter().zip(want.values()).map(|(a, b)| a - b).collect();
    let err = (mass(&Field::new(g, diff).unwrap()) / mass(&want)).sqrt();
    gate.check("relative L2 shape error", err <= SHAPE_ERROR, format!("{err:.3e} <= {SHAPE_ERROR:e}"));
    let speed = (centroid(&u) - centroid(&u0)) / t;
    let rel = (speed - c).abs() / c;
    gate.check("speed", rel <= SPEED_ERROR, format!("{speed:.6} vs {c}, relative {rel:.2e} <= {SPEED_ERROR}"));
    gate.finish();
}

#[test]
fn c3_strichartz() {
    let mut gate = Gate::new("3");
    let Experiment::Strichartz(sc) = ExperimentConfig::default_for("strichartz").unwrap().experiment else {
        unreachable!()
    };
    let n_list = [8.0, 16.0, 32.0, 64.0, 128.0];
    let start = Instant::now();
    let mut slopes = Vec::new();
    for alpha in [1.0, 1.5, 2.0] {
        let params = p(alpha);
        let fit = strichartz_fit(&params, &n_list, sc.t_samples, knapp_generator(params, sc.a, sc.band, sc.lx)).unwrap();
        let target = (2.0 - alpha) / 8.0;
        gate.check(
            &format!("slope at alpha {alpha}"),
            (fit.slope - target).abs() <= SLOPE_WINDOW,
            format!("{:.4} within {SLOPE_WINDOW} of {target:.4}", fit.slope),
        );
        slopes.push(fit.slope);
    }
    let decreasing = slopes.windows(2).all(|w| w[1] < w[0]);
    gate.check("slope decreases in alpha", decreasing, format!("{slopes:.4?}"));
    let secs = start.elapsed().as_secs_f64();
    gate.check("runtime", secs <= STRICHARTZ_SECONDS, format!("{secs:.1} s <= {STRICHARTZ_SECONDS} s"));
    gate.finish();
}

#[test]
fn c4_resonance_scan() {
    let mut gate = Gate::new("4");
    let sampling = Sampling::standard();
    for alpha in [1.0, 1.5, 1.9, 2.0] {
        let rep = lower_bound_ratio(&p(alpha), &sampling).unwrap();
        let c = calibrated_lower_bound(alpha).unwrap();
        gate.check(
            &format!("dominance at alpha {alpha}"),
            rep.dominance_violations == 0,
            format!("{} violations in {} samples", rep.dominance_violations, rep.samples),
        );
        gate.check(
            &format!("lower bound at alpha {alpha}"),
            rep.ratio >= c,
            format!("min ratio {:.6} >= calibrated {c}", rep.ratio),
        );
        gate.check(
            &format!("same sign at alpha {alpha}"),
            rep.sign_violations == 0,
            format!("{} violations", rep.sign_violations),
        );
    }
    gate.finish();
}

#[test]
fn c5_flat_geometry() {
    let mut gate = Gate::new("5");
    let saddle = Surface::Quadratic { hxx: 1.0, hxy: 0.0, hyy: -1.0 };
    let mut worst: f64 = 0.0;
    for (c, l1, l2) in [([0.0, 0.0], 0.3, 0.2), ([1.5, -0.7], 1.0, 0.05), ([-2.0, 3.0], 0.01, 0.8)] {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let rect = Parallelogram::from_sides(c, [s, s], l1, [s, -s], l2).unwrap();
        let d = flatness_defect(&saddle, &rect, 16).unwrap();
        worst = worst.max((d - l1 * l2).abs());
    }
    gate.check("null rectangle defect", worst <= NULL_RECT_ERROR, format!("max |defect - l1 l2| {worst:.2e}"));

    let phase = Surface::FkpPhase(p(1.5));
    let opts = TilingOptions::default();
    let w = [1.0, 1.0];
    let [n1, _] = null_directions(&phase, w).unwrap();
    for delta in [1e-2f64, 1e-3, 1e-4] {
        let l = max_flat_length(&phase, w, n1, delta, &opts.rule).unwrap();
        let (lo, hi) = (delta.sqrt(), 10.0 * delta.cbrt());
        gate.check(
            &format!("max flat length at delta {delta:e}"),
            (lo..=hi).contains(&l),
            format!("{l:.4e} in [{lo:.4e}, {hi:.4e}]"),
        );
    }
    let domain = Rect::new([0.9, 1.1], [0.8, 1.2]).unwrap();
    for delta in [1e-2f64, 1e-3, 1e-4] {
        let t = tile_flat(&phase, domain, delta, &opts).unwrap();
        let ratio = t.max_overlap as f64 / (1.0 / delta).ln();
        gate.check(
            &format!("tiling overlap at delta {delta:e}"),
            ratio <= OVERLAP_PER_LOG && t.coverage_gap == 0,
            format!(
                "overlap {} / ln(1/delta) = {ratio:.3} <= {OVERLAP_PER_LOG}, {} tiles, gap {}",
                t.max_overlap,
                t.tiles.len(),
                t.coverage_gap
            ),
        );
    }
    for alpha in [1.0, 1.5, 2.0] {
        let params = p(alpha);
        let surface = Surface::FkpPhase(params);
        let c = [1.0, 0.5];
        let [dir, _] = null_directions(&surface, c).unwrap();
        let mut ratios = Vec::new();
        for n in [8.0f64, 16.0, 32.0, 64.0, 128.0] {
            let delta = n.powf(-(alpha + 1.0));
            let flat = flat_parallelogram(&surface, c, dir, delta, &opts.rule).unwrap();
            let dil = dilate(&flat, n, &params).unwrap();
            let meas = (0..64)
                .map(|k| lattice_measure(&dil.shifted([0.0, k as f64 / 64.0])))
                .fold(0.0, f64::max);
            ratios.push(meas / n.powf(1.0 - alpha / 2.0));
        }
        let max = ratios.iter().cloned().fold(0.0, f64::max);
        let min = ratios.iter().cloned().fold(f64::INFINITY, f64::min);
        gate.check(
            &format!("dilated lattice measure at alpha {alpha}"),
            max <= LATTICE_CONST && max / min <= LATTICE_SPREAD,
            format!("ratios {ratios:.4?}, max <= {LATTICE_CONST}, spread {:.3} <= {LATTICE_SPREAD}", max / min),
        );
    }
    gate.finish();
}

#[test]
fn c6_bilinear() {
    let mut gate = Gate::new("6");
    let mut rng = common::rng(0xacce);
    let (mut conv_err, mut tri_err): (f64, f64) = (0.0, 0.0);
    for trial in 0..100 {
        let params = p([1.0, 1.5, 1.9, 2.0][trial % 4]);
        let f1 = common::tiny_set(&mut rng, params, 1.0, 2.0, 30);
        let f2 = common::tiny_set(&mut rng, params, 2.0, 1.0, 30);
        let f3 = common::tiny_set(&mut rng, params, 2.0, 4.0, 10);
        let bins = BinGrid::for_sets(&[&f1, &f2, &f3]).unwrap();
        let a = conv_l2(&f1, &f2, &bins).unwrap();
        let b = common::brute_conv_l2(&f1, &f2, &bins);
        conv_err = conv_err.max((a - b).abs() / b.max(1.0));
        let t = trilinear_pairing(&f1, &f2, &f3, &bins).unwrap();
        let o = common::brute_trilinear(&f1, &f2, &f3, &bins);
        tri_err = tri_err.max((t - o).abs() / o.max(1.0));
    }
    gate.check("conv_l2 vs brute force", conv_err <= ORACLE_ERROR, format!("{conv_err:.2e} <= {ORACLE_ERROR:e}"));
    gate.check("trilinear vs brute force", tri_err <= ORACLE_ERROR, format!("{tri_err:.2e} <= {ORACLE_ERROR:e}"));
    for kind in [LemmaKind::FirstOrder, LemmaKind::SecondOrder, LemmaKind::HighLow] {
        let rep = run_suite(kind, SUITE_TRIALS, SUITE_SEED).unwrap();
        let bound = SUITE_FACTOR * kind.calibrated_max();
        gate.check(
            &format!("{kind:?} suite"),
            rep.max_ratio <= bound,
            format!("max ratio {:.4} <= {SUITE_FACTOR} x {:.4}", rep.max_ratio, kind.calibrated_max()),
        );
    }
    gate.finish();
}

#[test]
fn c7_longtime() {
    let mut gate = Gate::new("7");
    let Experiment::Longtime(c) = ExperimentConfig::default_for("longtime").unwrap().experiment else {
        unreachable!()
    };
    let grid = Grid::new(c.nx, c.ny, c.lx).unwrap();
    let u0 = leftward_packet(&grid, c.xi0, c.sigma, c.norm).unwrap();
    let mut cfg = SolverConfig::new(p(c.alpha), Truncation::finite(c.m_trunc).unwrap(), c.dt, c.t_end);
    cfg.snapshot_stride = c.snapshot_stride;
    let traj = simulate(&u0, &cfg).unwrap();
    let w = WeightParams::new(c.r, c.eps, 0.0, c.c).unwrap();
    let reports = monotonicity_scan(&traj, &w, &frame_offsets(&grid, c.frames)).unwrap();
    let worst = reports.iter().map(|r| r.relative_increase()).fold(0.0, f64::max);
    gate.check(
        "weighted mass increments",
        reports.len() == 8 && worst <= WEIGHTED_INCREASE,
        format!("{} frames, worst relative increase {worst:.3e} <= {WEIGHTED_INCREASE:e}", reports.len()),
    );
    let (t, last) = traj.last();
    let rm = right_mass(&synthesize(last), c.gamma, *t).unwrap();
    let m0 = mass(&u0);
    gate.check(
        "right mass of leftward data",
        rm <= RIGHT_MASS_FRACTION * m0,
        format!("{rm:.3e} <= {RIGHT_MASS_FRACTION} x {m0:.3e} at t = {t}"),
    );

    let g = Grid::new(1024, 4, 64.0 * PI).unwrap();
    let speed = 1.0;
    let q = line_soliton_at(speed, 0.0, &g).unwrap();
    let mut cfg = SolverConfig::new(p(2.0), Truncation::None, 1e-2, 20.0);
    cfg.snapshot_stride = usize::MAX;
    let traj = simulate(&q, &cfg).unwrap();
    let (t, last) = traj.last();
    let kept = right_mass(&synthesize(last), 0.5 * speed, *t).unwrap() / mass(&q);
    gate.check(
        "soliton keeps its mass to the right",
        kept >= RETAINED_FRACTION,
        format!("fraction {kept:.6} >= {RETAINED_FRACTION} at t = {t}"),
    );
    gate.finish();
}

#[test]
fn c8_spectral_substrate() {
    let mut gate = Gate::new("8");
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let (mut rt, mut pv, mut lp): (f64, f64, f64) = (0.0, 0.0, 0.0);
    for (nx, ny, lx) in [(64, 16, 2.0 * PI), (256, 8, 32.0 * PI), (32, 64, 5.0)] {
        let g = Grid::new(nx, ny, lx).unwrap();
        let values = (0..g.len()).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let u = Field::new(g, values).unwrap();
        let s = analyze(&u);
        let back = synthesize(&s);
        let err = u.values().iter().zip(back.values()).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        rt = rt.max(err / u.max_abs());
        let quad: f64 = u.values().iter().map(|v| v * v).sum::<f64>() * g.cell_area();
        pv = pv.max((quad - norm_hs(&s, 0.0, 0.0).powi(2)).abs() / quad);
        let mut sum = Spectrum::zeros(g);
        for n in dyadic_levels(&g) {
            sum = sum.add(&project_dyadic(&s, n).unwrap()).unwrap();
        }
        let mut want = s.clone();
        for j in 0..g.ny() {
            want.set(0, g.eta(j), Default::default()).unwrap();
        }
        lp = lp.max(sum.max_abs_diff(&want).unwrap() / s.max_abs());
    }
    gate.check("FFT round trip", rt <= ROUND_TRIP, format!("{rt:.2e} <= {ROUND_TRIP:e}"));
    gate.check("Parseval", pv <= PARSEVAL, format!("{pv:.2e} <= {PARSEVAL:e}"));
    gate.check("Littlewood-Paley reconstruction", lp <= LP_RECONSTRUCTION, format!("{lp:.2e} <= {LP_RECONSTRUCTION:e}"));

    let g = Grid::new(32, 16, 7.0).unwrap();
    let s = random_smooth(&g, 3, 2.0, 2.0, 1.0).constrained();
    let t = 0.1 + 0.2;
    let back = decode_checkpoint(&encode_checkpoint(t, 1.9, &s)).unwrap();
    let exact = back.t.to_bits() == t.to_bits()
        && back.alpha.to_bits() == 1.9f64.to_bits()
        && back.spectrum.grid() == s.grid()
        && back
            .spectrum
            .coeffs()
            .iter()
            .zip(s.coeffs())
            .all(|(a, b)| a.re.to_bits() == b.re.to_bits() && a.im.to_bits() == b.im.to_bits());
    gate.check("checkpoint round trip bit-exact", exact, format!("{} coefficients", s.coeffs().len()));
    gate.finish();
}
