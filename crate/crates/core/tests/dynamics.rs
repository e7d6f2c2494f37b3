use std::f64::consts::PI;

use fkplab::dynamics::*;
use fkplab::longtime::{line_soliton_at, soliton_profile};
use fkplab::spectral::*;
use fkplab::{Complex64, Error};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn p(alpha: f64) -> DispersionParams {
    DispersionParams::new(alpha).unwrap()
}

fn l2(s: &Spectrum) -> f64 {
    norm_hs(s, 0.0, 0.0)
}

fn diff_l2(a: &Spectrum, b: &Spectrum) -> f64 {
    l2(&a.sub(b).unwrap())
}

fn smooth(grid: Grid, seed: u64, norm: f64) -> Spectrum {
    random_smooth(&grid, seed, 2.0, 2.0, norm).constrained()
}

#[test]
fn omega_examples_and_symmetry() {
    assert_eq!(omega(&p(2.0), 1.0, 0.0).unwrap(), 1.0);
    assert_eq!(omega(&p(2.0), 2.0, 2.0).unwrap(), 6.0);
    assert_eq!(omega(&p(1.0), -1.0, 0.0).unwrap(), -1.0);
    assert!(matches!(omega(&p(1.5), 0.0, 1.0), Err(Error::Domain(_))));
    assert!(DispersionParams::new(0.99).is_err() && DispersionParams::new(2.01).is_err());
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..1000 {
        let a = rng.gen_range(1.0..=2.0);
        let (xi, eta) = (rng.gen_range(0.01..50.0), rng.gen_range(-20.0..20.0));
        let w = omega(&p(a), xi, eta).unwrap();
        assert!((omega(&p(a), -xi, -eta).unwrap() + w).abs() <= 1e-12 * w.abs().max(1.0));
    }
}

#[test]
fn linear_flow_examples() {
    let g = Grid::new(32, 8, 2.0 * PI).unwrap();
    let s = smooth(g, 4, 1.0);
    assert_eq!(propagate_linear(&s, &p(1.3), 0.0).coeffs(), s.coeffs());
    for a in [1.0, 1.5, 2.0] {
        let mut m = Spectrum::zeros(g);
        m.set_real_mode(1, 0, Complex64::new(1.0, 0.0)).unwrap();
        let out = propagate_linear(&m, &p(a), PI);
        assert!((out.get(1, 0).unwrap() + 1.0).norm() < 1e-15);
    }
    let mut mean = Spectrum::zeros(g);
    mean.set(0, 0, Complex64::new(3.0, 0.0)).unwrap();
    assert_eq!(propagate_linear(&mean, &p(2.0), 7.0).coeffs(), mean.coeffs());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn linear_flow_is_isometric_group(seed in 0u64..1000, a in 1.0f64..=2.0, t in -3.0f64..3.0, s in -3.0f64..3.0) {
        let g = Grid::new(64, 16, 8.0 * PI).unwrap();
        let f = smooth(g, seed, 1.0);
        let params = p(a);
        let st = propagate_linear(&f, &params, t);
        prop_assert!((l2(&st) - l2(&f)).abs() <= 1e-12 * l2(&f));
        let two = propagate_linear(&st, &params, s);
        let one = propagate_linear(&f, &params, t + s);
        prop_assert!(two.max_abs_diff(&one).unwrap() <= 1e-12 * f.max_abs());
    }
}

/// Band-limited field from explicit cosines; `|k| ≤ kmax`, `|η| ≤ emax`.
fn trig_field(grid: Grid, seed: u64, kmax: i64, emax: i64) -> impl Fn(f64, f64) -> f64 + Sync + Send {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let dxi = grid.dxi();
    let terms: Vec<(f64, i64, f64, f64)> = (-kmax..=kmax)
        .flat_map(|k| (0..=emax).map(move |e| (k, e)))
        .filter(|&(k, e)| k > 0 || (k == 0 && e == 0))
        .map(|(k, e)| (k as f64 * dxi, e, rng.gen_range(-0.3..0.3), rng.gen_range(0.0..2.0 * PI)))
        .collect();
    move |x, y| terms.iter().map(|&(xi, e, a, ph)| a * (xi * x + e as f64 * y + ph).cos()).sum()
}

#[test]
fn dealiased_product_matches_oversampled_oracle() {
    let lx = 4.0 * PI;
    let coarse = Grid::new(32, 16, lx).unwrap();
    let fine = Grid::new(64, 32, lx).unwrap();
    let f = trig_field(coarse, 7, 10, 5);
    let u = Field::from_fn(coarse, &f);
    let got = nonlinear_term(&u, Truncation::None);
    let sq = Field::from_fn(fine, |x, y| f(x, y).powi(2));
    let dxi = coarse.dxi();
    let oracle = synthesize(&apply_multiplier(&analyze(&sq), |xi, eta| {
        let k = (xi / dxi).round() as i64;
        if 3 * k.abs() < coarse.nx() as i64 && 3 * eta.abs() < coarse.ny() as i64 {
            Complex64::new(0.0, 0.5 * xi)
        } else {
            Complex64::new(0.0, 0.0)
        }
    }));
    let mut err = 0.0f64;
    for i in 0..coarse.nx() {
        for j in 0..coarse.ny() {
            err = err.max((got.at(i, j) - oracle.at(2 * i, 2 * j)).abs());
        }
    }
    assert!(err <= 1e-12, "oversampled oracle error {err}");
    let mean: f64 = got.values().iter().sum::<f64>() / got.values().len() as f64;
    assert!(mean.abs() < 1e-14);
}

#[test]
fn zero_is_a_fixed_point() {
    let g = Grid::new(32, 8, 8.0 * PI).unwrap();
    let cfg = SolverConfig::new(p(1.5), Truncation::finite(8.0).unwrap(), 1e-2, 1.0);
    let (t, out) = step((0.0, &Spectrum::zeros(g)), &cfg).unwrap();
    assert_eq!(t, 1e-2);
    assert_eq!(out.max_abs(), 0.0);
}

fn run_to(v0: &Spectrum, params: DispersionParams, dt: f64, t_end: f64) -> Spectrum {
    let mut cfg = SolverConfig::new(params, Truncation::None, dt, t_end);
    cfg.snapshot_stride = usize::MAX;
    let u0 = synthesize(v0);
    simulate(&u0, &cfg).unwrap().last().1.clone()
}

#[test]
fn fourth_order_convergence() {
    let g = Grid::new(64, 16, 8.0 * PI).unwrap();
    let v0 = random_smooth(&g, 21, 0.5, 1.0, 1.0).constrained();
    for a in [1.0, 1.5, 2.0] {
        let t = 0.8;
        let u1 = run_to(&v0, p(a), 0.1, t);
        let u2 = run_to(&v0, p(a), 0.05, t);
        let u3 = run_to(&v0, p(a), 0.025, t);
        let order = (diff_l2(&u1, &u2) / diff_l2(&u2, &u3)).log2();
        assert!((order - 4.0).abs() <= 0.3, "alpha {a}: observed order {order}");
    }
}

#[test]
fn per_step_mass_drift() {
    let g = Grid::new(64, 16, 8.0 * PI).unwrap();
    let v0 = smooth(g, 2, 0.5);
    let cfg = SolverConfig::new(p(1.5), Truncation::finite(16.0).unwrap(), 1e-3, 1.0);
    let mut v = v0.clone();
    let mut t = 0.0;
    for _ in 0..50 {
        let m0 = l2(&v).powi(2);
        let (t1, next) = step((t, &v), &cfg).unwrap();
        let m1 = l2(&next).powi(2);
        assert!((m1 - m0).abs() <= 1e-10 * m0);
        t = t1;
        v = next;
    }
}

#[test]
fn conservation_over_unit_time() {
    let g = Grid::new(64, 16, 8.0 * PI).unwrap();
    let params = p(1.5);
    let u0 = synthesize(&smooth(g, 8, 0.5));
    let mut cfg = SolverConfig::new(params, Truncation::finite(16.0).unwrap(), 1e-3, 1.0);
    cfg.snapshot_stride = 250;
    let traj = simulate(&u0, &cfg).unwrap();
    let last = synthesize(&traj.last().1);
    let u0p = synthesize(&traj.snapshots[0].1);
    let (m0, m1) = (mass(&u0p), mass(&last));
    assert!((m1 - m0).abs() <= 1e-8 * m0);
    let (e0, e1) = (energy(&u0p, &params).unwrap(), energy(&last, &params).unwrap());
    assert!((e1 - e0).abs() <= 1e-6 * e0.abs());
    let mean0 = traj.snapshots[0].1.get(0, 0).unwrap();
    for (_, s) in &traj.snapshots {
        let z = synthesize_complex(s);
        let scale = z.iter().map(|c| c.norm()).fold(0.0, f64::max);
        assert!(z.iter().all(|c| c.im.abs() <= 1e-12 * scale));
        assert!((s.get(0, 0).unwrap() - mean0).norm() <= 1e-12 * s.max_abs());
    }
}

#[test]
fn simulate_examples() {
    let g = Grid::new(64, 8, 8.0 * PI).unwrap();
    let u0 = synthesize(&smooth(g, 3, 1.0));
    let cfg = SolverConfig::new(p(1.7), Truncation::None, 1e-2, 0.0);
    let traj = simulate(&u0, &cfg).unwrap();
    assert_eq!(traj.len(), 1);
    assert_eq!(traj.times(), vec![0.0]);

    let mut lin = SolverConfig::new(p(1.7), Truncation::None, 1e-2, 2.0);
    lin.nonlinear = false;
    lin.snapshot_stride = 50;
    let traj = simulate(&u0, &lin).unwrap();
    let times = traj.times();
    assert!(times.windows(2).all(|w| w[1] > w[0]));
    assert!(*times.last().unwrap() >= 2.0 - 5e-3);
    for (t, s) in &traj.snapshots {
        let exact = propagate_linear(&traj.snapshots[0].1, &lin.params, *t);
        assert!(s.max_abs_diff(&exact).unwrap() <= 1e-11 * exact.max_abs());
    }
}

#[test]
fn blow_up_carries_time_and_partial_trajectory() {
    let g = Grid::new(32, 4, 2.0 * PI).unwrap();
    let u0 = Field::from_fn(g, |x, _| 1e150 * x.cos());
    let mut cfg = SolverConfig::new(p(2.0), Truncation::None, 0.1, 10.0);
    cfg.snapshot_stride = 1;
    match simulate(&u0, &cfg) {
        Err(Error::BlowUp { t, partial }) => {
            assert!(t > 0.0 && t <= 10.0);
            let partial = partial.expect("simulate keeps the partial trajectory");
            assert!(partial.last().0 < t);
        }
        other => panic!("expected blow-up, got {other:?}"),
    }
    assert!(SolverConfig::new(p(2.0), Truncation::None, 0.0, 1.0).validate().is_err());
}

/// `x`-centroid of `u²` on the `η = 0` row.
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
fn soliton_travels_at_speed_c() {
    let g = Grid::new(512, 4, 32.0 * PI).unwrap();
    let c = 1.0;
    let x0 = -15.0;
    let u0 = line_soliton_at(c, x0, &g).unwrap();
    let mut cfg = SolverConfig::new(p(2.0), Truncation::None, 1e-2, 5.0);
    cfg.snapshot_stride = usize::MAX;
    let traj = simulate(&u0, &cfg).unwrap();
    let (t, v) = traj.last();
    let speed = (centroid(&synthesize(v)) - centroid(&u0)) / t;
    assert!((speed - c).abs() <= 0.01 * c, "speed {speed}");
}

/// Composite Simpson rule.
fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    let h = (b - a) / n as f64;
    let mut s = f(a) + f(b);
    for k in 1..n {
        s += if k % 2 == 1 { 4.0 } else { 2.0 } * f(a + k as f64 * h);
    }
    s * h / 3.0
}

#[test]
fn soliton_energy_matches_refined_quadrature() {
    let c: f64 = 1.0;
    let g = Grid::new(1024, 4, 32.0 * PI).unwrap();
    let u = line_soliton_at(c, 0.0, &g).unwrap();
    let got = energy(&u, &p(2.0)).unwrap();
    let k = 0.5 * c.sqrt();
    let dq = |x: f64| {
        let s = 1.0 / (k * x).cosh();
        6.0 * c * k * s * s * (k * x).tanh()
    };
    let q = |x: f64| soliton_profile(c, x);
    let half = 0.5 * g.lx();
    let line = simpson(|x| 0.5 * dq(x).powi(2) + q(x).powi(3) / 6.0, -half, half, 200_000);
    let oracle = 2.0 * PI * line;
    assert!((got - oracle).abs() <= 1e-6 * oracle.abs(), "{got} vs {oracle}");
    let parts = energy_parts(&u, &p(2.0)).unwrap();
    assert!(parts.transverse.abs() < 1e-20);
    assert!((parts.total() - got).abs() < 1e-15 * got.abs());
}

#[test]
fn mass_examples() {
    let g = Grid::new(32, 8, 5.0).unwrap();
    assert_eq!(mass(&Field::zeros(g)), 0.0);
    let one = Field::from_fn(g, |_, _| 1.0);
    assert!((mass(&one) - g.area()).abs() < 1e-12 * g.area());
    let u = synthesize(&smooth(g, 12, 1.3));
    let m = mass(&u);
    assert!((m - norm_hs(&analyze(&u), 0.0, 0.0).powi(2)).abs() <= 1e-10 * m);
    let cos = Field::from_fn(Grid::new(32, 8, 2.0 * PI).unwrap(), |x, _| x.cos());
    for a in [1.0, 1.4, 2.0] {
        assert!((energy(&cos, &p(a)).unwrap() - PI * PI).abs() < 1e-12);
    }
    assert_eq!(energy(&Field::zeros(g), &p(1.5)).unwrap(), 0.0);
}
