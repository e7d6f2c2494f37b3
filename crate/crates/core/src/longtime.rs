//! Weighted-mass monotonicity, the rightward-mass functional and the line
//! soliton.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::dynamics::{mass, simulate, SolverConfig, Trajectory};
use crate::spectral::{analyze, apply_multiplier, synthesize, Field, Grid};
use crate::{par, Error, Result};

/// Parameters of the moving weight `φ(ε(x + x₀ − ct))`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WeightParams {
    pub r: f64,
    pub eps: f64,
    pub x0: f64,
    pub c: f64,
}

impl WeightParams {
    pub fn new(r: f64, eps: f64, x0: f64, c: f64) -> Result<Self> {
        if !(r > 1.0 && r.is_finite()) {
            return Err(Error::Domain(format!("r = {r} must exceed 1")));
        }
        if !(eps > 0.0 && eps <= 1.0) {
            return Err(Error::Domain(format!("eps = {eps} outside (0, 1]")));
        }
        if !(c > 0.0 && c.is_finite() && x0.is_finite()) {
            return Err(Error::Domain(format!("need c > 0 and finite x0, got c = {c}, x0 = {x0}")));
        }
        Ok(WeightParams { r, eps, x0, c })
    }

    pub fn with_x0(&self, x0: f64) -> Self {
        WeightParams { x0, ..*self }
    }

    /// Argument of `φ` at `(x, t)`.
    pub fn argument(&self, x: f64, t: f64) -> f64 {
        self.eps * (x + self.x0 - self.c * t)
    }
}

impl Default for WeightParams {
    fn default() -> Self {
        WeightParams {
            r: 1.1,
            eps: 0.1,
            x0: 0.0,
            c: 1.0,
        }
    }
}

#[allow(clippy::excessive_precision)]
const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.0,
];
#[allow(clippy::excessive_precision)]
const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];
#[allow(clippy::excessive_precision)]
const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

fn gk15(f: &impl Fn(f64) -> f64, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut k = WGK[7] * fc;
    let mut g = WG[3] * fc;
    for i in 0..7 {
        let s = f(c - h * XGK[i]) + f(c + h * XGK[i]);
        k += WGK[i] * s;
        if i % 2 == 1 {
            g += WG[i / 2] * s;
        }
    }
    (k * h, ((k - g) * h).abs())
}

/// Adaptive Gauss–Kronrod (7/15) to absolute tolerance `tol`.
pub(crate) fn integrate(f: impl Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    if a == b {
        return 0.0;
    }
    let mut total = 0.0;
    let mut stack = vec![(a, b, 0u32)];
    while let Some((lo, hi, depth)) = stack.pop() {
        let (v, err) = gk15(&f, lo, hi);
        let share = tol * ((hi - lo) / (b - a)).abs();
        if err <= share.max(f64::EPSILON * v.abs()) || depth >= 40 {
            total += v;
        } else {
            let mid = 0.5 * (lo + hi);
            stack.push((lo, mid, depth + 1));
            stack.push((mid, hi, depth + 1));
        }
    }
    total
}

const PHI_TOL: f64 = 1e-12;

/// `∫_a^∞ (1+y²)^{−r/2} dy` for `a ≥ 1`, via `y = u^{−1/(r−1)}`, which maps
/// the tail to a bounded smooth integrand on `[0, a^{1−r}]`.
fn tail(r: f64, a: f64) -> f64 {
    let p = 1.0 / (r - 1.0);
    integrate(
        |u: f64| {
            if u == 0.0 {
                p
            } else {
                p * (1.0 + u.powf(2.0 * p)).powf(-0.5 * r)
            }
        },
        0.0,
        a.powf(1.0 - r),
        PHI_TOL,
    )
}

fn density(r: f64, y: f64) -> f64 {
    (1.0 + y * y).powf(-0.5 * r)
}

/// `(∫_1^∞, ∫_{−1}^{1})` per `r`.
fn constants(r: f64) -> (f64, f64) {
    static CACHE: OnceLock<Mutex<HashMap<u64, (f64, f64)>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(v) = cache.lock().unwrap().get(&r.to_bits()) {
        return *v;
    }
    let v = (tail(r, 1.0), integrate(|y| density(r, y), -1.0, 1.0, PHI_TOL));
    cache.lock().unwrap().insert(r.to_bits(), v);
    v
}

/// `φ(∞) = ∫_ℝ (1+y²)^{−r/2} dy`.
pub fn phi_max(r: f64) -> Result<f64> {
    check_r(r)?;
    let (t, m) = constants(r);
    Ok(2.0 * t + m)
}

fn check_r(r: f64) -> Result<()> {
    if r > 1.0 && r.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!("r = {r} <= 1: the weight integral diverges")))
    }
}

/// `(φ(x), φ′(x))` with `φ(x) = ∫_{−∞}^x (1+y²)^{−r/2} dy`.
pub fn weight_phi(r: f64, x: f64) -> Result<(f64, f64)> {
    check_r(r)?;
    let (t1, mid) = constants(r);
    let phi = if x >= 1.0 {
        2.0 * t1 + mid - tail(r, x)
    } else if x <= -1.0 {
        tail(r, -x)
    } else {
        t1 + integrate(|y| density(r, y), -1.0, x, PHI_TOL)
    };
    Ok((phi, density(r, x)))
}

fn column_weights(grid: &Grid, w: &WeightParams, t: f64) -> Result<Vec<f64>> {
    check_r(w.r)?;
    par::map_range(grid.nx(), |i| weight_phi(w.r, w.argument(grid.x(i), t)).map(|p| p.0))
        .into_iter()
        .collect()
}

/// `∫ φ(ε(x + x₀ − ct)) u² dx dy`.
pub fn weighted_mass(field: &Field, w: &WeightParams, t: f64) -> Result<f64> {
    let g = field.grid();
    let weights = column_weights(g, w, t)?;
    let v = field.values();
    let mut s = 0.0;
    for (i, wi) in weights.iter().enumerate() {
        let row: f64 = v[i * g.ny()..(i + 1) * g.ny()].iter().map(|u| u * u).sum();
        s += wi * row;
    }
    Ok(s * g.cell_area())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MonotonicityReport {
    pub weight: WeightParams,
    /// `(t, weighted mass)` per snapshot.
    pub series: Vec<(f64, f64)>,
    /// Largest positive increment between consecutive snapshots, or 0.
    pub max_increase: f64,
}

impl MonotonicityReport {
    pub fn initial(&self) -> f64 {
        self.series[0].1
    }

    /// `max_increase / initial`, 0 when both vanish.
    pub fn relative_increase(&self) -> f64 {
        if self.max_increase == 0.0 {
            0.0
        } else {
            self.max_increase / self.initial()
        }
    }
}

fn snapshot_fields(traj: &Trajectory) -> Result<Vec<(f64, Field)>> {
    if traj.is_empty() {
        return Err(Error::Empty("trajectory has no snapshots".into()));
    }
    Ok(par::map(&traj.snapshots, |(t, s)| (*t, synthesize(s))))
}

fn report(fields: &[(f64, Field)], w: &WeightParams) -> Result<MonotonicityReport> {
    let series: Vec<(f64, f64)> = fields
        .iter()
        .map(|(t, f)| weighted_mass(f, w, *t).map(|m| (*t, m)))
        .collect::<Result<_>>()?;
    let max_increase = series
        .windows(2)
        .map(|p| p[1].1 - p[0].1)
        .fold(0.0, f64::max);
    Ok(MonotonicityReport {
        weight: *w,
        series,
        max_increase,
    })
}

/// Weighted mass in the moving frame at every snapshot.
pub fn monotonicity_report(traj: &Trajectory, w: &WeightParams) -> Result<MonotonicityReport> {
    report(&snapshot_fields(traj)?, w)
}

/// [`monotonicity_report`] for each frame offset in `x0s`.
pub fn monotonicity_scan(
    traj: &Trajectory,
    w: &WeightParams,
    x0s: &[f64],
) -> Result<Vec<MonotonicityReport>> {
    let fields = snapshot_fields(traj)?;
    x0s.iter().map(|&x0| report(&fields, &w.with_x0(x0))).collect()
}

/// `n` frame offsets evenly spanning the box, endpoints excluded.
pub fn frame_offsets(grid: &Grid, n: usize) -> Vec<f64> {
    let lx = grid.lx();
    (0..n)
        .map(|k| -0.5 * lx + (k as f64 + 0.5) * lx / n as f64)
        .collect()
}

/// `∫_𝕋 ∫_{x ≥ γt} u²`, summed over collocation columns with `x ≥ γt`.
pub fn right_mass(field: &Field, gamma: f64, t: f64) -> Result<f64> {
    if !(gamma > 0.0) {
        return Err(Error::Domain(format!("gamma = {gamma} must be positive")));
    }
    let g = field.grid();
    let v = field.values();
    let mut s = 0.0;
    for i in 0..g.nx() {
        if g.x(i) >= gamma * t {
            s += v[i * g.ny()..(i + 1) * g.ny()].iter().map(|u| u * u).sum::<f64>();
        }
    }
    Ok(s * g.cell_area())
}

/// `Q(x) = −3c sech²(√c x / 2)`.
pub fn soliton_profile(c: f64, x: f64) -> f64 {
    let s = 1.0 / (0.5 * c.sqrt() * x).cosh();
    -3.0 * c * s * s
}

/// `‖−cQ′ + Q′′′ − QQ′‖_{L²}` of a `y`-independent field, derivatives taken
/// spectrally.
pub fn soliton_residual(field: &Field, c: f64) -> f64 {
    let s = analyze(field);
    let d1 = synthesize(&apply_multiplier(&s, |xi, _| Complex64::new(0.0, xi)));
    let d3 = synthesize(&apply_multiplier(&s, |xi, _| Complex64::new(0.0, -xi * xi * xi)));
    let q = field.values();
    let r: Vec<f64> = (0..q.len())
        .map(|k| -c * d1.values()[k] + d3.values()[k] - q[k] * d1.values()[k])
        .collect();
    mass(&Field::from_raw(*field.grid(), r)).sqrt()
}

/// The line soliton centred at `x₀`.
pub fn line_soliton_at(c: f64, x0: f64, grid: &Grid) -> Result<Field> {
    if !(c > 0.0 && c.is_finite()) {
        return Err(Error::Domain(format!("soliton speed c = {c} must be positive")));
    }
    let reach = 0.5 * grid.lx() - x0.abs();
    if reach <= 0.0 || soliton_profile(c, reach).abs() > 1e-10 {
        return Err(Error::Precondition(format!(
            "box of width {} too narrow: |Q| > 1e-10 at the edge",
            grid.lx()
        )));
    }
    let f = Field::from_fn(*grid, |x, _| soliton_profile(c, x - x0));
    let res = soliton_residual(&f, c);
    if !(res <= 1e-8) {
        return Err(Error::Precondition(format!(
            "soliton residual {res:e} exceeds 1e-8: grid too coarse"
        )));
    }
    Ok(f)
}

/// The line soliton `Q(x)`, certified by its residual.
pub fn line_soliton(c: f64, grid: &Grid) -> Result<Field> {
    line_soliton_at(c, 0.0, grid)
}

/// `e^{−x²/2σ²} cos(ξ₀x) (1 + ½ cos y)` with the mean-zero constraint
/// imposed and L² norm `norm`. For `ξ₀ > 0` the group velocity is negative,
/// so the packet travels left.
pub fn leftward_packet(grid: &Grid, xi0: f64, sigma: f64, norm: f64) -> Result<Field> {
    if !(sigma > 0.0 && norm > 0.0) {
        return Err(Error::Domain("packet width and norm must be positive".into()));
    }
    let raw = Field::from_fn(*grid, |x, y| {
        (-x * x / (2.0 * sigma * sigma)).exp() * (xi0 * x).cos() * (1.0 + 0.5 * y.cos())
    });
    let f = synthesize(&analyze(&raw).constrained());
    let m = mass(&f).sqrt();
    if m == 0.0 {
        return Err(Error::Empty("packet vanishes on the grid".into()));
    }
    let scale = norm / m;
    Field::new(*grid, f.values().iter().map(|v| v * scale).collect())
}

/// Largest data size, found by bisection on `[lo, hi]`, for which every
/// frame in `frames` sees no relative increase above `rel_tol`.
pub fn empirical_smallness<F>(
    make: F,
    config: &SolverConfig,
    frames: &[WeightParams],
    bounds: (f64, f64),
    iterations: usize,
    rel_tol: f64,
) -> Result<f64>
where
    F: Fn(f64) -> Result<Field>,
{
    let holds = |norm: f64| -> Result<bool> {
        let traj = simulate(&make(norm)?, config)?;
        let fields = snapshot_fields(&traj)?;
        for w in frames {
            if report(&fields, w)?.relative_increase() > rel_tol {
                return Ok(false);
            }
        }
        Ok(true)
    };
    let (mut lo, mut hi) = bounds;
    if !holds(lo)? {
        return Err(Error::Precondition(format!("monotonicity fails already at {lo}")));
    }
    if holds(hi)? {
        return Ok(hi);
    }
    for _ in 0..iterations {
        let mid = (lo * hi).sqrt();
        if holds(mid)? {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(lo)
}
