use std::f64::consts::PI;

use num_complex::Complex64;
use rustfft::FftDirection;
use serde::{Deserialize, Serialize};

use crate::dynamics::DispersionParams;
use crate::flatgeom::Parallelogram;
use crate::spectral::fft::fft2;
use crate::spectral::{norm_hs, Grid, Spectrum};
use crate::{par, Error, Result};

/// A flat frequency cap at `|ξ| ≈ n`.
///
/// The cap is the parallelogram
/// `|ξ − n| ≤ ½ w n^{(1−α)/2}`, `|η − A ξ| ≤ h n^{1/2}` with slope
/// `A = a + k n^{α/2}`: narrow enough in ξ and η that `ω_α` deviates from
/// its tangent plane by `O(w² + h²)` uniformly in `n`, so `S_α(t)` does not
/// oscillate on it for `t ∈ [0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KnappSpec {
    pub n: f64,
    pub a: f64,
    pub band: u32,
    pub width: f64,
    pub height: f64,
}

impl KnappSpec {
    pub fn new(n: f64, a: f64, band: u32) -> Self {
        KnappSpec {
            n,
            a,
            band,
            width: 2.0,
            height: 1.0,
        }
    }

    pub fn slope(&self, params: &DispersionParams) -> f64 {
        self.a + self.band as f64 * self.n.powf(0.5 * params.alpha())
    }

    fn half_widths(&self, params: &DispersionParams) -> (f64, f64) {
        (
            0.5 * self.width * self.n.powf(0.5 * (1.0 - params.alpha())),
            self.height * self.n.sqrt(),
        )
    }

    /// Whether `(ξ, η)` lies in the closed cap.
    pub fn contains(&self, params: &DispersionParams, xi: f64, eta: f64) -> bool {
        let (hx, he) = self.half_widths(params);
        (xi - self.n).abs() <= hx && (eta - self.slope(params) * xi).abs() <= he
    }

    /// The cap as a parallelogram in the `(ξ, η)` plane.
    pub fn support(&self, params: &DispersionParams) -> Result<Parallelogram> {
        let (hx, he) = self.half_widths(params);
        let s = self.slope(params);
        Parallelogram::new([self.n, s * self.n], [hx, s * hx], [0.0, he])
    }

    /// Smallest power-of-two grid on `x`-period `lx` holding the cap.
    pub fn grid(&self, params: &DispersionParams, lx: f64) -> Result<Grid> {
        let [bx, by] = self.support(params)?.bbox();
        let dxi = 2.0 * PI / lx;
        let nx = (2.0 * (bx[1].abs().max(bx[0].abs()) / dxi + 2.0)).ceil() as usize;
        let ny = (2.0 * (by[1].abs().max(by[0].abs()) + 2.0)).ceil() as usize;
        Grid::new(nx.next_power_of_two().max(4), ny.next_power_of_two().max(4), lx)
    }
}

/// Indicator of the cap on the lattice of `grid`, normalized to L² norm 1.
pub fn knapp_data(grid: &Grid, params: &DispersionParams, spec: &KnappSpec) -> Result<Spectrum> {
    if !(spec.n > 0.0 && spec.width > 0.0 && spec.height > 0.0) {
        return Err(Error::Domain("cap sizes must be positive".into()));
    }
    let [bx, by] = spec.support(params)?.bbox();
    let xi_max = grid.xi_max();
    let eta_max = (grid.ny() / 2 - 1) as f64;
    if bx[0] < -xi_max || bx[1] > xi_max || by[0] < -eta_max || by[1] > eta_max {
        return Err(Error::Precondition(format!(
            "cap at n = {} is not resolved by the grid",
            spec.n
        )));
    }
    let mut s = Spectrum::zeros(*grid);
    let mut count = 0usize;
    for i in 0..grid.nx() {
        let xi = grid.xi(i);
        for j in 0..grid.ny() {
            if !grid.is_nyquist(i, j) && spec.contains(params, xi, grid.eta(j) as f64) {
                s.coeffs_mut()[grid.flat(i, j)] = Complex64::new(1.0, 0.0);
                count += 1;
            }
        }
    }
    if count == 0 {
        return Err(Error::Empty(format!("cap at n = {} has no lattice points", spec.n)));
    }
    let norm = norm_hs(&s, 0.0, 0.0);
    Ok(s.scale(1.0 / norm))
}

/// `‖S_α(t) f‖_{L⁴_{t,x,y}([0,1] × box)}`.
///
/// The spatial integral is exact: the spectrum is shifted to the origin of a
/// sub-lattice covering its support and `|u|⁴` is summed on a grid with
/// more than four times the support extent in each direction, so no alias
/// reaches the zero mode. The time integral is the trapezoid rule on
/// `t_samples + 1` equispaced nodes.
pub fn l4_norm(spectrum: &Spectrum, params: &DispersionParams, t_samples: usize) -> Result<f64> {
    if t_samples < 16 {
        return Err(Error::Precondition(format!("t_samples = {t_samples} < 16")));
    }
    let g = *spectrum.grid();
    let mut modes = Vec::new();
    for i in 0..g.nx() {
        for j in 0..g.ny() {
            let c = spectrum.coeffs()[g.flat(i, j)];
            if c.norm() > 0.0 {
                modes.push((g.kx(i), g.eta(j), c));
            }
        }
    }
    if modes.is_empty() {
        return Ok(0.0);
    }
    let kmin = modes.iter().map(|m| m.0).min().unwrap();
    let kmax = modes.iter().map(|m| m.0).max().unwrap();
    let emin = modes.iter().map(|m| m.1).min().unwrap();
    let emax = modes.iter().map(|m| m.1).max().unwrap();
    let m1 = (4 * (kmax - kmin) as usize + 1).next_power_of_two().max(4);
    let m2 = (4 * (emax - emin) as usize + 1).next_power_of_two().max(4);
    let omegas: Vec<f64> = modes
        .iter()
        .map(|&(k, e, _)| {
            let xi = k as f64 * g.dxi();
            if xi == 0.0 {
                0.0
            } else {
                params.omega_raw(xi, e as f64)
            }
        })
        .collect();
    let amp = 1.0 / g.len() as f64;
    let cell = g.area() / (m1 * m2) as f64;
    let quartic = |t: f64| {
        let mut buf = vec![Complex64::new(0.0, 0.0); m1 * m2];
        for (&(k, e, c), &w) in modes.iter().zip(&omegas) {
            let p = (k - kmin) as usize;
            let q = (e - emin) as usize;
            buf[p * m2 + q] = c * Complex64::from_polar(amp, t * w);
        }
        fft2(&mut buf, m1, m2, FftDirection::Inverse);
        buf.iter().map(|z| z.norm_sqr().powi(2)).sum::<f64>() * cell
    };
    let vals = par::map_range(t_samples + 1, |k| quartic(k as f64 / t_samples as f64));
    let h = 1.0 / t_samples as f64;
    let inner: f64 = vals[1..t_samples].iter().sum();
    let integral = h * (0.5 * (vals[0] + vals[t_samples]) + inner);
    Ok(integral.powf(0.25))
}
