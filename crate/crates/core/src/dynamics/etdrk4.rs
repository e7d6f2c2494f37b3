//! Fourth-order exponential time differencing Runge–Kutta (Cox–Matthews),
//! with the φ-function coefficients evaluated by contour averaging near the
//! origin.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::{DispersionParams, Nonlinearity};
use crate::spectral::{Grid, Spectrum};
use crate::par;

const CONTOUR_POINTS: usize = 32;

#[derive(Debug, Clone, Copy)]
struct Coeffs {
    e: Complex64,
    e2: Complex64,
    q: Complex64,
    f1: Complex64,
    f2: Complex64,
    f3: Complex64,
}

/// The four φ-type functions of `z`, without the step factor `h`:
/// `((e^{z/2} − 1)/z, f1, f2, f3)`.
fn phi(z: Complex64) -> [Complex64; 4] {
    let direct = |z: Complex64| {
        let ez = z.exp();
        let z3 = z * z * z;
        [
            ((z * 0.5).exp() - 1.0) / z,
            (-4.0 - z + ez * (4.0 - 3.0 * z + z * z)) / z3,
            (2.0 + z + ez * (z - 2.0)) / z3,
            (-4.0 - 3.0 * z - z * z + ez * (4.0 - z)) / z3,
        ]
    };
    if z.norm() >= 0.5 {
        return direct(z);
    }
    let mut acc = [Complex64::new(0.0, 0.0); 4];
    for k in 0..CONTOUR_POINTS {
        let theta = 2.0 * PI * (k as f64 + 0.5) / CONTOUR_POINTS as f64;
        let r = z + Complex64::from_polar(1.0, theta);
        for (a, v) in acc.iter_mut().zip(direct(r)) {
            *a += v;
        }
    }
    acc.map(|a| a / CONTOUR_POINTS as f64)
}

/// Diagonal ETDRK4 stepper for `v' = Lv + N(v)` with `L = iω`.
#[derive(Debug, Clone)]
pub struct Etdrk4 {
    coeffs: Vec<Coeffs>,
    nonlinearity: Nonlinearity,
    dt: f64,
}

impl Etdrk4 {
    pub fn new(params: DispersionParams, dt: f64, nonlinearity: Nonlinearity) -> Self {
        let grid: Grid = *nonlinearity.grid();
        let ny = grid.ny();
        let coeffs = par::map_range(grid.len(), |idx| {
            let (i, j) = (idx / ny, idx % ny);
            let xi = grid.xi(i);
            let l = if xi == 0.0 {
                0.0
            } else {
                params.omega_raw(xi, grid.eta(j) as f64)
            };
            let z = Complex64::new(0.0, l * dt);
            let [q, f1, f2, f3] = phi(z);
            Coeffs {
                e: z.exp(),
                e2: (z * 0.5).exp(),
                q: q * dt,
                f1: f1 * dt,
                f2: f2 * dt,
                f3: f3 * dt,
            }
        });
        Etdrk4 {
            coeffs,
            nonlinearity,
            dt,
        }
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    /// Advance `v` by one step of length `dt`.
    pub fn step(&self, v: &Spectrum) -> Spectrum {
        let nl = |s: &Spectrum| self.nonlinearity.apply(s);
        let combine = |f: &dyn Fn(&Coeffs, usize) -> Complex64| -> Spectrum {
            let coeffs = (0..self.coeffs.len()).map(|k| f(&self.coeffs[k], k)).collect();
            Spectrum::new(*v.grid(), coeffs).expect("same grid")
        };
        let vc = v.coeffs();
        let nv = nl(v);
        let nvc = nv.coeffs();
        let a = combine(&|c, k| c.e2 * vc[k] + c.q * nvc[k]);
        let na = nl(&a);
        let nac = na.coeffs();
        let b = combine(&|c, k| c.e2 * vc[k] + c.q * nac[k]);
        let nb = nl(&b);
        let nbc = nb.coeffs();
        let ac = a.coeffs();
        let cc = combine(&|c, k| c.e2 * ac[k] + c.q * (2.0 * nbc[k] - nvc[k]));
        let nc = nl(&cc);
        let ncc = nc.coeffs();
        let mut out = combine(&|c, k| {
            c.e * vc[k] + c.f1 * nvc[k] + 2.0 * c.f2 * (nac[k] + nbc[k]) + c.f3 * ncc[k]
        });
        out.project_constraint();
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn phi_limits_at_zero() {
        let [q, f1, f2, f3] = phi(Complex64::new(0.0, 0.0));
        assert!((q - 0.5).norm() < 1e-14);
        for f in [f1, f2, f3] {
            assert!((f - 1.0 / 6.0).norm() < 1e-14);
        }
    }

    #[test]
    fn contour_matches_direct_near_threshold() {
        let z = Complex64::new(0.0, 0.499);
        let a = phi(z);
        let b = phi(Complex64::new(0.0, 0.501));
        for (x, y) in a.iter().zip(&b) {
            assert!((x - y).norm() < 1e-2);
        }
    }
}
