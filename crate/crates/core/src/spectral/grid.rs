use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Collocation grid on the periodic box `[-lx/2, lx/2) × [0, 2π)`.
///
/// Sample `(i, j)` sits at `x = -lx/2 + i·lx/nx`, `y = 2πj/ny`. Lattice index
/// `(i, j)` is stored in FFT order, so `i < nx/2` maps to `ξ = i·dξ` and
/// `i ≥ nx/2` to `ξ = (i - nx)·dξ`; likewise for η.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    nx: usize,
    ny: usize,
    lx: f64,
}

impl Grid {
    pub fn new(nx: usize, ny: usize, lx: f64) -> Result<Self> {
        for (name, n) in [("nx", nx), ("ny", ny)] {
            if n < 4 || !n.is_power_of_two() {
                return Err(Error::InvalidGrid(format!(
                    "{name} = {n} must be a power of two >= 4"
                )));
            }
        }
        if !(lx.is_finite() && lx > 0.0) {
            return Err(Error::InvalidGrid(format!("lx = {lx} must be positive")));
        }
        Ok(Grid { nx, ny, lx })
    }

    pub fn nx(&self) -> usize {
        self.nx
    }

    pub fn ny(&self) -> usize {
        self.ny
    }

    pub fn lx(&self) -> f64 {
        self.lx
    }

    pub fn len(&self) -> usize {
        self.nx * self.ny
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn dxi(&self) -> f64 {
        2.0 * PI / self.lx
    }

    pub fn dx(&self) -> f64 {
        self.lx / self.nx as f64
    }

    pub fn dy(&self) -> f64 {
        2.0 * PI / self.ny as f64
    }

    /// Area of the box `lx × 2π`.
    pub fn area(&self) -> f64 {
        2.0 * PI * self.lx
    }

    pub fn cell_area(&self) -> f64 {
        self.dx() * self.dy()
    }

    /// `√area / (nx·ny)`: L² weight of a unit coefficient.
    pub fn cell_weight(&self) -> f64 {
        self.area().sqrt() / self.len() as f64
    }

    pub fn x(&self, i: usize) -> f64 {
        -0.5 * self.lx + i as f64 * self.dx()
    }

    pub fn y(&self, j: usize) -> f64 {
        j as f64 * self.dy()
    }

    /// Signed integer wavenumber of FFT index `i` along x.
    pub fn kx(&self, i: usize) -> i64 {
        signed(i, self.nx)
    }

    /// Integer η of FFT index `j`.
    pub fn eta(&self, j: usize) -> i64 {
        signed(j, self.ny)
    }

    pub fn xi(&self, i: usize) -> f64 {
        self.kx(i) as f64 * self.dxi()
    }

    /// FFT index of a signed x-wavenumber, if it is on the lattice.
    pub fn index_of_kx(&self, k: i64) -> Option<usize> {
        unsigned(k, self.nx)
    }

    pub fn index_of_eta(&self, eta: i64) -> Option<usize> {
        unsigned(eta, self.ny)
    }

    /// Largest representable |ξ| (the Nyquist row is excluded).
    pub fn xi_max(&self) -> f64 {
        (self.nx / 2 - 1) as f64 * self.dxi()
    }

    /// `true` for the Nyquist row or column, whose modes have no conjugate
    /// partner on an even grid.
    pub fn is_nyquist(&self, i: usize, j: usize) -> bool {
        i == self.nx / 2 || j == self.ny / 2
    }

    pub fn flat(&self, i: usize, j: usize) -> usize {
        i * self.ny + j
    }

    /// Index of the conjugate partner `(-ξ, -η)`.
    pub fn mirror(&self, i: usize, j: usize) -> (usize, usize) {
        ((self.nx - i) % self.nx, (self.ny - j) % self.ny)
    }
}

fn signed(i: usize, n: usize) -> i64 {
    if i < n / 2 {
        i as i64
    } else {
        i as i64 - n as i64
    }
}

fn unsigned(k: i64, n: usize) -> Option<usize> {
    let half = (n / 2) as i64;
    if k < -half || k >= half {
        return None;
    }
    Some(if k >= 0 { k as usize } else { (k + n as i64) as usize })
}
