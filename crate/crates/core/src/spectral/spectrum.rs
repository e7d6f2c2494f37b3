use num_complex::Complex64;
use rustfft::FftDirection;

use super::fft::fft2;
use super::Grid;
use crate::{par, Error, Result};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Real samples on the collocation grid, stored row-major as `[i·ny + j]`
/// with `i` the x-index.
#[derive(Debug, Clone, PartialEq)]
pub struct Field {
    grid: Grid,
    values: Vec<f64>,
}

impl Field {
    pub fn new(grid: Grid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::GridMismatch);
        }
        if let Some(k) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::Domain(format!("non-finite sample at index {k}")));
        }
        Ok(Field { grid, values })
    }

    pub fn zeros(grid: Grid) -> Self {
        Field {
            grid,
            values: vec![0.0; grid.len()],
        }
    }

    /// Unchecked constructor for intermediate products, which may overflow;
    /// callers test the resulting spectrum for finiteness.
    pub(crate) fn from_raw(grid: Grid, values: Vec<f64>) -> Self {
        debug_assert_eq!(values.len(), grid.len());
        Field { grid, values }
    }

    /// Sample `f(x, y)` at every collocation point.
    pub fn from_fn(grid: Grid, f: impl Fn(f64, f64) -> f64 + Sync + Send) -> Self {
        let ny = grid.ny();
        let mut values = vec![0.0; grid.len()];
        par::for_each_chunk_mut(&mut values, ny, |i, row| {
            let x = grid.x(i);
            for (j, v) in row.iter_mut().enumerate() {
                *v = f(x, grid.y(j));
            }
        });
        Field { grid, values }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn at(&self, i: usize, j: usize) -> f64 {
        self.values[self.grid.flat(i, j)]
    }

    /// Riemann sum `Σ f(u_ij) Δx Δy`, exact for trigonometric polynomials of
    /// low enough degree.
    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.values.iter().map(|&v| f(v)).sum::<f64>() * self.grid.cell_area()
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }
}

/// Fourier coefficients on the `(ξ, η)` lattice, stored in FFT order as
/// `[i·ny + j]`.
///
/// Coefficients are referenced to the physical origin, so
/// `u(x, y) = (nx·ny)⁻¹ Σ c(ξ, η) e^{i(ξx + ηy)}` on the collocation points.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    grid: Grid,
    coeffs: Vec<Complex64>,
}

impl Spectrum {
    pub fn new(grid: Grid, coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.len() != grid.len() {
            return Err(Error::GridMismatch);
        }
        Ok(Spectrum { grid, coeffs })
    }

    pub fn zeros(grid: Grid) -> Self {
        Spectrum {
            grid,
            coeffs: vec![ZERO; grid.len()],
        }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn coeffs_mut(&mut self) -> &mut [Complex64] {
        &mut self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Complex64> {
        self.coeffs
    }

    /// Coefficient at signed lattice indices `(k, η)`, where `ξ = k·dξ`.
    pub fn get(&self, k: i64, eta: i64) -> Option<Complex64> {
        let i = self.grid.index_of_kx(k)?;
        let j = self.grid.index_of_eta(eta)?;
        Some(self.coeffs[self.grid.flat(i, j)])
    }

    pub fn set(&mut self, k: i64, eta: i64, c: Complex64) -> Result<()> {
        let (i, j) = self
            .grid
            .index_of_kx(k)
            .zip(self.grid.index_of_eta(eta))
            .ok_or_else(|| Error::Domain(format!("mode ({k}, {eta}) is off the lattice")))?;
        let idx = self.grid.flat(i, j);
        self.coeffs[idx] = c;
        Ok(())
    }

    /// Set `(k, η)` to `c` and `(-k, -η)` to `conj(c)`.
    pub fn set_real_mode(&mut self, k: i64, eta: i64, c: Complex64) -> Result<()> {
        if k == 0 && eta == 0 {
            return self.set(0, 0, Complex64::new(c.re, 0.0));
        }
        self.set(k, eta, c)?;
        self.set(-k, -eta, c.conj())
    }

    fn check(&self, other: &Spectrum) -> Result<()> {
        if self.grid == other.grid {
            Ok(())
        } else {
            Err(Error::GridMismatch)
        }
    }

    pub fn add(&self, other: &Spectrum) -> Result<Spectrum> {
        self.check(other)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a + b)
            .collect();
        Ok(Spectrum {
            grid: self.grid,
            coeffs,
        })
    }

    pub fn sub(&self, other: &Spectrum) -> Result<Spectrum> {
        self.check(other)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a - b)
            .collect();
        Ok(Spectrum {
            grid: self.grid,
            coeffs,
        })
    }

    pub fn scale(&self, s: f64) -> Spectrum {
        Spectrum {
            grid: self.grid,
            coeffs: self.coeffs.iter().map(|c| c * s).collect(),
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().fold(0.0, |m, c| m.max(c.norm()))
    }

    pub fn max_abs_diff(&self, other: &Spectrum) -> Result<f64> {
        self.check(other)?;
        Ok(self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .fold(0.0, |m, (a, b)| m.max((a - b).norm())))
    }

    pub fn is_finite(&self) -> bool {
        self.coeffs.iter().all(|c| c.re.is_finite() && c.im.is_finite())
    }

    /// Largest `|c(-ξ,-η) - conj(c(ξ,η))|` over modes off the Nyquist lines.
    pub fn hermitian_defect(&self) -> f64 {
        let g = &self.grid;
        let mut worst = 0.0f64;
        for i in 0..g.nx() {
            for j in 0..g.ny() {
                if g.is_nyquist(i, j) {
                    continue;
                }
                let (mi, mj) = g.mirror(i, j);
                let d = self.coeffs[g.flat(mi, mj)] - self.coeffs[g.flat(i, j)].conj();
                worst = worst.max(d.norm());
            }
        }
        worst
    }

    /// Zero the modes `(0, η ≠ 0)` outside the domain of `∂_x⁻¹` together
    /// with the Nyquist row and column.
    pub fn project_constraint(&mut self) {
        let g = self.grid;
        for j in 1..g.ny() {
            self.coeffs[g.flat(0, j)] = ZERO;
        }
        for j in 0..g.ny() {
            self.coeffs[g.flat(g.nx() / 2, j)] = ZERO;
        }
        for i in 0..g.nx() {
            self.coeffs[g.flat(i, g.ny() / 2)] = ZERO;
        }
    }

    pub fn constrained(mut self) -> Spectrum {
        self.project_constraint();
        self
    }

    /// Largest modulus among the modes `project_constraint` would remove.
    pub fn constraint_defect(&self) -> f64 {
        let mut probe = self.clone();
        probe.project_constraint();
        self.max_abs_diff(&probe).unwrap_or(0.0)
    }
}

/// `(-1)^k`: shifts DFT coefficients from the first sample to `x = 0`.
fn origin_shift(grid: &Grid, coeffs: &mut [Complex64]) {
    let ny = grid.ny();
    par::for_each_chunk_mut(coeffs, ny, |i, row| {
        if grid.kx(i).rem_euclid(2) == 1 {
            row.iter_mut().for_each(|c| *c = -*c);
        }
    });
}

/// Forward transform of a real field.
pub fn analyze(field: &Field) -> Spectrum {
    let grid = *field.grid();
    let mut data: Vec<Complex64> = field.values().iter().map(|&v| Complex64::new(v, 0.0)).collect();
    fft2(&mut data, grid.nx(), grid.ny(), FftDirection::Forward);
    origin_shift(&grid, &mut data);
    Spectrum {
        grid,
        coeffs: data,
    }
}

/// Inverse transform returning complex samples.
pub fn synthesize_complex(spectrum: &Spectrum) -> Vec<Complex64> {
    let grid = *spectrum.grid();
    let mut data = spectrum.coeffs().to_vec();
    origin_shift(&grid, &mut data);
    fft2(&mut data, grid.nx(), grid.ny(), FftDirection::Inverse);
    let s = 1.0 / grid.len() as f64;
    data.iter_mut().for_each(|c| *c *= s);
    data
}

/// Inverse transform, keeping the real part. See [`synthesize_complex`] to
/// inspect the imaginary residue.
pub fn synthesize(spectrum: &Spectrum) -> Field {
    let values = synthesize_complex(spectrum).into_iter().map(|c| c.re).collect();
    Field {
        grid: *spectrum.grid(),
        values,
    }
}

/// Pointwise product with `symbol(ξ, η)`, evaluated on every lattice point.
pub fn apply_multiplier<F>(spectrum: &Spectrum, symbol: F) -> Spectrum
where
    F: Fn(f64, i64) -> Complex64 + Sync + Send,
{
    try_apply_multiplier(spectrum, |xi, eta| Ok(symbol(xi, eta)))
        .expect("infallible symbol")
}

/// As [`apply_multiplier`] for symbols that may fail; the first failure in
/// lattice order is returned.
pub fn try_apply_multiplier<F>(spectrum: &Spectrum, symbol: F) -> Result<Spectrum>
where
    F: Fn(f64, i64) -> Result<Complex64> + Sync + Send,
{
    let grid = *spectrum.grid();
    let ny = grid.ny();
    let rows: Vec<Result<Vec<Complex64>>> = par::map_range(grid.nx(), |i| {
        let xi = grid.xi(i);
        (0..ny)
            .map(|j| Ok(spectrum.coeffs[i * ny + j] * symbol(xi, grid.eta(j))?))
            .collect()
    });
    let mut coeffs = Vec::with_capacity(grid.len());
    for row in rows {
        coeffs.extend(row?);
    }
    Ok(Spectrum { grid, coeffs })
}
