use serde::{Deserialize, Serialize};

use super::{Parallelogram, Surface, Vec2};
use crate::dynamics::DispersionParams;
use crate::{par, Error, Result};

fn lattice_points(p: &Parallelogram, density: usize) -> Vec<Vec2> {
    let n = density.next_power_of_two();
    let step = 2.0 / n as f64;
    let mut pts = Vec::with_capacity((n + 1) * (n + 1));
    for a in 0..=n {
        for b in 0..=n {
            pts.push(p.point(-1.0 + a as f64 * step, -1.0 + b as f64 * step));
        }
    }
    pts
}

/// `sup_{u,v} |φ(u) − φ(v) − ∇φ(v)·(u − v)|` over the pairs of a
/// `(n+1) × (n+1)` parameter lattice on `p`, with `n` the power of two at or
/// above `density`. Lattices for larger `density` contain the smaller ones,
/// so the value is nondecreasing in `density`.
pub fn flatness_defect(surface: &Surface, p: &Parallelogram, density: usize) -> Result<f64> {
    if density < 2 {
        return Err(Error::Precondition(format!("density {density} < 2")));
    }
    if !(p.area() > 0.0 && p.area().is_finite()) {
        return Err(Error::Domain("degenerate parallelogram".into()));
    }
    let pts = lattice_points(p, density);
    if let Some(w) = pts.iter().find(|&&w| !surface.is_regular_at(w)) {
        return Err(Error::Domain(format!("surface is singular at {w:?}")));
    }
    let vals: Vec<f64> = pts.iter().map(|&w| surface.value(w)).collect();
    let grads: Vec<Vec2> = pts.iter().map(|&w| surface.gradient(w)).collect();
    let per_v = par::map_range(pts.len(), |k| {
        let v = pts[k];
        let (fv, g) = (vals[k], grads[k]);
        pts.iter().zip(&vals).fold(0.0f64, |m, (u, fu)| {
            let r = fu - fv - g[0] * (u[0] - v[0]) - g[1] * (u[1] - v[1]);
            m.max(r.abs())
        })
    });
    Ok(per_v.into_iter().fold(0.0, f64::max))
}

pub fn is_flat(surface: &Surface, p: &Parallelogram, delta: f64, density: usize) -> Result<bool> {
    Ok(flatness_defect(surface, p, density)? <= delta)
}

/// Eigenvalues `λ₁ ≥ λ₂` and unit eigenvectors of a symmetric 2×2 matrix.
pub(crate) fn sym_eigen(h: [[f64; 2]; 2]) -> ([f64; 2], [Vec2; 2]) {
    let (a, b, c) = (h[0][0], h[0][1], h[1][1]);
    let m = 0.5 * (a + c);
    let r = (0.25 * (a - c) * (a - c) + b * b).sqrt();
    let (l1, l2) = (m + r, m - r);
    let e1 = if b.abs() > 1e-300 {
        let v = [l1 - c, b];
        let n = v[0].hypot(v[1]);
        [v[0] / n, v[1] / n]
    } else if a >= c {
        [1.0, 0.0]
    } else {
        [0.0, 1.0]
    };
    ([l1, l2], [e1, [-e1[1], e1[0]]])
}

pub(crate) fn spectral_norm(h: [[f64; 2]; 2]) -> f64 {
    let ([l1, l2], _) = sym_eigen(h);
    l1.abs().max(l2.abs())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HessianData {
    pub det: f64,
    pub trace: f64,
    /// `λ₁ ≥ λ₂`.
    pub eigenvalues: [f64; 2],
}

/// Determinant, trace and eigenvalues of `∂²ω_α` at `(ξ, η)`.
pub fn hessian_data(params: &DispersionParams, xi: f64, eta: f64) -> Result<HessianData> {
    if xi == 0.0 {
        return Err(Error::Domain("Hessian of omega is undefined at xi = 0".into()));
    }
    let h = Surface::FkpPhase(*params).hessian([xi, eta]);
    let (eigenvalues, _) = sym_eigen(h);
    Ok(HessianData {
        det: h[0][0] * h[1][1] - h[0][1] * h[1][0],
        trace: h[0][0] + h[1][1],
        eigenvalues,
    })
}

/// The two unit vectors annihilating the Hessian quadratic form at `w`,
/// `(√|λ₂| e₁ ± √λ₁ e₂)/norm`.
pub fn null_directions(surface: &Surface, w: Vec2) -> Result<[Vec2; 2]> {
    let h = surface.hessian(w);
    let ([l1, l2], [e1, e2]) = sym_eigen(h);
    let scale = l1.abs().max(l2.abs());
    if !(l1 > 1e-14 * scale && l2 < -1e-14 * scale) {
        return Err(Error::Precondition(format!(
            "no null direction at {w:?}: Hessian eigenvalues {l1}, {l2} are not of opposite sign"
        )));
    }
    let (a, b) = ((-l2).sqrt(), l1.sqrt());
    let n = a.hypot(b);
    let plus = [(a * e1[0] + b * e2[0]) / n, (a * e1[1] + b * e2[1]) / n];
    let minus = [(a * e1[0] - b * e2[0]) / n, (a * e1[1] - b * e2[1]) / n];
    Ok([plus, minus])
}

/// Shape of the parallelograms used by [`max_flat_length`]: for length `ℓ`
/// along a direction, the perpendicular side is
/// `width_factor · δ / (ℓ ‖∂²φ‖)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AspectRule {
    pub width_factor: f64,
    /// Clamp on the returned length.
    pub max_length: f64,
    /// Sampling density passed to [`flatness_defect`].
    pub density: usize,
}

impl Default for AspectRule {
    fn default() -> Self {
        AspectRule {
            width_factor: 0.125,
            max_length: 16.0,
            density: 16,
        }
    }
}

impl AspectRule {
    pub(crate) fn width(&self, len: f64, delta: f64, hnorm: f64) -> f64 {
        self.width_factor * delta / (len * hnorm.max(1e-300))
    }

    pub(crate) fn shape(
        &self,
        surface: &Surface,
        center: Vec2,
        dir: Vec2,
        len: f64,
        delta: f64,
    ) -> Option<Parallelogram> {
        let hnorm = spectral_norm(surface.hessian(center));
        let w = if hnorm > 0.0 {
            self.width(len, delta, hnorm)
        } else {
            len
        };
        Parallelogram::from_sides(center, dir, len, [-dir[1], dir[0]], w).ok()
    }
}

fn flat_at(
    surface: &Surface,
    center: Vec2,
    dir: Vec2,
    len: f64,
    delta: f64,
    rule: &AspectRule,
) -> bool {
    rule.shape(surface, center, dir, len, delta)
        .and_then(|p| flatness_defect(surface, &p, rule.density).ok())
        .is_some_and(|d| d <= delta)
}

/// Longest `ℓ` such that the parallelogram centred at `w` with side `ℓ`
/// along `dir` and the perpendicular side given by `rule` is `δ`-flat.
/// The search grows `ℓ` geometrically from `√(δ/‖∂²φ‖)` and bisects to a
/// relative step of `1e−3`, then checks that `1.01ℓ` fails. Returns
/// `rule.max_length` when no failure is found below it.
pub fn max_flat_length(
    surface: &Surface,
    w: Vec2,
    dir: Vec2,
    delta: f64,
    rule: &AspectRule,
) -> Result<f64> {
    if !(delta > 0.0) {
        return Err(Error::Domain(format!("delta = {delta} must be positive")));
    }
    let norm = dir[0].hypot(dir[1]);
    if !(norm > 0.0) {
        return Err(Error::Domain("direction must be nonzero".into()));
    }
    let dir = [dir[0] / norm, dir[1] / norm];
    if surface.is_affine() {
        return Ok(rule.max_length);
    }
    let flat = |l: f64| flat_at(surface, w, dir, l, delta, rule);
    let hnorm = spectral_norm(surface.hessian(w)).max(1e-300);
    let mut lo = (delta / hnorm).sqrt().min(rule.max_length);
    let mut shrink = 0;
    while !flat(lo) {
        lo *= 0.5;
        shrink += 1;
        if shrink > 40 {
            return Ok(0.0);
        }
    }
    loop {
        let mut hi = lo;
        loop {
            if hi >= rule.max_length {
                if flat(rule.max_length) {
                    return Ok(rule.max_length);
                }
                hi = rule.max_length;
                break;
            }
            let next = (2.0 * hi).min(rule.max_length);
            if flat(next) {
                lo = next;
                hi = next;
            } else {
                hi = next;
                break;
            }
        }
        while hi / lo > 1.0 + 1e-3 {
            let mid = (lo * hi).sqrt();
            if flat(mid) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        if !flat(lo * 1.01) {
            return Ok(lo);
        }
        lo *= 1.01;
    }
}

/// The parallelogram of [`max_flat_length`]: side `ℓ_max` along `dir`,
/// perpendicular side from `rule`.
pub fn flat_parallelogram(
    surface: &Surface,
    w: Vec2,
    dir: Vec2,
    delta: f64,
    rule: &AspectRule,
) -> Result<Parallelogram> {
    let len = max_flat_length(surface, w, dir, delta, rule)?;
    if !(len > 0.0) {
        return Err(Error::Empty(format!("no flat parallelogram at {w:?}")));
    }
    let norm = dir[0].hypot(dir[1]);
    let dir = [dir[0] / norm, dir[1] / norm];
    rule.shape(surface, w, dir, len, delta)
        .ok_or_else(|| Error::Domain("degenerate flat parallelogram".into()))
}
