use serde::{Deserialize, Serialize};

use super::flatness::{spectral_norm, sym_eigen};
use super::{flatness_defect, max_flat_length, null_directions, AspectRule, Parallelogram, Surface, Vec2};
use crate::{par, Error, Result};

/// Closed rectangle `[ξ₀, ξ₁] × [η₀, η₁]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Rect {
    pub xi: Vec2,
    pub eta: Vec2,
}

impl Rect {
    pub fn new(xi: Vec2, eta: Vec2) -> Result<Self> {
        if !(xi[1] > xi[0] && eta[1] > eta[0]) {
            return Err(Error::Domain(format!("empty rectangle {xi:?} x {eta:?}")));
        }
        Ok(Rect { xi, eta })
    }

    fn within(&self, outer: &[Vec2; 2]) -> bool {
        self.xi[0] >= outer[0][0]
            && self.xi[1] <= outer[0][1]
            && self.eta[0] >= outer[1][0]
            && self.eta[1] <= outer[1][1]
    }

    fn as_parallelogram(&self) -> Result<Parallelogram> {
        Parallelogram::rect(self.xi[0], self.xi[1], self.eta[0], self.eta[1])
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tile {
    pub shape: Parallelogram,
    pub defect: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TilingOptions {
    /// Shape rule and search density for the tile length.
    pub rule: AspectRule,
    /// Sampling density for the per-tile defect.
    pub check_density: usize,
    /// Sample points per side of the domain for the overlap count.
    pub overlap_samples: usize,
}

impl Default for TilingOptions {
    fn default() -> Self {
        TilingOptions {
            rule: AspectRule::default(),
            check_density: 8,
            overlap_samples: 256,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Tiling {
    pub delta: f64,
    pub surface: Surface,
    pub domain: Rect,
    pub tiles: Vec<Tile>,
    /// Smallest `A` with every tile `(φ, Aδ)`-flat: `max defect / δ`.
    pub flatness_factor: f64,
    /// Largest number of tiles containing one sample point.
    pub max_overlap: usize,
    /// Sample points covered by no tile.
    pub coverage_gap: usize,
}

/// Separating-axis overlap test for two convex quadrilaterals.
fn quads_intersect(a: &[Vec2; 4], b: &[Vec2; 4]) -> bool {
    for poly in [a, b] {
        for k in 0..4 {
            let p = poly[k];
            let q = poly[(k + 1) % 4];
            let axis = [q[1] - p[1], p[0] - q[0]];
            let proj = |v: &Vec2| v[0] * axis[0] + v[1] * axis[1];
            let (amin, amax) = a.iter().map(proj).fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), x| (l.min(x), h.max(x)));
            let (bmin, bmax) = b.iter().map(proj).fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), x| (l.min(x), h.max(x)));
            if amax < bmin || bmax < amin {
                return false;
            }
        }
    }
    true
}

/// Tile directions at `c`: null directions on saddles, eigenvectors
/// otherwise.
fn tile_directions(surface: &Surface, c: Vec2) -> Vec2 {
    match null_directions(surface, c) {
        Ok([n1, _]) => n1,
        Err(_) => sym_eigen(surface.hessian(c)).1[0],
    }
}

/// Tiles of one Whitney box: the lattice of translates of one flat
/// parallelogram that meet the box.
fn box_tiles(
    surface: &Surface,
    bx: &Parallelogram,
    delta: f64,
    rule: &AspectRule,
) -> Result<Vec<Parallelogram>> {
    let c = bx.center;
    let d = tile_directions(surface, c);
    let perp = [-d[1], d[0]];
    let diam = 2.0 * bx.edge1[0].abs().max(bx.edge2[1].abs()) * 2f64.sqrt();
    let len = max_flat_length(surface, c, d, delta, rule)?.min(diam);
    if !(len > 0.0) {
        return Err(Error::Precondition(format!("no flat parallelogram found at {c:?}")));
    }
    let hnorm = spectral_norm(surface.hessian(c));
    let width = rule.width(len, delta, hnorm).min(diam);
    let g1 = [len * d[0], len * d[1]];
    let g2 = [width * perp[0], width * perp[1]];
    let base = Parallelogram::new(c, [0.5 * g1[0], 0.5 * g1[1]], [0.5 * g2[0], 0.5 * g2[1]])?;
    let lattice = Parallelogram::new(c, g1, g2)?;
    let verts = bx.vertices();
    let coords: Vec<Vec2> = verts.iter().map(|&v| lattice.coords(v)).collect();
    let range = |k: usize| {
        let lo = coords.iter().map(|q| q[k]).fold(f64::INFINITY, f64::min);
        let hi = coords.iter().map(|q| q[k]).fold(f64::NEG_INFINITY, f64::max);
        (lo.floor() as i64 - 1, hi.ceil() as i64 + 1)
    };
    let (i0, i1) = range(0);
    let (j0, j1) = range(1);
    let mut out = Vec::new();
    for i in i0..=i1 {
        for j in j0..=j1 {
            let t = base.shifted([
                i as f64 * g1[0] + j as f64 * g2[0],
                i as f64 * g1[1] + j as f64 * g2[1],
            ]);
            if quads_intersect(&t.vertices(), &verts) {
                out.push(t);
            }
        }
    }
    Ok(out)
}

/// Cover `domain` by `δ`-flat parallelograms.
///
/// The domain is cut into boxes of side about `δ^{1/3}`; in each box the
/// plane is tiled by translates of one parallelogram, long side along a null
/// direction at the box centre with length from [`max_flat_length`], and the
/// translates meeting the box are kept. Every tile's defect is then
/// measured, so `flatness_factor` is an observation rather than an input.
pub fn tile_flat(surface: &Surface, domain: Rect, delta: f64, opts: &TilingOptions) -> Result<Tiling> {
    if !(delta > 0.0 && delta <= 0.25) {
        return Err(Error::Domain(format!("delta = {delta} must lie in (0, 1/4]")));
    }
    if let Some(valid) = surface.validity() {
        if !domain.within(&valid) {
            return Err(Error::Domain(format!(
                "domain {:?} x {:?} leaves the validity region {valid:?}",
                domain.xi, domain.eta
            )));
        }
    }
    let shapes = if surface.is_affine() {
        vec![domain.as_parallelogram()?]
    } else {
        let s = delta.cbrt();
        let w = domain.xi[1] - domain.xi[0];
        let h = domain.eta[1] - domain.eta[0];
        let (nx, ny) = ((w / s).ceil() as usize, (h / s).ceil() as usize);
        let (bw, bh) = (w / nx as f64, h / ny as f64);
        let boxes: Vec<Parallelogram> = (0..nx * ny)
            .map(|k| {
                let (a, b) = ((k / ny) as f64, (k % ny) as f64);
                let x0 = domain.xi[0] + a * bw;
                let y0 = domain.eta[0] + b * bh;
                Parallelogram::rect(x0, x0 + bw, y0, y0 + bh)
            })
            .collect::<Result<_>>()?;
        let per_box = par::map(&boxes, |bx| box_tiles(surface, bx, delta, &opts.rule));
        let mut all = Vec::new();
        for t in per_box {
            all.extend(t?);
        }
        all
    };
    let defects = par::map(&shapes, |p| flatness_defect(surface, p, opts.check_density));
    let mut tiles = Vec::with_capacity(shapes.len());
    for (shape, d) in shapes.into_iter().zip(defects) {
        tiles.push(Tile { shape, defect: d? });
    }
    let max_defect = tiles.iter().map(|t| t.defect).fold(0.0, f64::max);
    let (max_overlap, coverage_gap) = overlap(&tiles, &domain, opts.overlap_samples);
    Ok(Tiling {
        delta,
        surface: surface.clone(),
        domain,
        flatness_factor: max_defect / delta,
        tiles,
        max_overlap,
        coverage_gap,
    })
}

/// Maximum pointwise multiplicity and number of uncovered points on an
/// `m × m` sample lattice, offset so that samples avoid tile edges.
fn overlap(tiles: &[Tile], domain: &Rect, m: usize) -> (usize, usize) {
    let m = m.max(1);
    let (x0, y0) = (domain.xi[0], domain.eta[0]);
    let dx = (domain.xi[1] - x0) / m as f64;
    let dy = (domain.eta[1] - y0) / m as f64;
    let mut buckets: Vec<Vec<usize>> = vec![Vec::new(); m * m];
    let cell = |v: f64, o: f64, d: f64| ((v - o) / d).floor().clamp(0.0, (m - 1) as f64) as usize;
    for (k, t) in tiles.iter().enumerate() {
        let [bx, by] = t.shape.bbox();
        if bx[1] < x0 || bx[0] > domain.xi[1] || by[1] < y0 || by[0] > domain.eta[1] {
            continue;
        }
        let (i0, i1) = (cell(bx[0], x0, dx), cell(bx[1], x0, dx));
        let (j0, j1) = (cell(by[0], y0, dy), cell(by[1], y0, dy));
        for i in i0..=i1 {
            for j in j0..=j1 {
                buckets[i * m + j].push(k);
            }
        }
    }
    let frac = 0.5f64.sqrt() - 0.5;
    let counts = par::map_range(m * m, |idx| {
        let (i, j) = (idx / m, idx % m);
        let w = [x0 + (i as f64 + 0.5 + 0.3 * frac) * dx, y0 + (j as f64 + 0.5 - 0.2 * frac) * dy];
        buckets[idx]
            .iter()
            .filter(|&&k| tiles[k].shape.contains(w, 0.0))
            .count()
    });
    let max = counts.iter().cloned().max().unwrap_or(0);
    let gap = counts.iter().filter(|&&c| c == 0).count();
    (max, gap)
}
