use serde::{Deserialize, Serialize};

use super::Vec2;
use crate::dynamics::DispersionParams;
use crate::{Error, Result};

/// `{center + s·edge1 + t·edge2 : s, t ∈ [−1, 1]}`; edges are half-length
/// vectors.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Parallelogram {
    pub center: Vec2,
    pub edge1: Vec2,
    pub edge2: Vec2,
}

fn cross(a: Vec2, b: Vec2) -> f64 {
    a[0] * b[1] - a[1] * b[0]
}

impl Parallelogram {
    pub fn new(center: Vec2, edge1: Vec2, edge2: Vec2) -> Result<Self> {
        let p = Parallelogram {
            center,
            edge1,
            edge2,
        };
        if !(p.area() > 0.0) || !p.area().is_finite() {
            return Err(Error::Domain("degenerate parallelogram".into()));
        }
        Ok(p)
    }

    /// Axis-aligned rectangle `[x0, x1] × [y0, y1]`.
    pub fn rect(x0: f64, x1: f64, y0: f64, y1: f64) -> Result<Self> {
        Parallelogram::new(
            [0.5 * (x0 + x1), 0.5 * (y0 + y1)],
            [0.5 * (x1 - x0), 0.0],
            [0.0, 0.5 * (y1 - y0)],
        )
    }

    /// Sides of full length `l1`, `l2` along the unit vectors `d1`, `d2`.
    pub fn from_sides(center: Vec2, d1: Vec2, l1: f64, d2: Vec2, l2: f64) -> Result<Self> {
        Parallelogram::new(
            center,
            [0.5 * l1 * d1[0], 0.5 * l1 * d1[1]],
            [0.5 * l2 * d2[0], 0.5 * l2 * d2[1]],
        )
    }

    pub fn area(&self) -> f64 {
        4.0 * cross(self.edge1, self.edge2).abs()
    }

    pub fn point(&self, s: f64, t: f64) -> Vec2 {
        [
            self.center[0] + s * self.edge1[0] + t * self.edge2[0],
            self.center[1] + s * self.edge1[1] + t * self.edge2[1],
        ]
    }

    /// Vertices in cyclic order.
    pub fn vertices(&self) -> [Vec2; 4] {
        [
            self.point(-1.0, -1.0),
            self.point(1.0, -1.0),
            self.point(1.0, 1.0),
            self.point(-1.0, 1.0),
        ]
    }

    /// `[[ξ_min, ξ_max], [η_min, η_max]]`.
    pub fn bbox(&self) -> [Vec2; 2] {
        let v = self.vertices();
        let mut b = [[f64::INFINITY, f64::NEG_INFINITY]; 2];
        for p in v {
            for k in 0..2 {
                b[k][0] = b[k][0].min(p[k]);
                b[k][1] = b[k][1].max(p[k]);
            }
        }
        b
    }

    /// Parallelogram coordinates `(s, t)` of `w`.
    pub fn coords(&self, w: Vec2) -> Vec2 {
        let d = [w[0] - self.center[0], w[1] - self.center[1]];
        let det = cross(self.edge1, self.edge2);
        [cross(d, self.edge2) / det, cross(self.edge1, d) / det]
    }

    /// Closed membership with a relative tolerance `tol` on the coordinates.
    pub fn contains(&self, w: Vec2, tol: f64) -> bool {
        let [s, t] = self.coords(w);
        s.abs() <= 1.0 + tol && t.abs() <= 1.0 + tol
    }

    /// Image under the linear map with matrix `m` (row-major).
    pub fn map_linear(&self, m: [[f64; 2]; 2]) -> Result<Parallelogram> {
        let f = |v: Vec2| [m[0][0] * v[0] + m[0][1] * v[1], m[1][0] * v[0] + m[1][1] * v[1]];
        Parallelogram::new(f(self.center), f(self.edge1), f(self.edge2))
    }

    /// Translate by `d`.
    pub fn shifted(&self, d: Vec2) -> Parallelogram {
        Parallelogram {
            center: [self.center[0] + d[0], self.center[1] + d[1]],
            ..*self
        }
    }
}

/// Image under `diag(N, N^{α/2+1})`.
pub fn dilate(p: &Parallelogram, n: f64, params: &DispersionParams) -> Result<Parallelogram> {
    if !(n > 0.0 && n.is_finite()) {
        return Err(Error::Domain(format!("dilation factor {n} must be positive")));
    }
    p.map_linear([[n, 0.0], [0.0, n.powf(0.5 * params.alpha() + 1.0)]])
}

/// `meas_{ℝ×ℤ}`: the sum over integer `η` of the length of the row
/// `{ξ : (ξ, η) ∈ p}`.
pub fn lattice_measure(p: &Parallelogram) -> f64 {
    let [_, [y0, y1]] = p.bbox();
    let v = p.vertices();
    let lo = y0.ceil() as i64;
    let hi = y1.floor() as i64;
    let mut total = 0.0;
    for eta in lo..=hi {
        total += row_length(&v, eta as f64);
    }
    total
}

/// Length of the intersection of the horizontal line `η = y` with a closed
/// convex quadrilateral.
fn row_length(v: &[Vec2; 4], y: f64) -> f64 {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for k in 0..4 {
        let a = v[k];
        let b = v[(k + 1) % 4];
        let (ymin, ymax) = (a[1].min(b[1]), a[1].max(b[1]));
        if y < ymin || y > ymax {
            continue;
        }
        if a[1] == b[1] {
            lo = lo.min(a[0].min(b[0]));
            hi = hi.max(a[0].max(b[0]));
        } else {
            let x = a[0] + (y - a[1]) * (b[0] - a[0]) / (b[1] - a[1]);
            lo = lo.min(x);
            hi = hi.max(x);
        }
    }
    if hi > lo {
        hi - lo
    } else {
        0.0
    }
}
