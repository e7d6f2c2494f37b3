use serde::{Deserialize, Serialize};

use crate::dynamics::DispersionParams;

pub type Vec2 = [f64; 2];

/// Phase surfaces `φ(ξ, η)` with analytic gradient and Hessian.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Surface {
    /// `a + bξ + cη`.
    Affine { a: f64, b: f64, c: f64 },
    /// `½ wᵀHw` with `H = [[hxx, hxy], [hxy, hyy]]`.
    Quadratic { hxx: f64, hxy: f64, hyy: f64 },
    /// `ξ² − η²`.
    HyperbolicParaboloid,
    /// `ξ² + η²`.
    Elliptic,
    /// `ω_α(ξ, η) = ξ|ξ|^α − η²/ξ`.
    FkpPhase(DispersionParams),
    /// `b|b|^α − (η − η*)²/b` with `b = ξ/κ + ξ*`.
    ShiftedPhase {
        params: DispersionParams,
        kappa: f64,
        xi_star: f64,
        eta_star: f64,
    },
    /// `base(ξ, η − aξ)`: the image of `base` under `(ξ, η) ↦ (ξ, η + aξ)`.
    Sheared { base: Box<Surface>, a: f64 },
    /// `base + a + bξ + cη`.
    PlusAffine {
        base: Box<Surface>,
        a: f64,
        b: f64,
        c: f64,
    },
}

fn spow(x: f64, p: f64) -> f64 {
    x.signum() * x.abs().powf(p)
}

impl Surface {
    pub fn value(&self, w: Vec2) -> f64 {
        let [x, y] = w;
        match self {
            Surface::Affine { a, b, c } => a + b * x + c * y,
            Surface::Quadratic { hxx, hxy, hyy } => 0.5 * (hxx * x * x + hyy * y * y) + hxy * x * y,
            Surface::HyperbolicParaboloid => x * x - y * y,
            Surface::Elliptic => x * x + y * y,
            Surface::FkpPhase(p) => p.omega_raw(x, y),
            Surface::ShiftedPhase {
                params,
                kappa,
                xi_star,
                eta_star,
            } => {
                let b = x / kappa + xi_star;
                spow(b, params.alpha() + 1.0) - (y - eta_star).powi(2) / b
            }
            Surface::Sheared { base, a } => base.value([x, y - a * x]),
            Surface::PlusAffine { base, a, b, c } => base.value(w) + a + b * x + c * y,
        }
    }

    pub fn gradient(&self, w: Vec2) -> Vec2 {
        let [x, y] = w;
        match self {
            Surface::Affine { b, c, .. } => [*b, *c],
            Surface::Quadratic { hxx, hxy, hyy } => [hxx * x + hxy * y, hxy * x + hyy * y],
            Surface::HyperbolicParaboloid => [2.0 * x, -2.0 * y],
            Surface::Elliptic => [2.0 * x, 2.0 * y],
            Surface::FkpPhase(p) => {
                let a = p.alpha();
                [(a + 1.0) * x.abs().powf(a) + y * y / (x * x), -2.0 * y / x]
            }
            Surface::ShiftedPhase {
                params,
                kappa,
                xi_star,
                eta_star,
            } => {
                let a = params.alpha();
                let b = x / kappa + xi_star;
                let d = y - eta_star;
                [
                    ((a + 1.0) * b.abs().powf(a) + d * d / (b * b)) / kappa,
                    -2.0 * d / b,
                ]
            }
            Surface::Sheared { base, a } => {
                let [gx, gy] = base.gradient([x, y - a * x]);
                [gx - a * gy, gy]
            }
            Surface::PlusAffine { base, b, c, .. } => {
                let [gx, gy] = base.gradient(w);
                [gx + b, gy + c]
            }
        }
    }

    pub fn hessian(&self, w: Vec2) -> [[f64; 2]; 2] {
        let [x, y] = w;
        match self {
            Surface::Affine { .. } => [[0.0, 0.0], [0.0, 0.0]],
            Surface::Quadratic { hxx, hxy, hyy } => [[*hxx, *hxy], [*hxy, *hyy]],
            Surface::HyperbolicParaboloid => [[2.0, 0.0], [0.0, -2.0]],
            Surface::Elliptic => [[2.0, 0.0], [0.0, 2.0]],
            Surface::FkpPhase(p) => {
                let a = p.alpha();
                let xx = (a + 1.0) * a * spow(x, a - 1.0) - 2.0 * y * y / (x * x * x);
                let xy = 2.0 * y / (x * x);
                [[xx, xy], [xy, -2.0 / x]]
            }
            Surface::ShiftedPhase {
                params,
                kappa,
                xi_star,
                eta_star,
            } => {
                let a = params.alpha();
                let b = x / kappa + xi_star;
                let d = y - eta_star;
                let xx = ((a + 1.0) * a * spow(b, a - 1.0) - 2.0 * d * d / (b * b * b))
                    / (kappa * kappa);
                let xy = 2.0 * d / (b * b * kappa);
                [[xx, xy], [xy, -2.0 / b]]
            }
            Surface::Sheared { base, a } => {
                let [[hxx, hxy], [_, hyy]] = base.hessian([x, y - a * x]);
                let xy = hxy - a * hyy;
                [[hxx - 2.0 * a * hxy + a * a * hyy, xy], [xy, hyy]]
            }
            Surface::PlusAffine { base, .. } => base.hessian(w),
        }
    }

    /// `true` when the Hessian vanishes identically.
    pub fn is_affine(&self) -> bool {
        match self {
            Surface::Affine { .. } => true,
            Surface::Quadratic { hxx, hxy, hyy } => *hxx == 0.0 && *hxy == 0.0 && *hyy == 0.0,
            Surface::Sheared { base, .. } | Surface::PlusAffine { base, .. } => base.is_affine(),
            _ => false,
        }
    }

    /// Largest closed rectangle `[ξ₀, ξ₁] × [η₀, η₁]` on which the surface is
    /// considered; `None` means unrestricted.
    pub fn validity(&self) -> Option<[Vec2; 2]> {
        match self {
            Surface::FkpPhase(_) => Some([[0.5, 2.0], [-2.0, 2.0]]),
            _ => None,
        }
    }

    /// Whether `w` lies where the surface is smooth.
    pub fn is_regular_at(&self, w: Vec2) -> bool {
        match self {
            Surface::FkpPhase(_) => w[0] != 0.0,
            Surface::ShiftedPhase { kappa, xi_star, .. } => w[0] / kappa + xi_star != 0.0,
            Surface::Sheared { base, a } => base.is_regular_at([w[0], w[1] - a * w[0]]),
            Surface::PlusAffine { base, .. } => base.is_regular_at(w),
            _ => true,
        }
    }
}
