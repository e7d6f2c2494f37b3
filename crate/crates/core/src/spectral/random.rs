use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{norm_hs, Grid, Spectrum};

/// Random real-valued spectrum with Gaussian-decaying amplitudes
/// `exp(−(ξ/ξ_c)² − (η/η_c)²)`, supported on `0 < |ξ| ≤ 3ξ_c`, `|η| ≤ 3η_c`,
/// rescaled to L² norm `norm`. Satisfies the constraint projection.
pub fn random_smooth(grid: &Grid, seed: u64, xi_c: f64, eta_c: f64, norm: f64) -> Spectrum {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut s = Spectrum::zeros(*grid);
    let kmax = ((3.0 * xi_c / grid.dxi()).floor() as i64).min(grid.nx() as i64 / 2 - 1);
    let emax = ((3.0 * eta_c).floor() as i64).min(grid.ny() as i64 / 2 - 1);
    for k in 1..=kmax {
        let xi = k as f64 * grid.dxi();
        for eta in -emax..=emax {
            let amp = (-(xi / xi_c).powi(2) - (eta as f64 / eta_c).powi(2)).exp();
            let c = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)) * amp;
            s.set_real_mode(k, eta, c).expect("mode on lattice");
        }
    }
    let n = norm_hs(&s, 0.0, 0.0);
    if n > 0.0 {
        s.scale(norm / n)
    } else {
        s
    }
}
