use serde::{Deserialize, Serialize};

use super::{knapp_data, l4_norm, KnappSpec};
use crate::dynamics::DispersionParams;
use crate::spectral::{norm_hs, Spectrum};
use crate::{par, Error, Result};

/// Least-squares fit of `log ‖S_α(t) f_N‖_{L⁴} − log ‖f_N‖₂` against
/// `log N`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StrichartzFit {
    pub slope: f64,
    pub stderr: f64,
    pub intercept: f64,
    /// Root-mean-square residual of the fit in log space.
    pub residual: f64,
    /// `(N, ‖S f_N‖_{L⁴} / ‖f_N‖₂)`.
    pub points: Vec<(f64, f64)>,
}

pub fn strichartz_fit<G>(
    params: &DispersionParams,
    n_list: &[f64],
    t_samples: usize,
    generator: G,
) -> Result<StrichartzFit>
where
    G: Fn(f64) -> Result<Spectrum> + Sync + Send,
{
    let mut distinct = n_list.to_vec();
    distinct.sort_by(f64::total_cmp);
    distinct.dedup();
    if distinct.len() < 2 {
        return Err(Error::Precondition("fit needs at least two distinct N".into()));
    }
    let values = par::map(n_list, |&n| -> Result<(f64, f64)> {
        let f = generator(n)?;
        let l2 = norm_hs(&f, 0.0, 0.0);
        Ok((n, l4_norm(&f, params, t_samples)? / l2))
    });
    let points: Vec<(f64, f64)> = values.into_iter().collect::<Result<_>>()?;
    let xs: Vec<f64> = points.iter().map(|p| p.0.ln()).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.1.ln()).collect();
    let m = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / m;
    let my = ys.iter().sum::<f64>() / m;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let sse: f64 = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| (y - intercept - slope * x).powi(2))
        .sum();
    let stderr = if xs.len() > 2 {
        (sse / (m - 2.0) / sxx).sqrt()
    } else {
        0.0
    };
    Ok(StrichartzFit {
        slope,
        stderr,
        intercept,
        residual: (sse / m).sqrt(),
        points,
    })
}

/// Knapp caps on a fresh grid per `N` with fixed `x`-period `lx`.
pub fn knapp_generator(
    params: DispersionParams,
    a: f64,
    band: u32,
    lx: f64,
) -> impl Fn(f64) -> Result<Spectrum> + Sync + Send {
    move |n| {
        let spec = KnappSpec::new(n, a, band);
        let grid = spec.grid(&params, lx)?;
        knapp_data(&grid, &params, &spec)
    }
}
