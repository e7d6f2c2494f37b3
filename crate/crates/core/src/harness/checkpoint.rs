use std::path::Path;

use num_complex::Complex64;

use super::output::write_atomic;
use crate::spectral::{Grid, Spectrum};
use crate::{Error, Result};

pub const MAGIC: &[u8; 4] = b"FKP2";
pub const VERSION: u32 = 1;
/// Magic, version, `nx`, `ny`, then `lx`, `alpha`, `t`.
pub const HEADER_LEN: usize = 4 + 3 * 4 + 3 * 8;

/// Decoded checkpoint contents.
#[derive(Debug, Clone, PartialEq)]
pub struct Checkpoint {
    pub t: f64,
    pub alpha: f64,
    pub spectrum: Spectrum,
}

/// Header then `nx·ny` pairs `(re, im)`, all little-endian. Rows run over
/// `kx = −nx/2 .. nx/2 − 1`, and within a row `η = −ny/2 .. ny/2 − 1`.
pub fn encode_checkpoint(t: f64, alpha: f64, spectrum: &Spectrum) -> Vec<u8> {
    let g = spectrum.grid();
    let mut out = Vec::with_capacity(HEADER_LEN + 16 * g.len());
    out.extend_from_slice(MAGIC);
    out.extend_from_slice(&VERSION.to_le_bytes());
    out.extend_from_slice(&(g.nx() as u32).to_le_bytes());
    out.extend_from_slice(&(g.ny() as u32).to_le_bytes());
    for v in [g.lx(), alpha, t] {
        out.extend_from_slice(&v.to_le_bytes());
    }
    for (i, j) in body_order(g) {
        let c = spectrum.coeffs()[g.flat(i, j)];
        out.extend_from_slice(&c.re.to_le_bytes());
        out.extend_from_slice(&c.im.to_le_bytes());
    }
    out
}

fn body_order(g: &Grid) -> impl Iterator<Item = (usize, usize)> + '_ {
    let (nx, ny) = (g.nx() as i64, g.ny() as i64);
    (-nx / 2..nx / 2).flat_map(move |k| {
        (-ny / 2..ny / 2).map(move |e| {
            (
                g.index_of_kx(k).expect("kx in range"),
                g.index_of_eta(e).expect("eta in range"),
            )
        })
    })
}

fn u32_at(b: &[u8], at: usize) -> u32 {
    u32::from_le_bytes(b[at..at + 4].try_into().unwrap())
}

fn f64_at(b: &[u8], at: usize) -> f64 {
    f64::from_le_bytes(b[at..at + 8].try_into().unwrap())
}

pub fn decode_checkpoint(bytes: &[u8]) -> Result<Checkpoint> {
    if bytes.len() < 4 || &bytes[..4] != MAGIC {
        return Err(Error::Format("bad magic: not an FKP2 checkpoint".into()));
    }
    if bytes.len() < HEADER_LEN {
        return Err(Error::Format(format!(
            "truncated checkpoint: {} bytes is shorter than the header",
            bytes.len()
        )));
    }
    let version = u32_at(bytes, 4);
    if version != VERSION {
        return Err(Error::Format(format!(
            "checkpoint version mismatch: found {version}, expected {VERSION}"
        )));
    }
    let (nx, ny) = (u32_at(bytes, 8) as usize, u32_at(bytes, 12) as usize);
    let (lx, alpha, t) = (f64_at(bytes, 16), f64_at(bytes, 24), f64_at(bytes, 32));
    let grid = Grid::new(nx, ny, lx)?;
    let expected = HEADER_LEN + 16 * grid.len();
    if bytes.len() != expected {
        return Err(Error::Format(format!(
            "truncated checkpoint: header implies {expected} bytes, found {}",
            bytes.len()
        )));
    }
    let mut coeffs = vec![Complex64::new(0.0, 0.0); grid.len()];
    for (n, (i, j)) in body_order(&grid).enumerate() {
        let at = HEADER_LEN + 16 * n;
        coeffs[grid.flat(i, j)] = Complex64::new(f64_at(bytes, at), f64_at(bytes, at + 8));
    }
    Ok(Checkpoint {
        t,
        alpha,
        spectrum: Spectrum::new(grid, coeffs)?,
    })
}

/// Writes atomically through a temporary file in the same directory.
pub fn save_checkpoint(path: &Path, t: f64, alpha: f64, spectrum: &Spectrum) -> Result<()> {
    write_atomic(path, &encode_checkpoint(t, alpha, spectrum))
}

pub fn load_checkpoint(path: &Path) -> Result<Checkpoint> {
    decode_checkpoint(&std::fs::read(path)?)
}

/// [`load_checkpoint`] that also requires the stored grid to equal `grid`.
pub fn load_checkpoint_on(path: &Path, grid: &Grid) -> Result<Checkpoint> {
    let c = load_checkpoint(path)?;
    if c.spectrum.grid() != grid {
        return Err(Error::GridMismatch);
    }
    Ok(c)
}
