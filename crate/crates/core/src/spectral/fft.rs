//! Two-dimensional complex FFT on row-major `nx × ny` buffers.

use std::sync::{Arc, Mutex, OnceLock};

use num_complex::Complex64;
use rustfft::{Fft, FftDirection, FftPlanner};

use crate::par;

fn plan(n: usize, direction: FftDirection) -> Arc<dyn Fft<f64>> {
    static PLANNER: OnceLock<Mutex<FftPlanner<f64>>> = OnceLock::new();
    let planner = PLANNER.get_or_init(|| Mutex::new(FftPlanner::new()));
    let mut planner = planner.lock().unwrap_or_else(|e| e.into_inner());
    planner.plan_fft(n, direction)
}

fn transpose(src: &[Complex64], rows: usize, cols: usize) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); src.len()];
    par::for_each_chunk_mut(&mut out, rows, |c, dst| {
        for (r, d) in dst.iter_mut().enumerate() {
            *d = src[r * cols + c];
        }
    });
    out
}

fn rows_in_place(data: &mut [Complex64], n: usize, direction: FftDirection) {
    let fft = plan(n, direction);
    par::for_each_chunk_mut(data, n, |_, row| fft.process(row));
}

/// Unnormalized 2D transform. `Forward` uses `e^{-i k x}`.
pub(crate) fn fft2(data: &mut Vec<Complex64>, nx: usize, ny: usize, direction: FftDirection) {
    rows_in_place(data, ny, direction);
    let mut t = transpose(data, nx, ny);
    rows_in_place(&mut t, nx, direction);
    *data = transpose(&t, ny, nx);
}
