//! Multi-dimensional FFT on a [`BoxGrid`] with the box-centred phase
//! convention `f(x) = Σ_k ĉ_k e^{ik·x}`.

use std::cell::RefCell;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use super::BoxGrid;

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

fn plan(n: usize, inverse: bool) -> Arc<dyn Fft<f64>> {
    PLANNER.with(|p| {
        let mut p = p.borrow_mut();
        if inverse {
            p.plan_fft_inverse(n)
        } else {
            p.plan_fft_forward(n)
        }
    })
}

/// Applies the unnormalised 1-D transform along every axis.
fn transform_axes(data: &mut [Complex64], grid: &BoxGrid, inverse: bool) {
    let n = grid.points();
    let d = grid.dim();
    let fft = plan(n, inverse);
    let mut scratch = vec![Complex64::new(0.0, 0.0); fft.get_inplace_scratch_len()];
    // last axis is contiguous
    fft.process_with_scratch(data, &mut scratch);
    if d == 1 {
        return;
    }
    let mut line = vec![Complex64::new(0.0, 0.0); n];
    for axis in 0..d - 1 {
        let stride = n.pow((d - 1 - axis) as u32);
        let block = stride * n;
        for base in (0..data.len()).step_by(block) {
            for offset in 0..stride {
                let start = base + offset;
                for (i, slot) in line.iter_mut().enumerate() {
                    *slot = data[start + i * stride];
                }
                fft.process_with_scratch(&mut line, &mut scratch);
                for (i, value) in line.iter().enumerate() {
                    data[start + i * stride] = *value;
                }
            }
        }
    }
}

/// `(−1)^{i_0 + … + i_{d−1}}`, the phase shift from sampling at `x_j = −L + jΔx`.
fn checkerboard(grid: &BoxGrid, flat: usize) -> f64 {
    let idx = grid.unravel(flat);
    let parity: usize = idx.iter().take(grid.dim()).sum();
    if parity.is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

/// Physical samples → Fourier coefficients.
pub fn forward(grid: &BoxGrid, samples: &[Complex64]) -> Vec<Complex64> {
    let mut data = samples.to_vec();
    transform_axes(&mut data, grid, false);
    let norm = 1.0 / grid.len() as f64;
    for (flat, c) in data.iter_mut().enumerate() {
        *c *= checkerboard(grid, flat) * norm;
    }
    data
}

/// Fourier coefficients → physical samples.
pub fn inverse(grid: &BoxGrid, coefficients: &[Complex64]) -> Vec<Complex64> {
    let mut data: Vec<Complex64> =
        coefficients.iter().enumerate().map(|(flat, c)| c * checkerboard(grid, flat)).collect();
    transform_axes(&mut data, grid, true);
    data
}

/// Forward transform of a real array.
pub fn forward_real(grid: &BoxGrid, samples: &[f64]) -> Vec<Complex64> {
    let data: Vec<Complex64> = samples.iter().map(|&x| Complex64::new(x, 0.0)).collect();
    forward(grid, &data)
}

/// Inverse transform keeping the real part.
pub fn inverse_real(grid: &BoxGrid, coefficients: &[Complex64]) -> Vec<f64> {
    inverse(grid, coefficients).into_iter().map(|c| c.re).collect()
}
