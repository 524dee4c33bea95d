//! Off-grid evaluation of Fourier series.

use num_complex::Complex64;

use super::{BoxGrid, SpectralField};
use crate::Point;

/// Per-axis phase tables `e^{ik_n x_a}` (Nyquist column holds `cos(k_N x_a)`).
pub struct Phases {
    tables: Vec<Vec<Complex64>>,
}

impl Phases {
    pub fn new(grid: &BoxGrid, x: &Point) -> Self {
        let n = grid.points();
        let tables = (0..grid.dim())
            .map(|a| {
                let base = Complex64::from_polar(1.0, grid.fundamental() * x[a]);
                let mut t = vec![Complex64::new(0.0, 0.0); n];
                let mut z = Complex64::new(1.0, 0.0);
                for m in 0..=n / 2 {
                    t[m] = z;
                    if m > 0 && m < n / 2 {
                        t[n - m] = z.conj();
                    }
                    z *= base;
                    if m % 32 == 31 {
                        // re-anchor to bound recurrence drift
                        z = Complex64::from_polar(1.0, grid.fundamental() * x[a] * (m + 1) as f64);
                    }
                }
                t[n / 2] = Complex64::new(t[n / 2].re, 0.0);
                t
            })
            .collect();
        Self { tables }
    }

    /// `e^{ik·x}` for the mode with per-axis indices `idx`.
    pub fn phase(&self, idx: [usize; 3]) -> Complex64 {
        self.tables.iter().enumerate().fold(Complex64::new(1.0, 0.0), |acc, (a, t)| acc * t[idx[a]])
    }

    /// `Σ_k ĉ_k e^{ik·x}` for one coefficient array.
    pub fn sum(&self, coeffs: &[Complex64]) -> Complex64 {
        match self.tables.len() {
            1 => dot(coeffs, &self.tables[0]),
            2 => {
                let n = self.tables[0].len();
                let mut acc = Complex64::new(0.0, 0.0);
                for (i, row) in coeffs.chunks_exact(n).enumerate() {
                    acc += self.tables[0][i] * dot(row, &self.tables[1]);
                }
                acc
            }
            _ => {
                let n = self.tables[0].len();
                let mut acc = Complex64::new(0.0, 0.0);
                for (i, plane) in coeffs.chunks_exact(n * n).enumerate() {
                    let mut inner = Complex64::new(0.0, 0.0);
                    for (j, row) in plane.chunks_exact(n).enumerate() {
                        inner += self.tables[1][j] * dot(row, &self.tables[2]);
                    }
                    acc += self.tables[0][i] * inner;
                }
                acc
            }
        }
    }
}

fn dot(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    let mut re = 0.0;
    let mut im = 0.0;
    for (x, y) in a.iter().zip(b) {
        re += x.re * y.re - x.im * y.im;
        im += x.re * y.im + x.im * y.re;
    }
    Complex64::new(re, im)
}

/// Values of every component of `field` at `x`.
pub fn evaluate(field: &SpectralField, x: &Point) -> Vec<Complex64> {
    let phases = Phases::new(field.grid(), x);
    field.components().iter().map(|c| phases.sum(c)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matches_grid_samples() {
        for dim in 1..=3 {
            let g = BoxGrid::new(dim, 2.0, 8).unwrap();
            let f = SpectralField::sample(g, |x| (x[0] * 1.3).sin() + (x[1] - 0.2).cos() * x[2].exp().min(4.0) + 0.3);
            let samples = f.to_real_scalar().unwrap();
            for flat in (0..g.len()).step_by(7) {
                let v = evaluate(&f, &g.position(flat))[0];
                assert!((v.re - samples[flat]).abs() < 1e-12);
                assert!(v.im.abs() < 1e-12);
            }
        }
    }

    #[test]
    fn exact_for_band_limited_off_grid() {
        let g = BoxGrid::new(1, 3.0, 256).unwrap();
        let k = g.fundamental() * 5.0;
        let f = SpectralField::sample(g, |x| (k * x[0]).sin());
        for i in 0..50 {
            let x = -3.0 + 0.1234 * i as f64;
            let v = evaluate(&f, &[x, 0.0, 0.0])[0];
            assert!((v.re - (k * x).sin()).abs() < 1e-12);
        }
    }
}
