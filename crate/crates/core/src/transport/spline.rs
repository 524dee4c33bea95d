//! Periodic tensor cubic B-spline interpolation on a 1-D phase-space lattice.
//!
//! The interpolant reproduces the lattice values exactly; its undershoot
//! below zero is bounded by the Gibbs-type overshoot of cubic splines,
//! roughly 3.5% of the largest jump in the data.

use num_complex::Complex64;

use crate::spectral::{fft, BoxGrid};
use crate::{Error, Result};

#[derive(Debug, Clone)]
pub struct PeriodicSpline2 {
    x: BoxGrid,
    v: BoxGrid,
    coeffs: Vec<f64>,
}

fn prefilter_rows(data: &mut [f64], grid: &BoxGrid) {
    let n = grid.points();
    for row in data.chunks_mut(n) {
        let mut c = fft::forward_real(grid, row);
        for (i, z) in c.iter_mut().enumerate() {
            let theta = 2.0 * std::f64::consts::PI * grid.mode(i) as f64 / n as f64;
            *z /= Complex64::new((4.0 + 2.0 * theta.cos()) / 6.0, 0.0);
        }
        row.copy_from_slice(&fft::inverse_real(grid, &c));
    }
}

fn transpose(data: &[f64], rows: usize, cols: usize) -> Vec<f64> {
    let mut out = vec![0.0; data.len()];
    for r in 0..rows {
        for c in 0..cols {
            out[c * rows + r] = data[r * cols + c];
        }
    }
    out
}

fn weights(t: f64) -> [f64; 4] {
    let t2 = t * t;
    let t3 = t2 * t;
    [
        (1.0 - t) * (1.0 - t) * (1.0 - t) / 6.0,
        (3.0 * t3 - 6.0 * t2 + 4.0) / 6.0,
        (-3.0 * t3 + 3.0 * t2 + 3.0 * t + 1.0) / 6.0,
        t3 / 6.0,
    ]
}

impl PeriodicSpline2 {
    /// `values` laid out `[iv][ix]` on 1-D grids `x` and `v`.
    pub fn new(x: BoxGrid, v: BoxGrid, values: &[f64]) -> Result<Self> {
        if x.dim() != 1 || v.dim() != 1 {
            return Err(Error::Dimension("spline lattice is 1-D in x and v".into()));
        }
        let (nx, nv) = (x.points(), v.points());
        if values.len() != nx * nv {
            return Err(Error::Dimension(format!("lattice has {} values, expected {}", values.len(), nx * nv)));
        }
        let mut c = values.to_vec();
        prefilter_rows(&mut c, &x);
        let mut t = transpose(&c, nv, nx);
        prefilter_rows(&mut t, &v);
        Ok(Self { x, v, coeffs: transpose(&t, nx, nv) })
    }

    pub fn eval(&self, x: f64, v: f64) -> f64 {
        let (nx, nv) = (self.x.points() as i64, self.v.points() as i64);
        let xi = (x + self.x.half_length()) / self.x.spacing();
        let vi = (v + self.v.half_length()) / self.v.spacing();
        let (ix, iv) = (xi.floor(), vi.floor());
        let (wx, wv) = (weights(xi - ix), weights(vi - iv));
        let (ix, iv) = (ix as i64, iv as i64);
        let mut acc = 0.0;
        for (b, wb) in wv.iter().enumerate() {
            let row = (iv - 1 + b as i64).rem_euclid(nv) as usize;
            let base = row * nx as usize;
            let mut inner = 0.0;
            for (a, wa) in wx.iter().enumerate() {
                let col = (ix - 1 + a as i64).rem_euclid(nx) as usize;
                inner += wa * self.coeffs[base + col];
            }
            acc += wb * inner;
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn interpolates_nodes_and_smooth_data() {
        let x = BoxGrid::new(1, 3.0, 64).unwrap();
        let v = BoxGrid::new(1, 2.0, 32).unwrap();
        let f = |a: f64, b: f64| (-(a * a) - 2.0 * b * b).exp();
        let values: Vec<f64> = (0..32)
            .flat_map(|j| (0..64).map(move |i| (i, j)))
            .map(|(i, j)| f(x.coordinate(i), v.coordinate(j)))
            .collect();
        let s = PeriodicSpline2::new(x, v, &values).unwrap();
        assert!((s.eval(x.coordinate(10), v.coordinate(7)) - values[7 * 64 + 10]).abs() < 1e-12);
        let err = |h: f64| {
            let mut m: f64 = 0.0;
            for k in 0..100 {
                let a = -1.5 + 0.0301 * k as f64;
                let b = 0.37 - 0.0093 * k as f64;
                m = m.max((s.eval(a, b) - f(a, b)).abs());
            }
            m * h
        };
        assert!(err(1.0) < 2e-4);
    }
}
