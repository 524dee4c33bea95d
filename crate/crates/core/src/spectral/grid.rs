use std::f64::consts::PI;

use crate::{Error, Point, Result};

/// Periodic box `[−L, L)^d` sampled with `N` points per axis.
///
/// Sample `j` along an axis sits at `x_j = −L + j·Δx`, `Δx = 2L/N`. Fourier
/// index `i` maps to the signed mode `n = i` for `i ≤ N/2` and `n = i − N`
/// otherwise, with wavenumber `k = π n / L`. The Nyquist mode `n = N/2` is
/// kept with a positive sign and treated as `cos(k_N x)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoxGrid {
    dim: usize,
    half_length: f64,
    points: usize,
}

impl BoxGrid {
    pub fn new(dim: usize, half_length: f64, points: usize) -> Result<Self> {
        if !(1..=3).contains(&dim) {
            return Err(Error::Dimension(format!("dimension {dim} not in 1..=3")));
        }
        if !(half_length.is_finite() && half_length > 0.0) {
            return Err(Error::Dimension(format!("half-length {half_length} must be positive")));
        }
        if points < 8 || !points.is_power_of_two() {
            return Err(Error::Dimension(format!("points per axis {points} must be a power of two >= 8")));
        }
        Ok(Self { dim, half_length, points })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn half_length(&self) -> f64 {
        self.half_length
    }

    pub fn points(&self) -> usize {
        self.points
    }

    /// Total number of samples, `N^d`.
    pub fn len(&self) -> usize {
        self.points.pow(self.dim as u32)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn spacing(&self) -> f64 {
        2.0 * self.half_length / self.points as f64
    }

    pub fn cell_volume(&self) -> f64 {
        self.spacing().powi(self.dim as i32)
    }

    pub fn volume(&self) -> f64 {
        (2.0 * self.half_length).powi(self.dim as i32)
    }

    /// Coordinate of sample `j` along any axis.
    pub fn coordinate(&self, j: usize) -> f64 {
        -self.half_length + j as f64 * self.spacing()
    }

    /// Signed Fourier mode of index `i`.
    pub fn mode(&self, i: usize) -> i64 {
        let n = self.points;
        if i <= n / 2 {
            i as i64
        } else {
            i as i64 - n as i64
        }
    }

    pub fn is_nyquist(&self, i: usize) -> bool {
        i == self.points / 2
    }

    pub fn wavenumber(&self, i: usize) -> f64 {
        PI * self.mode(i) as f64 / self.half_length
    }

    /// Fundamental wavenumber `π/L`.
    pub fn fundamental(&self) -> f64 {
        PI / self.half_length
    }

    pub fn nyquist_wavenumber(&self) -> f64 {
        PI * (self.points / 2) as f64 / self.half_length
    }

    /// Largest `|k|` present on the grid.
    pub fn max_wavenumber(&self) -> f64 {
        self.nyquist_wavenumber() * (self.dim as f64).sqrt()
    }

    /// Per-axis indices of a flat (row-major, axis 0 slowest) index.
    pub fn unravel(&self, flat: usize) -> [usize; 3] {
        let n = self.points;
        let mut idx = [0usize; 3];
        let mut rem = flat;
        for a in (0..self.dim).rev() {
            idx[a] = rem % n;
            rem /= n;
        }
        idx
    }

    pub fn ravel(&self, idx: [usize; 3]) -> usize {
        let mut flat = 0;
        for &i in idx.iter().take(self.dim) {
            flat = flat * self.points + i;
        }
        flat
    }

    /// Physical position of a flat sample index.
    pub fn position(&self, flat: usize) -> Point {
        let idx = self.unravel(flat);
        let mut x = [0.0; 3];
        for a in 0..self.dim {
            x[a] = self.coordinate(idx[a]);
        }
        x
    }

    /// Wavevector of a flat Fourier index.
    pub fn wavevector(&self, flat: usize) -> Point {
        let idx = self.unravel(flat);
        let mut k = [0.0; 3];
        for a in 0..self.dim {
            k[a] = self.wavenumber(idx[a]);
        }
        k
    }

    /// Index of the mode `−k` for a flat Fourier index (Nyquist maps to itself).
    pub fn negated(&self, flat: usize) -> usize {
        let n = self.points;
        let mut idx = self.unravel(flat);
        for i in idx.iter_mut().take(self.dim) {
            *i = (n - *i) % n;
        }
        self.ravel(idx)
    }

    /// Axes along which a flat Fourier index sits on the Nyquist mode.
    pub fn nyquist_axes(&self, flat: usize) -> [bool; 3] {
        let idx = self.unravel(flat);
        let mut out = [false; 3];
        for a in 0..self.dim {
            out[a] = self.is_nyquist(idx[a]);
        }
        out
    }

    /// Wraps a coordinate into `[−L, L)`.
    pub fn wrap(&self, x: f64) -> f64 {
        let period = 2.0 * self.half_length;
        (x + self.half_length).rem_euclid(period) - self.half_length
    }
}

/// Euclidean length of the first `dim` components.
pub fn norm3(p: &Point) -> f64 {
    (p[0] * p[0] + p[1] * p[1] + p[2] * p[2]).sqrt()
}

pub fn dot3(a: &Point, b: &Point) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

/// Japanese bracket `⟨k⟩ = √(1 + |k|²)`.
pub fn japanese(k: &Point) -> f64 {
    (1.0 + dot3(k, k)).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_sizes() {
        assert!(BoxGrid::new(1, 1.0, 6).is_err());
        assert!(BoxGrid::new(1, 1.0, 12).is_err());
        assert!(BoxGrid::new(4, 1.0, 16).is_err());
        assert!(BoxGrid::new(2, 0.0, 16).is_err());
        assert!(BoxGrid::new(3, 2.0, 8).is_ok());
    }

    #[test]
    fn wavenumbers_closed_under_negation() {
        let g = BoxGrid::new(2, 3.0, 16).unwrap();
        for flat in 0..g.len() {
            let k = g.wavevector(flat);
            let kn = g.wavevector(g.negated(flat));
            let nyq = g.nyquist_axes(flat);
            for a in 0..2 {
                if nyq[a] {
                    assert_eq!(k[a], kn[a]);
                } else {
                    assert_eq!(k[a], -kn[a]);
                }
            }
        }
    }

    #[test]
    fn ravel_round_trip() {
        let g = BoxGrid::new(3, 1.0, 8).unwrap();
        for flat in 0..g.len() {
            assert_eq!(g.ravel(g.unravel(flat)), flat);
        }
    }

    #[test]
    fn wrap_into_box() {
        let g = BoxGrid::new(1, 2.0, 8).unwrap();
        assert!((g.wrap(2.5) - (-1.5)).abs() < 1e-15);
        assert!((g.wrap(-2.5) - 1.5).abs() < 1e-15);
        assert_eq!(g.wrap(-2.0), -2.0);
    }
}
