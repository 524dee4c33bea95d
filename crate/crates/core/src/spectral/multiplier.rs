//! Fourier multipliers `σ(i∂)` on a [`SpectralField`].

use num_complex::Complex64;

use super::{BoxGrid, SpectralField};
use crate::{Error, Point, Result};

/// Symbol value at a grid mode, symmetrised over every Nyquist axis.
///
/// A Nyquist coefficient stands for `cos(k_N x)`; on the grid the action of
/// `σ` on it is the average of `σ` over the sign flips of the Nyquist
/// components.
pub fn grid_symbol<F>(grid: &BoxGrid, flat: usize, sigma: &F) -> Complex64
where
    F: Fn(&Point) -> Complex64,
{
    let k = grid.wavevector(flat);
    let nyq = grid.nyquist_axes(flat);
    let axes: Vec<usize> = (0..grid.dim()).filter(|&a| nyq[a]).collect();
    if axes.is_empty() {
        return sigma(&k);
    }
    let mut total = Complex64::new(0.0, 0.0);
    let count = 1usize << axes.len();
    for mask in 0..count {
        let mut kk = k;
        for (b, &a) in axes.iter().enumerate() {
            if mask & (1 << b) != 0 {
                kk[a] = -kk[a];
            }
        }
        total += sigma(&kk);
    }
    total / count as f64
}

/// Applies the same scalar symbol to every component.
pub fn apply_multiplier<F>(field: &SpectralField, sigma: F) -> Result<SpectralField>
where
    F: Fn(&Point) -> Complex64,
{
    let grid = *field.grid();
    let mut symbol = Vec::with_capacity(grid.len());
    for flat in 0..grid.len() {
        let s = grid_symbol(&grid, flat, &sigma);
        if !(s.re.is_finite() && s.im.is_finite()) {
            return Err(Error::SingularSymbol { k: grid.wavevector(flat) });
        }
        symbol.push(s);
    }
    Ok(apply_table(field, &symbol))
}

/// Multiplies every component by a precomputed table of symbol values.
pub fn apply_table(field: &SpectralField, symbol: &[Complex64]) -> SpectralField {
    let components = field.components().iter().map(|c| c.iter().zip(symbol).map(|(z, s)| z * s).collect()).collect();
    SpectralField::from_coefficients(*field.grid(), components).expect("same grid")
}

/// Symbol table of `ik_axis` (zero on the Nyquist mode of that axis).
pub fn derivative_table(grid: &BoxGrid, axis: usize) -> Vec<Complex64> {
    (0..grid.len())
        .map(|flat| {
            if grid.nyquist_axes(flat)[axis] {
                Complex64::new(0.0, 0.0)
            } else {
                Complex64::new(0.0, grid.wavevector(flat)[axis])
            }
        })
        .collect()
}

/// `∂_axis` of every component.
pub fn partial(field: &SpectralField, axis: usize) -> SpectralField {
    apply_table(field, &derivative_table(field.grid(), axis))
}

/// Mixed derivative `∂^β` with multi-index `beta`.
pub fn partial_multi(field: &SpectralField, beta: [u32; 3]) -> SpectralField {
    let mut out = field.clone();
    for (axis, &order) in beta.iter().enumerate().take(field.grid().dim()) {
        for _ in 0..order {
            out = partial(&out, axis);
        }
    }
    out
}

/// Gradient of a scalar field as a `d`-component field.
pub fn gradient(field: &SpectralField) -> Result<SpectralField> {
    if field.num_components() != 1 {
        return Err(Error::Dimension("gradient needs a scalar field".into()));
    }
    let grid = *field.grid();
    let components = (0..grid.dim()).map(|a| partial(field, a).into_components().remove(0)).collect();
    SpectralField::from_coefficients(grid, components)
}

/// Divergence of a `d`-component field.
pub fn divergence(field: &SpectralField) -> Result<SpectralField> {
    let grid = *field.grid();
    if field.num_components() != grid.dim() {
        return Err(Error::Dimension("divergence needs a d-component field".into()));
    }
    let mut out = vec![Complex64::new(0.0, 0.0); grid.len()];
    for a in 0..grid.dim() {
        let t = derivative_table(&grid, a);
        for (o, (z, s)) in out.iter_mut().zip(field.component(a).iter().zip(&t)) {
            *o += z * s;
        }
    }
    SpectralField::from_coefficients(grid, vec![out])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::japanese;
    use std::f64::consts::PI;

    #[test]
    fn identity_symbol() {
        let g = BoxGrid::new(1, 3.0, 16).unwrap();
        let f = SpectralField::sample(g, |x| (x[0] * 0.7).sin() + 0.2);
        let h = apply_multiplier(&f, |_| Complex64::new(1.0, 0.0)).unwrap();
        assert_eq!(f, h);
    }

    #[test]
    fn gradient_of_sine() {
        let g = BoxGrid::new(1, 2.5, 32).unwrap();
        let l = g.half_length();
        let f = SpectralField::sample(g, |x| (PI * x[0] / l).sin());
        let df = apply_multiplier(&f, |k| Complex64::new(0.0, k[0])).unwrap().to_real_scalar().unwrap();
        for j in 0..32 {
            let x = g.coordinate(j);
            assert!((df[j] - PI / l * (PI * x / l).cos()).abs() < 1e-13);
        }
    }

    #[test]
    fn non_finite_symbol_rejected() {
        let g = BoxGrid::new(1, 1.0, 8).unwrap();
        let f = SpectralField::zeros(g, 1);
        let r = apply_multiplier(&f, |k| Complex64::new(1.0 / k[0], 0.0));
        assert!(matches!(r, Err(Error::SingularSymbol { .. })));
    }

    #[test]
    fn bessel_kernel_matches_dense_matrix() {
        // dense oracle: the multiplier as an N x N matrix acting on samples
        let n = 32;
        let g = BoxGrid::new(1, 4.0, n).unwrap();
        let mut delta = vec![0.0; n];
        delta[n / 2] = 1.0 / g.spacing();
        let f = SpectralField::from_real(g, &delta).unwrap();
        let out = apply_multiplier(&f, |k| Complex64::new(1.0 / japanese(k), 0.0)).unwrap().to_real_scalar().unwrap();
        let l = g.half_length();
        for (i, value) in out.iter().enumerate() {
            let xi = g.coordinate(i);
            let mut acc = 0.0;
            for (j, dj) in delta.iter().enumerate() {
                let xj = g.coordinate(j);
                let mut kernel = 0.0;
                for m in 0..n {
                    let mode = if m <= n / 2 { m as f64 } else { m as f64 - n as f64 };
                    let k = PI * mode / l;
                    let w = 1.0 / (1.0 + k * k).sqrt();
                    kernel += w * (k * (xi - xj)).cos() / n as f64;
                }
                acc += kernel * dj;
            }
            assert!((value - acc).abs() < 1e-12, "{i}: {value} vs {acc}");
        }
    }

    #[test]
    fn gradient_divergence_is_laplacian() {
        let g = BoxGrid::new(2, PI, 16).unwrap();
        let f = SpectralField::sample(g, |x| (x[0]).sin() * (2.0 * x[1]).cos());
        let lap = divergence(&gradient(&f).unwrap()).unwrap().to_real_scalar().unwrap();
        let orig = f.to_real_scalar().unwrap();
        for (a, b) in lap.iter().zip(&orig) {
            assert!((a + 5.0 * b).abs() < 1e-12);
        }
    }
}
