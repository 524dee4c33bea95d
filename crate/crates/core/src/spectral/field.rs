use num_complex::Complex64;

use super::{fft, BoxGrid};
use crate::{Error, Point, Result};

/// Fourier coefficients of an `m`-component field on a periodic box.
///
/// Coefficients are normalised so that `f(x) = Σ_k ĉ_k e^{ik·x}`; the
/// physical `L²` norm is therefore `√(vol · Σ |ĉ_k|²)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralField {
    grid: BoxGrid,
    components: Vec<Vec<Complex64>>,
}

impl SpectralField {
    pub fn zeros(grid: BoxGrid, components: usize) -> Self {
        Self { grid, components: vec![vec![Complex64::new(0.0, 0.0); grid.len()]; components] }
    }

    pub fn from_coefficients(grid: BoxGrid, components: Vec<Vec<Complex64>>) -> Result<Self> {
        if components.is_empty() {
            return Err(Error::Dimension("field needs at least one component".into()));
        }
        for c in &components {
            if c.len() != grid.len() {
                return Err(Error::Dimension(format!(
                    "coefficient array of length {} on a grid of {} points",
                    c.len(),
                    grid.len()
                )));
            }
        }
        Ok(Self { grid, components })
    }

    /// Scalar field from real samples.
    pub fn from_real(grid: BoxGrid, samples: &[f64]) -> Result<Self> {
        Self::from_real_components(grid, &[samples])
    }

    pub fn from_real_components(grid: BoxGrid, samples: &[&[f64]]) -> Result<Self> {
        let mut components = Vec::with_capacity(samples.len());
        for s in samples {
            if s.len() != grid.len() {
                return Err(Error::Dimension(format!(
                    "sample array of length {} on a grid of {} points",
                    s.len(),
                    grid.len()
                )));
            }
            components.push(fft::forward_real(&grid, s));
        }
        let field = Self::from_coefficients(grid, components)?;
        debug_assert!(field.hermitian_defect() < 1e-10);
        Ok(field)
    }

    pub fn from_complex(grid: BoxGrid, samples: &[Complex64]) -> Result<Self> {
        if samples.len() != grid.len() {
            return Err(Error::Dimension(format!(
                "sample array of length {} on a grid of {} points",
                samples.len(),
                grid.len()
            )));
        }
        Self::from_coefficients(grid, vec![fft::forward(&grid, samples)])
    }

    /// Samples a real scalar function at the grid points.
    pub fn sample<F: Fn(&Point) -> f64>(grid: BoxGrid, f: F) -> Self {
        let values: Vec<f64> = (0..grid.len()).map(|i| f(&grid.position(i))).collect();
        Self::from_real(grid, &values).expect("sample length matches grid")
    }

    pub fn grid(&self) -> &BoxGrid {
        &self.grid
    }

    pub fn num_components(&self) -> usize {
        self.components.len()
    }

    pub fn component(&self, c: usize) -> &[Complex64] {
        &self.components[c]
    }

    pub fn component_mut(&mut self, c: usize) -> &mut [Complex64] {
        &mut self.components[c]
    }

    pub fn components(&self) -> &[Vec<Complex64>] {
        &self.components
    }

    pub fn into_components(self) -> Vec<Vec<Complex64>> {
        self.components
    }

    /// Scalar field holding component `c`.
    pub fn select(&self, c: usize) -> SpectralField {
        Self { grid: self.grid, components: vec![self.components[c].clone()] }
    }

    /// Complex physical samples of every component.
    pub fn to_complex(&self) -> Vec<Vec<Complex64>> {
        self.components.iter().map(|c| fft::inverse(&self.grid, c)).collect()
    }

    /// Real physical samples; fails when the field carries a non-negligible
    /// imaginary part.
    pub fn to_real(&self) -> Result<Vec<Vec<f64>>> {
        let complex = self.to_complex();
        let scale = complex.iter().flatten().fold(0.0_f64, |m, z| m.max(z.norm()));
        let imag = complex.iter().flatten().fold(0.0_f64, |m, z| m.max(z.im.abs()));
        if imag > 1e-9 * scale.max(f64::MIN_POSITIVE) {
            return Err(Error::Domain(format!("field is not real: max imaginary part {imag:e} vs scale {scale:e}")));
        }
        Ok(complex.into_iter().map(|c| c.into_iter().map(|z| z.re).collect()).collect())
    }

    /// Real samples of a scalar field.
    pub fn to_real_scalar(&self) -> Result<Vec<f64>> {
        if self.num_components() != 1 {
            return Err(Error::Dimension(format!(
                "expected a scalar field, found {} components",
                self.num_components()
            )));
        }
        Ok(self.to_real()?.remove(0))
    }

    /// Pointwise Euclidean magnitude `|f(x)|` over all components.
    pub fn magnitude_samples(&self) -> Vec<f64> {
        let samples = self.to_complex();
        (0..self.grid.len()).map(|i| samples.iter().map(|c| c[i].norm_sqr()).sum::<f64>().sqrt()).collect()
    }

    /// Largest violation of `ĉ(−k) = conj ĉ(k)`, relative to the largest coefficient.
    pub fn hermitian_defect(&self) -> f64 {
        let mut worst = 0.0_f64;
        let mut scale = 0.0_f64;
        for c in &self.components {
            for flat in 0..self.grid.len() {
                let neg = self.grid.negated(flat);
                worst = worst.max((c[neg] - c[flat].conj()).norm());
                scale = scale.max(c[flat].norm());
            }
        }
        if scale == 0.0 {
            0.0
        } else {
            worst / scale
        }
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermitian_defect() <= tol
    }

    fn check_compatible(&self, other: &SpectralField) -> Result<()> {
        if self.grid != other.grid || self.num_components() != other.num_components() {
            return Err(Error::Dimension(format!(
                "incompatible fields: {:?}x{} vs {:?}x{}",
                self.grid,
                self.num_components(),
                other.grid,
                other.num_components()
            )));
        }
        Ok(())
    }

    /// `self + c·other`.
    pub fn axpy(&self, c: Complex64, other: &SpectralField) -> Result<SpectralField> {
        self.check_compatible(other)?;
        let components = self
            .components
            .iter()
            .zip(&other.components)
            .map(|(a, b)| a.iter().zip(b).map(|(x, y)| x + c * y).collect())
            .collect();
        Ok(Self { grid: self.grid, components })
    }

    pub fn add(&self, other: &SpectralField) -> Result<SpectralField> {
        self.axpy(Complex64::new(1.0, 0.0), other)
    }

    pub fn sub(&self, other: &SpectralField) -> Result<SpectralField> {
        self.axpy(Complex64::new(-1.0, 0.0), other)
    }

    pub fn scaled(&self, c: Complex64) -> SpectralField {
        let components = self.components.iter().map(|a| a.iter().map(|x| x * c).collect()).collect();
        Self { grid: self.grid, components }
    }

    /// Coefficient-wise map with access to the wavevector.
    pub fn map_coefficients<F>(&self, f: F) -> SpectralField
    where
        F: Fn(usize, &Point, Complex64) -> Complex64,
    {
        let components = self
            .components
            .iter()
            .enumerate()
            .map(|(c, coeffs)| {
                coeffs.iter().enumerate().map(|(flat, &z)| f(c, &self.grid.wavevector(flat), z)).collect()
            })
            .collect();
        Self { grid: self.grid, components }
    }

    /// Coefficient `ℓ²` norm summed over components.
    pub fn coefficient_l2(&self) -> f64 {
        super::sum::neumaier(self.components.iter().flatten().map(|z| z.norm_sqr())).sqrt()
    }

    pub fn max_coefficient(&self) -> f64 {
        self.components.iter().flatten().fold(0.0_f64, |m, z| m.max(z.norm()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn grid1(n: usize) -> BoxGrid {
        BoxGrid::new(1, 2.0, n).unwrap()
    }

    #[test]
    fn constant_is_single_zero_mode() {
        let g = grid1(16);
        let f = SpectralField::from_real(g, &[3.5; 16]).unwrap();
        let c = f.component(0);
        assert!((c[0] - Complex64::new(3.5, 0.0)).norm() < 1e-14);
        for z in &c[1..] {
            assert!(z.norm() < 1e-14);
        }
    }

    #[test]
    fn cosine_has_two_equal_modes() {
        let g = grid1(32);
        let l = g.half_length();
        let f = SpectralField::sample(g, |x| (PI * x[0] / l).cos());
        let c = f.component(0);
        assert!((c[1] - Complex64::new(0.5, 0.0)).norm() < 1e-14);
        assert!((c[31] - Complex64::new(0.5, 0.0)).norm() < 1e-14);
        for (i, z) in c.iter().enumerate() {
            if i != 1 && i != 31 {
                assert!(z.norm() < 1e-14);
            }
        }
    }

    #[test]
    fn shape_mismatch_is_dimension_error() {
        let g = grid1(16);
        assert!(matches!(SpectralField::from_real(g, &[1.0; 15]), Err(Error::Dimension(_))));
    }

    #[test]
    fn complex_field_refuses_real_export() {
        let g = grid1(16);
        let l = g.half_length();
        let samples: Vec<Complex64> = (0..16).map(|j| Complex64::from_polar(1.0, PI * g.coordinate(j) / l)).collect();
        let f = SpectralField::from_complex(g, &samples).unwrap();
        assert!(f.to_real().is_err());
        assert!(!f.is_hermitian(1e-12));
    }

    #[test]
    fn round_trip_multi_dimensional() {
        let g = BoxGrid::new(3, 1.5, 8).unwrap();
        let values: Vec<f64> = (0..g.len()).map(|i| ((i * 7919) % 113) as f64 / 113.0).collect();
        let f = SpectralField::from_real(g, &values).unwrap();
        let back = f.to_real_scalar().unwrap();
        for (a, b) in values.iter().zip(&back) {
            assert!((a - b).abs() < 1e-13);
        }
    }
}
