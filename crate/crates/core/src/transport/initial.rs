use crate::spectral::{BoxGrid, SpectralField};
use crate::Point;

/// Initial data family: `f₀ = ε₀ G_σ(x) b(|v|/R)`, `φ₀ = ε₀ c₀ G_{σ₀}(x)`,
/// `φ₁ = ε₀ c₁ G_{σ₁}(x)`, with `G_σ(x) = e^{−|x|²/(2σ²)}` and the smooth
/// compactly supported bump `b(r) = e^{1 − 1/(1 − r²)}` for `r < 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InitialData {
    pub dim: usize,
    pub epsilon0: f64,
    pub x_width: f64,
    pub v_radius: f64,
    pub phi0_scale: f64,
    pub phi0_width: f64,
    pub phi1_scale: f64,
    pub phi1_width: f64,
}

/// Gaussians are treated as supported within this many widths.
pub const GAUSSIAN_SUPPORT_WIDTHS: f64 = 6.0;

pub fn velocity_bump(r: f64) -> f64 {
    if r >= 1.0 {
        0.0
    } else {
        (1.0 - 1.0 / (1.0 - r * r)).exp()
    }
}

fn gaussian(x: &Point, dim: usize, width: f64) -> f64 {
    let r2: f64 = x.iter().take(dim).map(|c| c * c).sum();
    (-r2 / (2.0 * width * width)).exp()
}

impl InitialData {
    /// `f₀(x, v)`; `x` is used as given (callers wrap into the box).
    pub fn f0(&self, x: &Point, v: &Point) -> f64 {
        let r = v.iter().take(self.dim).map(|c| c * c).sum::<f64>().sqrt() / self.v_radius;
        if r >= 1.0 {
            return 0.0;
        }
        self.epsilon0 * gaussian(x, self.dim, self.x_width) * velocity_bump(r)
    }

    pub fn phi0(&self, x: &Point) -> f64 {
        self.epsilon0 * self.phi0_scale * gaussian(x, self.dim, self.phi0_width)
    }

    pub fn phi1(&self, x: &Point) -> f64 {
        self.epsilon0 * self.phi1_scale * gaussian(x, self.dim, self.phi1_width)
    }

    pub fn phi0_field(&self, grid: BoxGrid) -> SpectralField {
        SpectralField::sample(grid, |x| self.phi0(x))
    }

    pub fn phi1_field(&self, grid: BoxGrid) -> SpectralField {
        SpectralField::sample(grid, |x| self.phi1(x))
    }

    /// Radius in `x` outside which all data are negligible.
    pub fn support_radius(&self) -> f64 {
        let mut w = self.x_width;
        if self.phi0_scale != 0.0 {
            w = w.max(self.phi0_width);
        }
        if self.phi1_scale != 0.0 {
            w = w.max(self.phi1_width);
        }
        GAUSSIAN_SUPPORT_WIDTHS * w
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bump_is_smooth_and_compact() {
        assert_eq!(velocity_bump(0.0), 1.0);
        assert_eq!(velocity_bump(1.0), 0.0);
        assert!(velocity_bump(0.999) < 1e-200);
    }

    #[test]
    fn f0_vanishes_outside_velocity_support() {
        let d = InitialData {
            dim: 1,
            epsilon0: 1e-3,
            x_width: 1.0,
            v_radius: 1.0,
            phi0_scale: 1.0,
            phi0_width: 1.0,
            phi1_scale: 0.0,
            phi1_width: 1.0,
        };
        assert_eq!(d.f0(&[0.0; 3], &[1.0, 0.0, 0.0]), 0.0);
        assert!((d.f0(&[0.0; 3], &[0.0; 3]) - 1e-3).abs() < 1e-18);
        assert_eq!(d.support_radius(), 6.0);
    }
}
