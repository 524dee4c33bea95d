use num_complex::Complex64;

use crate::spectral::japanese;
use crate::Point;

/// The two oscillation branches `±`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub const BOTH: [Sign; 2] = [Sign::Plus, Sign::Minus];

    pub fn value(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }

    pub fn index(self) -> usize {
        match self {
            Sign::Plus => 0,
            Sign::Minus => 1,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Sign::Plus => "plus",
            Sign::Minus => "minus",
        }
    }
}

/// `λ±(k) = ±i⟨k⟩`.
pub fn lambda(sign: Sign, k: &Point) -> Complex64 {
    Complex64::new(0.0, sign.value() * japanese(k))
}

/// `a±(k) = ∓i/(2⟨k⟩)`.
pub fn amplitude(sign: Sign, k: &Point) -> Complex64 {
    Complex64::new(0.0, -sign.value() / (2.0 * japanese(k)))
}

/// `Ĝ(t,k) = sin(t⟨k⟩)/⟨k⟩`.
pub fn green_hat(t: f64, k: &Point) -> f64 {
    let w = japanese(k);
    (t * w).sin() / w
}

/// `∂ₜĜ(t,k) = cos(t⟨k⟩)`.
pub fn green_hat_dt(t: f64, k: &Point) -> f64 {
    (t * japanese(k)).cos()
}

/// `Ĝ^osc±(t,k) = e^{λ±t} a±`.
pub fn green_osc(sign: Sign, t: f64, k: &Point) -> Complex64 {
    (lambda(sign, k) * t).exp() * amplitude(sign, k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_2;

    #[test]
    fn reference_values() {
        assert_eq!(green_hat(0.0, &[1.3, 0.0, 0.0]), 0.0);
        assert!((green_hat(FRAC_PI_2, &[0.0; 3]) - 1.0).abs() < 1e-15);
        let k = [3f64.sqrt(), 0.0, 0.0];
        for t in [0.1, 1.0, 7.3] {
            assert!((green_hat(t, &k) - (2.0 * t).sin() / 2.0).abs() < 1e-15);
        }
    }

    #[test]
    fn split_is_exact() {
        for i in 0..50 {
            let k = [0.37 * i as f64, -0.11 * i as f64, 0.0];
            for t in [0.0, 0.5, 3.0, 29.7] {
                let sum = green_osc(Sign::Plus, t, &k) + green_osc(Sign::Minus, t, &k);
                assert!((sum.re - green_hat(t, &k)).abs() < 1e-15);
                assert!(sum.im.abs() < 1e-15);
            }
        }
    }

    #[test]
    fn amplitude_sum_rules() {
        let k = [2.0, 1.0, 0.5];
        let s0: Complex64 = Sign::BOTH.iter().map(|&s| amplitude(s, &k)).sum();
        let s1: Complex64 = Sign::BOTH.iter().map(|&s| amplitude(s, &k) * lambda(s, &k)).sum();
        assert!(s0.norm() < 1e-16);
        assert!((s1 - 1.0).norm() < 1e-15);
    }
}
