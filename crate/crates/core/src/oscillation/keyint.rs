use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::resolvent::omega;
use crate::kg::{lambda, Sign};
use crate::quadrature::integrate_adaptive;
use crate::spectral::dot3;
use crate::transport::relativistic_velocity;
use crate::{Point, Result};

/// Both sides of `∫₀ᵗ E^osc±(τ, x+v̂τ) dτ = (E^osc±(t, x+v̂t) − E^osc±(0, x))/ω^v±`
/// for the single mode `E^osc± = e^{ik·x + λ±t}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KeyintSample {
    pub sign: Sign,
    pub k: Point,
    pub v: Point,
    pub x: Point,
    pub t: f64,
    pub lhs: Complex64,
    pub rhs: Complex64,
    pub residual: f64,
}

fn mode(sign: Sign, k: &Point, t: f64, x: &Point) -> Complex64 {
    (lambda(sign, k) * t + Complex64::new(0.0, dot3(k, x))).exp()
}

/// Left side by adaptive quadrature, right side in closed form.
pub fn keyint_check(sign: Sign, k: &Point, v: &Point, x: &Point, t: f64) -> Result<KeyintSample> {
    let vh = relativistic_velocity(v);
    let along = |tau: f64| [x[0] + vh[0] * tau, x[1] + vh[1] * tau, x[2] + vh[2] * tau];
    let (lhs, _) = integrate_adaptive(|tau| mode(sign, k, tau, &along(tau)), 0.0, t, 1e-13, 1e-13, 4000)?;
    let rhs = (mode(sign, k, t, &along(t)) - mode(sign, k, 0.0, x)) / omega(sign, k, &vh);
    Ok(KeyintSample { sign, k: *k, v: *v, x: *x, t, lhs, rhs, residual: (lhs - rhs).norm() })
}

/// `draws` random `(k, v, x, t, ±)` with `|kₐ| ≤ 6`, `|vₐ| ≤ 1.15`,
/// `|xₐ| ≤ 5`, `t ∈ [0, 20]`.
pub fn keyint_suite(draws: usize, seed: u64) -> Result<Vec<KeyintSample>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(draws);
    for _ in 0..draws {
        let mut pick = |r: f64| [rng.gen_range(-r..r), rng.gen_range(-r..r), rng.gen_range(-r..r)];
        let k = pick(6.0);
        let v = pick(1.15);
        let x = pick(5.0);
        let t = rng.gen_range(0.0..20.0);
        let sign = if rng.gen_bool(0.5) { Sign::Plus } else { Sign::Minus };
        out.push(keyint_check(sign, &k, &v, &x, t)?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_time() {
        let s = keyint_check(Sign::Plus, &[1.0, 2.0, 0.0], &[0.3, 0.0, 0.0], &[0.5; 3], 0.0).unwrap();
        assert_eq!(s.lhs, Complex64::new(0.0, 0.0));
        assert!(s.rhs.norm() < 1e-16);
    }

    #[test]
    fn zero_mode_closed_form() {
        for sign in Sign::BOTH {
            for t in [0.3, 4.0, 17.5] {
                let s = keyint_check(sign, &[0.0; 3], &[0.9, -0.4, 0.2], &[1.0, 2.0, 3.0], t).unwrap();
                let lam = lambda(sign, &[0.0; 3]);
                let exact = ((lam * t).exp() - 1.0) / lam;
                assert!((s.lhs - exact).norm() <= 1e-12);
                assert!(s.residual <= 1e-12);
            }
        }
    }

    #[test]
    fn randomized_draws() {
        let worst = keyint_suite(100, 7).unwrap().iter().fold(0.0_f64, |m, s| m.max(s.residual));
        assert!(worst <= 1e-10, "{worst}");
    }
}
