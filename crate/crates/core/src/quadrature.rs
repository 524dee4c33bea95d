//! Time quadrature rules and adaptive Gauss–Kronrod integration.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::{Error, Result};

/// Rule used for the Duhamel integral and the profile accumulation over a step.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum QuadratureRule {
    /// Composite trapezoid on the supplied samples.
    #[default]
    Trapezoid,
    /// Exact integration of `e^{μu}` against the piecewise-linear interpolant
    /// of the samples.
    ProductLinear,
}

impl fmt::Display for QuadratureRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            QuadratureRule::Trapezoid => "trapezoid",
            QuadratureRule::ProductLinear => "product-linear",
        })
    }
}

impl FromStr for QuadratureRule {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "trapezoid" => Ok(QuadratureRule::Trapezoid),
            "product-linear" => Ok(QuadratureRule::ProductLinear),
            other => Err(Error::Config(format!("unknown quadrature rule '{other}'"))),
        }
    }
}

/// `∫₀¹ (1−s) e^{zs} ds` and `∫₀¹ s e^{zs} ds`.
pub fn linear_exp_weights(z: Complex64) -> (Complex64, Complex64) {
    if z.norm() < 0.5 {
        let mut w0 = Complex64::new(0.0, 0.0);
        let mut w1 = Complex64::new(0.0, 0.0);
        let mut zn = Complex64::new(1.0, 0.0);
        let mut fact = 2.0; // (n+2)!
        for n in 0..16 {
            w0 += zn / fact;
            w1 += zn * (n as f64 + 1.0) / fact;
            zn *= z;
            fact *= n as f64 + 3.0;
        }
        (w0, w1)
    } else {
        let ez = z.exp();
        let z2 = z * z;
        ((ez - 1.0 - z) / z2, (ez * (z - 1.0) + 1.0) / z2)
    }
}

/// Per-sample weights `w_i` with `∫_{s_0}^{s_m} e^{μ(u−s_0)} g(u) du ≈ Σ w_i g(s_i)`.
pub fn exp_weights(rule: QuadratureRule, mu: Complex64, times: &[f64]) -> Vec<Complex64> {
    let mut w = vec![Complex64::new(0.0, 0.0); times.len()];
    let s0 = times[0];
    for i in 0..times.len().saturating_sub(1) {
        let h = times[i + 1] - times[i];
        let left = (mu * (times[i] - s0)).exp();
        match rule {
            QuadratureRule::Trapezoid => {
                w[i] += 0.5 * h * left;
                w[i + 1] += 0.5 * h * (mu * (times[i + 1] - s0)).exp();
            }
            QuadratureRule::ProductLinear => {
                let (a, b) = linear_exp_weights(mu * h);
                w[i] += h * left * a;
                w[i + 1] += h * left * b;
            }
        }
    }
    w
}

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_5,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_48,
    0.000000000000000000000000000000000,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224,
    0.063_092_092_629_978_56,
    0.104_790_010_322_250_19,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_42,
    0.204_432_940_075_298_89,
    0.209_482_141_084_727_82,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_64,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

fn gk15<F: Fn(f64) -> Complex64>(f: &F, a: f64, b: f64) -> (Complex64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kron = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for i in 0..7 {
        let x = h * XGK[i];
        let s = f(c - x) + f(c + x);
        kron += s * WGK[i];
        if i % 2 == 1 {
            gauss += s * WG[i / 2];
        }
    }
    (kron * h, ((kron - gauss) * h).norm())
}

/// Adaptive G7–K15 integration of a complex integrand.
///
/// Returns the integral and the summed error estimate; fails if the
/// tolerance `max(abs_tol, rel_tol·|I|)` is not met within `max_intervals`.
pub fn integrate_adaptive<F: Fn(f64) -> Complex64>(
    f: F,
    a: f64,
    b: f64,
    abs_tol: f64,
    rel_tol: f64,
    max_intervals: usize,
) -> Result<(Complex64, f64)> {
    if a == b {
        return Ok((Complex64::new(0.0, 0.0), 0.0));
    }
    let mut pieces = vec![{
        let (v, e) = gk15(&f, a, b);
        (a, b, v, e)
    }];
    loop {
        let total: Complex64 = pieces.iter().map(|p| p.2).sum();
        let err: f64 = pieces.iter().map(|p| p.3).sum();
        if err <= abs_tol.max(rel_tol * total.norm()) {
            return Ok((total, err));
        }
        if pieces.len() >= max_intervals {
            return Err(Error::Resolution(format!(
                "adaptive quadrature did not converge: error {err:e} after {} intervals",
                pieces.len()
            )));
        }
        let (worst, _) =
            pieces.iter().enumerate().fold((0, -1.0), |(bi, be), (i, p)| if p.3 > be { (i, p.3) } else { (bi, be) });
        let (lo, hi, _, _) = pieces.swap_remove(worst);
        let mid = 0.5 * (lo + hi);
        let (v1, e1) = gk15(&f, lo, mid);
        let (v2, e2) = gk15(&f, mid, hi);
        pieces.push((lo, mid, v1, e1));
        pieces.push((mid, hi, v2, e2));
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weights_continuous_across_branch() {
        for z in [0.49, 0.51] {
            let zc = Complex64::new(0.0, z);
            let (a, b) = linear_exp_weights(zc);
            let ez = zc.exp();
            let z2 = zc * zc;
            let a2 = (ez - 1.0 - zc) / z2;
            let b2 = (ez * (zc - 1.0) + 1.0) / z2;
            assert!((a - a2).norm() < 1e-12 && (b - b2).norm() < 1e-12);
        }
        let (a, b) = linear_exp_weights(Complex64::new(0.0, 0.0));
        assert!((a.re - 0.5).abs() < 1e-16 && (b.re - 0.5).abs() < 1e-16);
    }

    #[test]
    fn product_linear_exact_on_linear_data() {
        let mu = Complex64::new(0.0, 7.0);
        let times = [0.0, 0.3, 0.5];
        let w = exp_weights(QuadratureRule::ProductLinear, mu, &times);
        let g = |t: f64| 2.0 - 3.0 * t;
        let approx: Complex64 = w.iter().zip(times).map(|(w, t)| w * g(t)).sum();
        let (exact, _) = integrate_adaptive(|u| (mu * u).exp() * g(u), 0.0, 0.5, 1e-15, 1e-14, 200).unwrap();
        assert!((approx - exact).norm() < 1e-13);
    }

    #[test]
    fn gauss_kronrod_oscillatory() {
        let (v, _) = integrate_adaptive(|u| Complex64::from_polar(1.0, 40.0 * u), 0.0, 3.0, 1e-14, 1e-13, 500).unwrap();
        let exact = (Complex64::from_polar(1.0, 120.0) - 1.0) / Complex64::new(0.0, 40.0);
        assert!((v - exact).norm() < 1e-13);
    }
}
