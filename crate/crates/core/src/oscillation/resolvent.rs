use num_complex::Complex64;

use crate::kg::{lambda, Sign};
use crate::spectral::{dot3, japanese, multiplier, norm3, SpectralField};
use crate::transport::relativistic_velocity;
use crate::{Point, Result};

/// How the multiplier is evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KernelForm {
    Exact,
    /// Geometric series truncated after `n = N`.
    Series(usize),
}

/// `φ±,j(k; v) = (λ±(k) + ik·v̂)^{−j}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResolventKernel {
    pub sign: Sign,
    pub order: u32,
    pub v: Point,
    pub form: KernelForm,
}

/// `ω^v±(k) = λ±(k) + ik·v̂`.
pub fn omega(sign: Sign, k: &Point, vhat: &Point) -> Complex64 {
    lambda(sign, k) + Complex64::new(0.0, dot3(k, vhat))
}

impl ResolventKernel {
    pub fn new(sign: Sign, order: u32, v: Point) -> Self {
        assert!(order >= 1, "resolvent order starts at 1");
        Self { sign, order, v, form: KernelForm::Exact }
    }

    pub fn series(sign: Sign, order: u32, v: Point, terms: usize) -> Self {
        Self { form: KernelForm::Series(terms), ..Self::new(sign, order, v) }
    }

    pub fn vhat(&self) -> Point {
        relativistic_velocity(&self.v)
    }

    pub fn omega(&self, k: &Point) -> Complex64 {
        omega(self.sign, k, &self.vhat())
    }

    pub fn exact_symbol(&self, k: &Point) -> Complex64 {
        self.omega(k).powi(-(self.order as i32))
    }

    /// `ω^{−1} = ∓i⟨k⟩^{−1} Σₙ (∓k·v̂/⟨k⟩)ⁿ`, summed to `n = N` and raised to `j`.
    pub fn series_symbol(&self, k: &Point, terms: usize) -> Complex64 {
        let w = japanese(k);
        let s = self.sign.value();
        let q = -s * dot3(k, &self.vhat()) / w;
        let mut sum = 0.0;
        let mut term = 1.0;
        for _ in 0..=terms {
            sum += term;
            term *= q;
        }
        (Complex64::new(0.0, -s / w) * sum).powi(self.order as i32)
    }

    /// `a±,n(k)`: coefficient of the `n`-th series term of `φ±,1`.
    pub fn series_coefficient(&self, k: &Point, n: usize) -> Complex64 {
        let w = japanese(k);
        let s = self.sign.value();
        Complex64::new(0.0, -s / w) * (-s * dot3(k, &self.vhat()) / w).powi(n as i32)
    }

    pub fn symbol(&self, k: &Point) -> Complex64 {
        match self.form {
            KernelForm::Exact => self.exact_symbol(k),
            KernelForm::Series(n) => self.series_symbol(k, n),
        }
    }

    /// Relative truncation bound `(1 + A^{N+1}/(1−A))^j − 1` with `A = |v̂|`;
    /// for `j = 1` this is the geometric tail `A^{N+1}/(1−A)`.
    pub fn tail_bound(&self, terms: usize) -> f64 {
        let a = norm3(&self.vhat());
        let b = a.powi(terms as i32 + 1) / (1.0 - a);
        (1.0 + b).powi(self.order as i32) - 1.0
    }

    /// `⟨k⟩(1 − |v̂|)`, a lower bound for `|ω^v±(k)|`.
    pub fn denominator_bound(&self, k: &Point) -> f64 {
        japanese(k) * (1.0 - norm3(&self.vhat()))
    }
}

/// `E^{osc,j}±` when fed `E^osc±`: the kernel applied as a grid multiplier.
pub fn resolvent_apply(kernel: &ResolventKernel, field: &SpectralField) -> Result<SpectralField> {
    multiplier::apply_multiplier(field, |k| kernel.symbol(k))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::BoxGrid;
    use proptest::prelude::*;

    #[test]
    fn zero_mode_at_rest() {
        let k = [0.0; 3];
        let p = ResolventKernel::new(Sign::Plus, 1, [0.0; 3]).exact_symbol(&k);
        let m = ResolventKernel::new(Sign::Minus, 1, [0.0; 3]).exact_symbol(&k);
        assert!((p - Complex64::new(0.0, -1.0)).norm() < 1e-15);
        assert!((m - Complex64::new(0.0, 1.0)).norm() < 1e-15);
    }

    #[test]
    fn order_two_is_order_one_twice() {
        let g = BoxGrid::new(2, 6.0, 16).unwrap();
        let f = SpectralField::sample(g, |x| (-(x[0] * x[0] + 2.0 * x[1] * x[1])).exp()).map_coefficients(|_, k, z| {
            if k.iter().any(|c| c.abs() >= g.nyquist_wavenumber() - 1e-12) {
                0.0.into()
            } else {
                z
            }
        });
        let v = [0.7, -1.3, 0.0];
        for sign in Sign::BOTH {
            let k1 = ResolventKernel::new(sign, 1, v);
            let k2 = ResolventKernel::new(sign, 2, v);
            let twice = resolvent_apply(&k1, &resolvent_apply(&k1, &f).unwrap()).unwrap();
            let direct = resolvent_apply(&k2, &f).unwrap();
            assert!(twice.sub(&direct).unwrap().max_coefficient() < 1e-13);
        }
    }

    #[test]
    fn series_coefficients_sum_to_series() {
        let k = [1.5, 0.0, 0.0];
        let kern = ResolventKernel::new(Sign::Minus, 1, [0.8, 0.0, 0.0]);
        let sum: Complex64 = (0..=12).map(|n| kern.series_coefficient(&k, n)).sum();
        assert!((sum - kern.series_symbol(&k, 12)).norm() < 1e-15);
    }

    proptest! {
        #[test]
        fn series_within_geometric_tail(
            kx in -20.0..20.0f64, ky in -20.0..20.0f64,
            vx in -1.4..1.4f64, vy in -1.4..1.4f64,
            plus in any::<bool>(), order in 1u32..4,
        ) {
            let sign = if plus { Sign::Plus } else { Sign::Minus };
            let k = [kx, ky, 0.0];
            let kern = ResolventKernel::new(sign, order, [vx, vy, 0.0]);
            let exact = kern.exact_symbol(&k);
            let approx = kern.series_symbol(&k, 20);
            prop_assert!((approx - exact).norm() <= kern.tail_bound(20) * exact.norm() * (1.0 + 1e-12) + 1e-15);
            prop_assert!(kern.omega(&k).norm() >= kern.denominator_bound(&k) * (1.0 - 1e-14));
        }
    }

    #[test]
    fn series_at_speed_two() {
        let v = [2.0, 0.0, 0.0];
        let kern = ResolventKernel::new(Sign::Plus, 1, v);
        let a0 = norm3(&kern.vhat());
        let bound = a0.powi(21) / (1.0 - a0);
        let g = BoxGrid::new(1, 10.0, 64).unwrap();
        for flat in 0..g.len() {
            let k = g.wavevector(flat);
            let err = (kern.series_symbol(&k, 20) - kern.exact_symbol(&k)).norm() * japanese(&k);
            assert!(err <= bound, "{err} > {bound}");
        }
    }
}
