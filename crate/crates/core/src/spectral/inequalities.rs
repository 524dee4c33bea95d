//! Measured constants for the Bernstein, multiplier and interpolation
//! inequalities.

use num_complex::Complex64;

use super::{japanese, littlewood_paley as lp, multiplier, norms, SpectralField};
use crate::{Error, Result};

/// Per-shell Bernstein measurements for `∂_axis`.
#[derive(Debug, Clone, PartialEq)]
pub struct BernsteinShell {
    pub shell: i32,
    /// `‖P_j ∂h‖₂ / (2^j ‖P_j h‖₂)`; bounded by 2 exactly.
    pub l2_constant: f64,
    /// `‖P_j ∂h‖_∞ / (2^j ‖P_j h‖_∞)`.
    pub linf_constant: f64,
}

/// Bernstein constants on every shell whose projection is nonzero.
pub fn bernstein_check(h: &SpectralField, axis: usize) -> Result<Vec<BernsteinShell>> {
    let mut out = Vec::new();
    for j in 1..=lp::top_shell(h.grid()) {
        let pj = lp::lp_projector(h, j)?;
        let base2 = norms::lp_norm(&pj, 2.0);
        if base2 <= 1e-300 {
            continue;
        }
        let dpj = multiplier::partial(&pj, axis);
        let scale = 2f64.powi(j);
        out.push(BernsteinShell {
            shell: j,
            l2_constant: norms::lp_norm(&dpj, 2.0) / (scale * base2),
            linf_constant: norms::lp_norm(&dpj, f64::INFINITY) / (scale * norms::lp_norm(&pj, f64::INFINITY)),
        });
    }
    Ok(out)
}

/// `‖⟨i∂⟩^{−δ} f‖_p / ‖f‖_p`.
pub fn multiplier_bound_ratio(f: &SpectralField, delta: f64, p: f64) -> Result<f64> {
    let base = norms::lp_norm(f, p);
    if base == 0.0 {
        return Err(Error::DegenerateInput("multiplier ratio of a zero field".into()));
    }
    let g = multiplier::apply_multiplier(f, |k| Complex64::new(japanese(k).powf(-delta), 0.0))?;
    Ok(norms::lp_norm(&g, p) / base)
}

/// `‖∂^β f‖_∞ / (‖f‖_∞^{1−|β|/|α|} ‖f‖_{H^{2+|α|}}^{|β|/|α|})`.
pub fn interpolation_check(f: &SpectralField, beta: [u32; 3], alpha_order: u32) -> Result<f64> {
    let b: u32 = beta.iter().sum();
    if alpha_order == 0 || b > alpha_order {
        return Err(Error::DegenerateInput(format!("need 0 <= |beta| = {b} <= |alpha| = {alpha_order}, |alpha| > 0")));
    }
    let sup = norms::lp_norm(f, f64::INFINITY);
    if sup == 0.0 {
        return Err(Error::DegenerateInput("interpolation ratio of a zero field".into()));
    }
    let theta = b as f64 / alpha_order as f64;
    let hs = norms::h_norm(f, 2.0 + alpha_order as f64);
    let num = norms::lp_norm(&multiplier::partial_multi(f, beta), f64::INFINITY);
    Ok(num / (sup.powf(1.0 - theta) * hs.powf(theta)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::BoxGrid;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_field(g: BoxGrid, rng: &mut ChaCha8Rng) -> SpectralField {
        let v: Vec<f64> = (0..g.len()).map(|_| rng.gen_range(-1.0..1.0)).collect();
        SpectralField::from_real(g, &v).unwrap()
    }

    #[test]
    fn bernstein_l2_exact_bound() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let g = BoxGrid::new(1, 4.0, 128).unwrap();
        for _ in 0..20 {
            let h = random_field(g, &mut rng);
            for shell in bernstein_check(&h, 0).unwrap() {
                assert!(shell.l2_constant <= 2.0 + 1e-12, "{shell:?}");
            }
        }
    }

    #[test]
    fn single_mode_interpolation_ratio() {
        let g = BoxGrid::new(1, 6.0, 64).unwrap();
        let f = SpectralField::sample(g, |x| (std::f64::consts::PI * x[0] / 6.0).cos());
        let r = interpolation_check(&f, [0, 0, 0], 2).unwrap();
        assert!(r <= 1.0 + 1e-12);
    }

    #[test]
    fn interpolation_homogeneous() {
        let g = BoxGrid::new(1, 6.0, 64).unwrap();
        let f = SpectralField::sample(g, |x| (-x[0] * x[0]).exp());
        let a = interpolation_check(&f, [1, 0, 0], 2).unwrap();
        let b = interpolation_check(&f.scaled(Complex64::new(3.0, 0.0)), [1, 0, 0], 2).unwrap();
        assert!((a - b).abs() < 1e-12 * a);
        assert!(interpolation_check(&SpectralField::zeros(g, 1), [0, 0, 0], 1).is_err());
    }
}
