use num_complex::Complex64;

use crate::kg::{lambda, FieldState, Sign};
use crate::spectral::{multiplier, SpectralField};
use crate::transport::RunHistory;
use crate::Result;

/// `E = E^osc₊ + E^osc₋ + E^r` over a stored run, with
/// `Ê^osc±(t) = e^{λ±t} B̂±(t)` and `E^r = E − Σ± E^osc±`.
///
/// Between stored steps `Ê`, `B̂±` and `ρ̂` are interpolated linearly.
#[derive(Debug, Clone, Copy)]
pub struct OscillatorySplit<'a> {
    history: &'a RunHistory,
}

pub fn split_field(history: &RunHistory) -> OscillatorySplit<'_> {
    OscillatorySplit { history }
}

/// `(E^osc₊, E^osc₋, E^r)` of a single state.
pub fn split_state(state: &FieldState) -> Result<(SpectralField, SpectralField, SpectralField)> {
    let plus = state.oscillatory_field(Sign::Plus);
    let minus = state.oscillatory_field(Sign::Minus);
    let r = state.electric_field().sub(&plus)?.sub(&minus)?;
    Ok((plus, minus, r))
}

impl<'a> OscillatorySplit<'a> {
    pub fn history(&self) -> &'a RunHistory {
        self.history
    }

    pub fn times(&self) -> &'a [f64] {
        self.history.times()
    }

    pub fn electric(&self, t: f64) -> Result<SpectralField> {
        self.history.electric.at(t)
    }

    pub fn oscillatory(&self, sign: Sign, t: f64) -> Result<SpectralField> {
        self.history.oscillatory_at(sign, t)
    }

    pub fn remainder(&self, t: f64) -> Result<SpectralField> {
        let mut r = self.electric(t)?;
        for sign in Sign::BOTH {
            r = r.sub(&self.oscillatory(sign, t)?)?;
        }
        Ok(r)
    }

    /// `F = ∇ₓρ`.
    pub fn force_density(&self, t: f64) -> Result<SpectralField> {
        multiplier::gradient(&self.history.density.at(t)?)
    }

    /// Interpolation node and weight shared by every stored series.
    pub(crate) fn locate(&self, t: f64) -> Result<(usize, f64)> {
        self.history.electric.locate(t)
    }

    /// `B̂±` component `c` at mode `flat`, interpolated at `(i, θ)`.
    pub(crate) fn profile_coeff(&self, sign: Sign, c: usize, flat: usize, at: (usize, f64)) -> Complex64 {
        lerp(self.history.profiles[sign.index()].fields(), c, flat, at)
    }

    pub(crate) fn electric_coeff(&self, c: usize, flat: usize, at: (usize, f64)) -> Complex64 {
        lerp(self.history.electric.fields(), c, flat, at)
    }

    pub(crate) fn density_coeff(&self, flat: usize, at: (usize, f64)) -> Complex64 {
        lerp(self.history.density.fields(), 0, flat, at)
    }

    /// `e^{λ±t}` at a mode.
    pub(crate) fn phase(sign: Sign, k: &crate::Point, t: f64) -> Complex64 {
        (lambda(sign, k) * t).exp()
    }
}

fn lerp(fields: &[SpectralField], c: usize, flat: usize, (i, theta): (usize, f64)) -> Complex64 {
    let a = fields[i].component(c)[flat];
    if theta == 0.0 {
        a
    } else {
        a * (1.0 - theta) + fields[i + 1].component(c)[flat] * theta
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::BoxGrid;

    fn pure_wave_history(grid: BoxGrid, steps: usize, dt: f64) -> RunHistory {
        let phi0 = SpectralField::sample(grid, |x| (-x[0] * x[0] / 2.0).exp());
        let phi1 = SpectralField::sample(grid, |x| 0.3 * x[0] * (-x[0] * x[0]).exp());
        let s0 = FieldState::new(phi0, phi1).unwrap();
        let mut h = RunHistory::new(grid);
        for n in 0..=steps {
            let t = n as f64 * dt;
            let b = [s0.profile(Sign::Plus).clone(), s0.profile(Sign::Minus).clone()];
            let mut e = SpectralField::zeros(grid, grid.dim());
            for sign in Sign::BOTH {
                let osc = b[sign.index()].map_coefficients(|_, k, z| z * (lambda(sign, k) * t).exp());
                e = e.add(&osc).unwrap();
            }
            h.push(t, e, b, SpectralField::zeros(grid, 1));
        }
        h
    }

    #[test]
    fn manufactured_pure_wave_has_no_remainder() {
        let g = BoxGrid::new(1, 12.0, 64).unwrap();
        let h = pure_wave_history(g, 20, 0.25);
        let split = split_field(&h);
        for &t in &[0.0, 1.0, 3.75, 5.0] {
            let r = split.remainder(t).unwrap();
            let linf = crate::spectral::norms::lp_norm(&r, f64::INFINITY);
            assert!(linf <= 1e-10, "t={t}: {linf}");
            let e = split.electric(t).unwrap();
            let back = split
                .oscillatory(Sign::Plus, t)
                .unwrap()
                .add(&split.oscillatory(Sign::Minus, t).unwrap())
                .unwrap()
                .add(&r)
                .unwrap();
            assert!(back.sub(&e).unwrap().max_coefficient() < 1e-15);
        }
    }

    #[test]
    fn zero_field_splits_to_zero() {
        let g = BoxGrid::new(2, 4.0, 8).unwrap();
        let (p, m, r) = split_state(&FieldState::zeros(g)).unwrap();
        assert_eq!(p.max_coefficient() + m.max_coefficient() + r.max_coefficient(), 0.0);
    }

    #[test]
    fn state_split_reconstructs() {
        let g = BoxGrid::new(1, 8.0, 32).unwrap();
        let phi0 = SpectralField::sample(g, |x| (-x[0] * x[0]).exp());
        let s = FieldState::new(phi0.clone(), phi0).unwrap().propagate_homogeneous(1.3);
        let (p, m, r) = split_state(&s).unwrap();
        let e = s.electric_field();
        assert!(p.add(&m).unwrap().add(&r).unwrap().sub(&e).unwrap().max_coefficient() < 1e-15);
        assert!(r.max_coefficient() < 1e-15);
    }
}
