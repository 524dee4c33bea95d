use num_complex::Complex64;

use super::symbols::{amplitude, green_hat, green_hat_dt, lambda, Sign};
use crate::quadrature::{exp_weights, QuadratureRule};
use crate::spectral::{japanese, multiplier, sum, BoxGrid, SpectralField};
use crate::{Error, Result};

/// Klein-Gordon state `(φ̂, ∂ₜφ̂)` at time `t` together with the oscillatory
/// profiles `B̂±`, so that `Ê = Σ± e^{λ±t} B̂±` up to the tracked remainder.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldState {
    time: f64,
    phi: SpectralField,
    dtphi: SpectralField,
    profiles: [SpectralField; 2],
}

/// `Ŝ⁰± = −φ̂₁ − λ±φ̂₀`.
pub fn initial_oscillatory_source(phi0: &SpectralField, phi1: &SpectralField, sign: Sign) -> Result<SpectralField> {
    let shifted = multiplier::apply_multiplier(phi0, |k| lambda(sign, k))?;
    Ok(phi1.add(&shifted)?.scaled(Complex64::new(-1.0, 0.0)))
}

fn check_scalar(f: &SpectralField, what: &str) -> Result<()> {
    if f.num_components() != 1 {
        return Err(Error::Dimension(format!("{what} must be scalar")));
    }
    Ok(())
}

impl FieldState {
    /// State at `t = 0` with `B̂±(0) = a± ik Ŝ⁰±`.
    pub fn new(phi0: SpectralField, phi1: SpectralField) -> Result<Self> {
        check_scalar(&phi0, "phi0")?;
        check_scalar(&phi1, "phi1")?;
        if phi0.grid() != phi1.grid() {
            return Err(Error::Dimension("phi0 and phi1 live on different grids".into()));
        }
        let mut profiles = Vec::with_capacity(2);
        for sign in Sign::BOTH {
            let s0 = initial_oscillatory_source(&phi0, &phi1, sign)?;
            let f0 = multiplier::gradient(&s0)?;
            profiles.push(multiplier::apply_multiplier(&f0, |k| amplitude(sign, k))?);
        }
        let minus = profiles.pop().expect("two profiles");
        let plus = profiles.pop().expect("two profiles");
        Ok(Self { time: 0.0, phi: phi0, dtphi: phi1, profiles: [plus, minus] })
    }

    pub fn zeros(grid: BoxGrid) -> Self {
        Self {
            time: 0.0,
            phi: SpectralField::zeros(grid, 1),
            dtphi: SpectralField::zeros(grid, 1),
            profiles: [SpectralField::zeros(grid, grid.dim()), SpectralField::zeros(grid, grid.dim())],
        }
    }

    pub fn grid(&self) -> &BoxGrid {
        self.phi.grid()
    }

    pub fn time(&self) -> f64 {
        self.time
    }

    pub fn phi(&self) -> &SpectralField {
        &self.phi
    }

    pub fn dtphi(&self) -> &SpectralField {
        &self.dtphi
    }

    pub fn profile(&self, sign: Sign) -> &SpectralField {
        &self.profiles[sign.index()]
    }

    /// Exact homogeneous flow over `dt ≥ 0`; profiles are untouched.
    pub fn propagate_homogeneous(&self, dt: f64) -> FieldState {
        assert!(dt >= 0.0, "negative time step");
        let grid = *self.grid();
        let mut phi = self.phi.clone();
        let mut dtphi = self.dtphi.clone();
        {
            let p = phi.component_mut(0);
            let q = dtphi.component_mut(0);
            for flat in 0..grid.len() {
                let k = grid.wavevector(flat);
                let w = japanese(&k);
                let g = green_hat(dt, &k);
                let c = green_hat_dt(dt, &k);
                let (p0, q0) = (p[flat], q[flat]);
                p[flat] = g * q0 + c * p0;
                q[flat] = c * q0 - w * w * g * p0;
            }
        }
        FieldState { time: self.time + dt, phi, dtphi, profiles: self.profiles.clone() }
    }

    /// Advances over `[t, t + Δt]`, adding `−∫Ĝ(t+Δt−s)ρ̂(s)ds` by the given
    /// rule and accumulating `B̂±` with `F̂ = ikρ̂` from the same samples.
    ///
    /// `samples` are `(time, ρ̂)` pairs whose first time equals the state time.
    pub fn duhamel_step(&self, samples: &[(f64, &SpectralField)], rule: QuadratureRule) -> Result<FieldState> {
        let (t0, dt) = self.check_samples(samples)?;
        let grid = *self.grid();
        let mut next = self.propagate_homogeneous(dt);
        let times: Vec<f64> = samples.iter().map(|s| s.0).collect();
        for (_, rho) in samples {
            check_scalar(rho, "density")?;
            if rho.grid() != &grid {
                return Err(Error::Dimension("density on a different grid".into()));
            }
        }
        let p = next.phi.component_mut(0);
        let q = next.dtphi.component_mut(0);
        for flat in 0..grid.len() {
            let k = grid.wavevector(flat);
            for sign in Sign::BOTH {
                let lam = lambda(sign, &k);
                let w = exp_weights(rule, -lam, &times);
                let integral: Complex64 = w.iter().zip(samples).map(|(w, (_, r))| w * r.component(0)[flat]).sum();
                let kick = amplitude(sign, &k) * (lam * dt).exp() * integral;
                p[flat] -= kick;
                q[flat] -= lam * kick;
            }
        }
        let grads: Vec<SpectralField> = samples.iter().map(|(_, r)| multiplier::gradient(r)).collect::<Result<_>>()?;
        let f_samples: Vec<(f64, &SpectralField)> = times.iter().copied().zip(grads.iter()).collect();
        next.profiles = self.accumulated_profiles(&f_samples, rule)?;
        debug_assert!((next.time - (t0 + dt)).abs() < 1e-12);
        Ok(next)
    }

    /// `B̂± += ∫ e^{−λ±s} a± F̂(s) ds` over the span of `samples`; time is unchanged.
    pub fn accumulate_profiles(&self, samples: &[(f64, &SpectralField)], rule: QuadratureRule) -> Result<FieldState> {
        self.check_samples(samples)?;
        let mut out = self.clone();
        out.profiles = self.accumulated_profiles(samples, rule)?;
        Ok(out)
    }

    fn accumulated_profiles(
        &self,
        samples: &[(f64, &SpectralField)],
        rule: QuadratureRule,
    ) -> Result<[SpectralField; 2]> {
        let grid = *self.grid();
        let d = grid.dim();
        for (_, f) in samples {
            if f.grid() != &grid || f.num_components() != d {
                return Err(Error::Dimension("F samples must be d-component fields on the run grid".into()));
            }
        }
        let times: Vec<f64> = samples.iter().map(|s| s.0).collect();
        let t0 = times[0];
        let mut out = self.profiles.clone();
        for sign in Sign::BOTH {
            let b = &mut out[sign.index()];
            for flat in 0..grid.len() {
                let k = grid.wavevector(flat);
                let lam = lambda(sign, &k);
                let pre = amplitude(sign, &k) * (-lam * t0).exp();
                let w = exp_weights(rule, -lam, &times);
                for c in 0..d {
                    let integral: Complex64 = w.iter().zip(samples).map(|(w, (_, f))| w * f.component(c)[flat]).sum();
                    b.component_mut(c)[flat] += pre * integral;
                }
            }
        }
        Ok(out)
    }

    fn check_samples(&self, samples: &[(f64, &SpectralField)]) -> Result<(f64, f64)> {
        if samples.len() < 2 {
            return Err(Error::InsufficientData("a step needs at least two samples".into()));
        }
        let t0 = samples[0].0;
        if (t0 - self.time).abs() > 1e-12 * (1.0 + self.time.abs()) {
            return Err(Error::Ordering { s: self.time, t: t0 });
        }
        for w in samples.windows(2) {
            if w[1].0 <= w[0].0 {
                return Err(Error::Ordering { s: w[0].0, t: w[1].0 });
            }
        }
        Ok((t0, samples[samples.len() - 1].0 - t0))
    }

    /// `Ê = −ikφ̂`.
    pub fn electric_field(&self) -> SpectralField {
        multiplier::gradient(&self.phi).expect("phi is scalar").scaled(Complex64::new(-1.0, 0.0))
    }

    /// `Ê^osc± = e^{λ±t} B̂±` (complex-valued in physical space).
    pub fn oscillatory_field(&self, sign: Sign) -> SpectralField {
        let t = self.time;
        multiplier::apply_multiplier(self.profile(sign), |k| (lambda(sign, k) * t).exp()).expect("finite symbol")
    }

    /// Spectral energy `½ vol Σ (|∂ₜφ̂|² + ⟨k⟩²|φ̂|²)`.
    pub fn energy(&self) -> f64 {
        let grid = self.grid();
        let p = self.phi.component(0);
        let q = self.dtphi.component(0);
        let e = sum::neumaier((0..grid.len()).map(|flat| {
            let w = japanese(&grid.wavevector(flat));
            q[flat].norm_sqr() + w * w * p[flat].norm_sqr()
        }));
        0.5 * grid.volume() * e
    }
}
