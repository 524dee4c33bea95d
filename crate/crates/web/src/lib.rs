//! Browser bindings: a dispersing Klein-Gordon pulse, a live 1-D phase-space
//! simulation, and the keyint / decay-fit explorer.

use vkg_core::diagnostics::fit_decay_exponent;
use vkg_core::driver::{remainder_field, RunConfig, Simulation};
use vkg_core::kg::{FieldState, Sign};
use vkg_core::oscillation::keyint_check;
use vkg_core::spectral::norms::lp_norm;
use vkg_core::spectral::{BoxGrid, SpectralField};
use wasm_bindgen::prelude::*;

fn js(e: vkg_core::Error) -> JsError {
    JsError::new(&e.to_string())
}

/// Free Klein-Gordon evolution of a Gaussian `φ₀`.
#[wasm_bindgen]
pub struct KgPulse {
    grid: BoxGrid,
    state: FieldState,
}

#[wasm_bindgen]
impl KgPulse {
    #[wasm_bindgen(constructor)]
    pub fn new(points: usize, half_length: f64, width: f64, momentum: f64) -> Result<KgPulse, JsError> {
        let grid = BoxGrid::new(1, half_length, points).map_err(js)?;
        let phi0 = SpectralField::sample(grid, |x| (-(x[0] / width).powi(2)).exp() * (momentum * x[0]).cos());
        let phi1 = SpectralField::zeros(grid, 1);
        let state = FieldState::new(phi0, phi1).map_err(js)?;
        Ok(KgPulse { grid, state })
    }

    /// Exact propagation by `dt`.
    pub fn advance(&mut self, dt: f64) {
        self.state = self.state.propagate_homogeneous(dt);
    }

    pub fn time(&self) -> f64 {
        self.state.time()
    }

    pub fn x(&self) -> Vec<f64> {
        (0..self.grid.points()).map(|j| self.grid.coordinate(j)).collect()
    }

    pub fn phi(&self) -> Result<Vec<f64>, JsError> {
        self.state.phi().to_real_scalar().map_err(js)
    }

    pub fn sup_norm(&self) -> f64 {
        lp_norm(self.state.phi(), f64::INFINITY)
    }

    pub fn energy(&self) -> f64 {
        self.state.energy()
    }
}

/// The coupled 1-D system on a small lattice.
#[wasm_bindgen]
pub struct PhaseSpace {
    sim: Simulation,
}

#[wasm_bindgen]
impl PhaseSpace {
    #[wasm_bindgen(constructor)]
    pub fn new(epsilon0: f64, phi0_scale: f64, coupling: bool) -> Result<PhaseSpace, JsError> {
        let config = RunConfig {
            half_length: 24.0,
            grid_points: 128,
            velocity_points: 64,
            dt: 0.05,
            horizon: 17.0,
            epsilon0,
            phi0_scale,
            coupling,
            ..RunConfig::default()
        };
        Ok(PhaseSpace { sim: Simulation::new(&config).map_err(js)? })
    }

    /// Steps forward, stopping at the pre-wrap horizon; returns the steps taken.
    pub fn advance(&mut self, steps: usize) -> Result<usize, JsError> {
        let left = self.sim.config().steps() - self.sim.step_index();
        let n = steps.min(left);
        for _ in 0..n {
            self.sim.step().map_err(js)?;
        }
        Ok(n)
    }

    pub fn time(&self) -> f64 {
        self.sim.time()
    }

    pub fn horizon(&self) -> f64 {
        self.sim.config().horizon
    }

    pub fn nx(&self) -> usize {
        self.sim.config().grid_points
    }

    pub fn nv(&self) -> usize {
        self.sim.config().velocity_points
    }

    pub fn half_length(&self) -> f64 {
        self.sim.config().half_length
    }

    pub fn v_max(&self) -> f64 {
        self.sim.config().v_max
    }

    /// `f` on the lattice, row `iv`, column `ix`.
    pub fn f(&self) -> Vec<f64> {
        self.sim.distribution().values().map(<[f64]>::to_vec).unwrap_or_default()
    }

    pub fn density(&self) -> Result<Vec<f64>, JsError> {
        self.sim.density().to_real_scalar().map_err(js)
    }

    pub fn electric(&self) -> Result<Vec<f64>, JsError> {
        self.sim.state().electric_field().to_real_scalar().map_err(js)
    }

    /// `[‖ρ‖∞, ‖E‖∞, ‖E^osc₊‖∞, ‖E^r‖∞]`.
    pub fn norms(&self) -> Result<Vec<f64>, JsError> {
        let st = self.sim.state();
        Ok(vec![
            lp_norm(self.sim.density(), f64::INFINITY),
            lp_norm(&st.electric_field(), f64::INFINITY),
            lp_norm(&st.oscillatory_field(Sign::Plus), f64::INFINITY),
            lp_norm(&remainder_field(st).map_err(js)?, f64::INFINITY),
        ])
    }
}

/// Both sides of the integrated-oscillation identity for one mode:
/// `[lhs.re, lhs.im, rhs.re, rhs.im, residual]`.
#[wasm_bindgen]
pub fn keyint(plus: bool, k: f64, v: f64, x: f64, t: f64) -> Result<Vec<f64>, JsError> {
    let sign = if plus { Sign::Plus } else { Sign::Minus };
    let s = keyint_check(sign, &[k, 0.0, 0.0], &[v, 0.0, 0.0], &[x, 0.0, 0.0], t).map_err(js)?;
    Ok(vec![s.lhs.re, s.lhs.im, s.rhs.re, s.rhs.im, s.residual])
}

/// Least-squares log-log slope on `[t0, t1]`: `[exponent, rms residual]`.
#[wasm_bindgen]
pub fn fit_power_law(times: Vec<f64>, values: Vec<f64>, t0: f64, t1: f64) -> Result<Vec<f64>, JsError> {
    let (g, r) = fit_decay_exponent(&times, &values, (t0, t1)).map_err(js)?;
    Ok(vec![g, r])
}
