//! Invariant suites behind `vkg check <suite>`.

use std::fmt;
use std::time::Instant;

use num_complex::Complex64;

use super::config::RunConfig;
use super::run::{run, RunOptions};
use crate::diagnostics::{f_infinity_check, scattering_limits};
use crate::kg::{green_hat, green_hat_dt, green_osc, FieldState, Sign};
use crate::oscillation::{
    keyint_suite, split_field, straightening_decomposition, velocity_decomposition, DuhamelDecoupling,
};
use crate::spectral::inequalities::{bernstein_check, interpolation_check, multiplier_bound_ratio};
use crate::spectral::littlewood_paley::{low_symbol, shell_symbol};
use crate::spectral::{BoxGrid, SpectralField};
use crate::transport::{integrate, CharacteristicBundle, Distribution, InitialData, RunHistory};
use crate::{Error, Point, Result};

pub const SUITES: [&str; 6] = ["green", "bernstein", "keyint", "decomp", "duhamel", "scatter"];

#[derive(Debug, Clone, PartialEq)]
pub struct CheckItem {
    pub name: String,
    pub value: f64,
    /// Human-readable acceptance condition, e.g. `<= 1e-14`.
    pub condition: String,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckReport {
    pub suite: String,
    pub items: Vec<CheckItem>,
    pub seconds: f64,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.items.iter().all(|i| i.passed)
    }

    pub fn item(&self, name: &str) -> Option<&CheckItem> {
        self.items.iter().find(|i| i.name == name)
    }

    /// `suite,item,value,condition,status` lines with a header.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("suite,item,value,condition,status\n");
        for i in &self.items {
            out.push_str(&format!(
                "{},{},{:e},{},{}\n",
                self.suite,
                i.name,
                i.value,
                i.condition,
                if i.passed { "pass" } else { "fail" }
            ));
        }
        out
    }
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_csv())
    }
}

struct Items(Vec<CheckItem>);

impl Items {
    fn le(&mut self, name: &str, value: f64, bound: f64) {
        self.0.push(CheckItem { name: name.into(), value, condition: format!("<= {bound:e}"), passed: value <= bound });
    }

    fn ge(&mut self, name: &str, value: f64, bound: f64) {
        self.0.push(CheckItem { name: name.into(), value, condition: format!(">= {bound}"), passed: value >= bound });
    }

    fn within(&mut self, name: &str, value: f64, lo: f64, hi: f64) {
        self.0.push(CheckItem {
            name: name.into(),
            value,
            condition: format!("in [{lo}, {hi}]"),
            passed: value >= lo && value <= hi,
        });
    }
}

/// Runs one suite by name.
pub fn run_check(suite: &str) -> Result<CheckReport> {
    let start = Instant::now();
    let mut items = Items(Vec::new());
    match suite {
        "green" => green(&mut items)?,
        "bernstein" => bernstein(&mut items)?,
        "keyint" => keyint(&mut items)?,
        "decomp" => decomp(&mut items)?,
        "duhamel" => duhamel(&mut items)?,
        "scatter" => scatter(&mut items)?,
        other => return Err(Error::Lookup(format!("unknown suite '{other}' (expected one of {})", SUITES.join(", ")))),
    }
    Ok(CheckReport { suite: suite.into(), items: items.0, seconds: start.elapsed().as_secs_f64() })
}

fn green(items: &mut Items) -> Result<()> {
    let mut initial = 0.0_f64;
    let mut initial_dt = 0.0_f64;
    let mut split = 0.0_f64;
    for (dim, n) in [(1, 256), (2, 64), (3, 16)] {
        let grid = BoxGrid::new(dim, 12.0, n)?;
        for flat in 0..grid.len() {
            let k = grid.wavevector(flat);
            initial = initial.max(green_hat(0.0, &k).abs());
            initial_dt = initial_dt.max((green_hat_dt(0.0, &k) - 1.0).abs());
            for t in [0.0, 0.37, 1.0, 5.5, 29.9] {
                let sum = green_osc(Sign::Plus, t, &k) + green_osc(Sign::Minus, t, &k);
                split = split.max((sum - Complex64::new(green_hat(t, &k), 0.0)).norm());
            }
        }
    }
    items.le("G(0,k)", initial, 1e-14);
    items.le("dtG(0,k)-1", initial_dt, 1e-14);
    items.le("G-sum_Gosc", split, 1e-14);

    let grid = BoxGrid::new(1, 20.0, 256)?;
    let phi0 = SpectralField::sample(grid, |x| (-x[0] * x[0]).exp());
    let phi1 = SpectralField::sample(grid, |x| x[0] * (-0.5 * x[0] * x[0]).exp());
    let mut state = FieldState::new(phi0, phi1)?;
    let e0 = state.energy();
    let mut drift = 0.0_f64;
    for _ in 0..1000 {
        state = state.propagate_homogeneous(0.05);
        drift = drift.max((state.energy() - e0).abs() / e0);
    }
    items.le("energy_drift_1000_steps", drift, 1e-10);
    Ok(())
}

fn bernstein(items: &mut Items) -> Result<()> {
    let mut pou = 0.0_f64;
    for i in 1..4000 {
        let r = 1e-3 * 1.005f64.powi(i);
        let s: f64 = low_symbol(r) + (1..=24).map(|j| shell_symbol(r, j)).sum::<f64>();
        pou = pou.max((s - 1.0).abs());
    }
    items.le("partition_of_unity", pou, 1e-12);

    let grid = BoxGrid::new(1, 6.0, 256)?;
    let h = SpectralField::sample(grid, |x| {
        (-x[0] * x[0]).exp() * (3.0 * x[0]).cos() + 0.3 * (-(x[0] - 1.0).powi(2) * 4.0).exp()
    });
    let shells = bernstein_check(&h, 0)?;
    let worst = shells.iter().map(|s| s.l2_constant).fold(0.0, f64::max);
    items.le("bernstein_l2_constant", worst, 2.0);

    let f = |n: usize| -> Result<SpectralField> {
        let g = BoxGrid::new(1, 10.0, n)?;
        Ok(SpectralField::sample(g, |x| (-x[0] * x[0]).exp() * (1.0 + 0.5 * x[0].sin())))
    };
    let (a, b) = (f(128)?, f(256)?);
    let l2 = multiplier_bound_ratio(&a, 0.5, 2.0)?;
    items.le("multiplier_l2_ratio", l2, 1.0);
    let m1 = multiplier_bound_ratio(&a, 0.5, f64::INFINITY)?;
    let m2 = multiplier_bound_ratio(&b, 0.5, f64::INFINITY)?;
    items.le("multiplier_linf_stability", (m1 / m2 - 1.0).abs(), 0.05);
    let i1 = interpolation_check(&a, [1, 0, 0], 3)?;
    let i2 = interpolation_check(&b, [1, 0, 0], 3)?;
    items.le("interpolation_ratio_stability", (i1 / i2 - 1.0).abs(), 0.05);
    Ok(())
}

fn keyint(items: &mut Items) -> Result<()> {
    let samples = keyint_suite(100, 2024)?;
    let worst = samples.iter().map(|s| s.residual).fold(0.0, f64::max);
    items.ge("draws", samples.len() as f64, 100.0);
    items.le("max_residual", worst, 1e-10);
    Ok(())
}

/// Short coupled 1-D run used by the refinement suites.
pub fn small_run_config(dt: f64, points: usize) -> RunConfig {
    RunConfig {
        half_length: 20.0,
        grid_points: points,
        velocity_points: points,
        dt,
        horizon: 8.0,
        ..RunConfig::default()
    }
}

pub fn decomposition_probes() -> Vec<(Point, Point)> {
    let mut probes = Vec::new();
    for x in [-2.0, 0.0, 1.5] {
        for v in [-0.5, 0.0, 0.6] {
            probes.push(([x, 0.0, 0.0], [v, 0.0, 0.0]));
        }
    }
    probes
}

/// Maximum velocity-decomposition and straightening (hat) residuals for `s = 2`, `t = 8`.
pub fn decomposition_residuals(dt: f64) -> Result<(f64, f64)> {
    let c = small_run_config(dt, 128);
    let out = run(&c, RunOptions { keep_history: true, record_norms: false }, &mut [])?;
    let h = out.history.as_ref().expect("history kept");
    let split = split_field(h);
    let b = CharacteristicBundle::backward(h, &decomposition_probes(), 8.0, 2.0, dt)?;
    let v = velocity_decomposition(&b, &split)?;
    let s = straightening_decomposition(&b, &split)?;
    Ok((v.max_residual(), s.max_hat_residual()))
}

fn decomp(items: &mut Items) -> Result<()> {
    let (v1, s1) = decomposition_residuals(0.04)?;
    let (v2, s2) = decomposition_residuals(0.02)?;
    items.le("velocity_residual_dt0.04", v1, 1e-5);
    items.le("velocity_residual_dt0.02", v2, 1e-5);
    items.within("velocity_ratio", v1 / v2, 3.5, 4.5);
    items.le("straightening_residual_dt0.04", s1, 1e-5);
    items.le("straightening_residual_dt0.02", s2, 1e-5);
    items.within("straightening_ratio", s1 / s2, 3.5, 4.5);
    Ok(())
}

/// Maximum relative residual of the Duhamel decoupling identity at `t ∈ {4, 8}`.
pub fn duhamel_residual(dt: f64, points: usize) -> Result<f64> {
    let c = small_run_config(dt, points);
    let mut dd = DuhamelDecoupling::new(vec![4.0, 8.0], c.quadrature);
    run(&c, RunOptions { keep_history: false, record_norms: false }, &mut [&mut dd])?;
    Ok(dd.max_relative())
}

fn duhamel(items: &mut Items) -> Result<()> {
    let base = duhamel_residual(0.08, 64)?;
    let fine = duhamel_residual(0.04, 128)?;
    items.le("relative_residual_base", base, 0.05);
    items.le("relative_residual_refined", fine, 0.05);
    items.ge("refinement_ratio", base / fine, 1.8);
    Ok(())
}

/// History with a spatially smooth field switched off for `t ≥ t_off`.
pub fn frozen_history(t_off: f64, steps: usize, dt: f64) -> Result<RunHistory> {
    let grid = BoxGrid::new(1, 4.0 * std::f64::consts::PI, 64)?;
    let mut h = RunHistory::new(grid);
    let z = FieldState::zeros(grid);
    for n in 0..=steps {
        let t = n as f64 * dt;
        let amp = if t < t_off { 0.01 } else { 0.0 };
        let e = SpectralField::sample(grid, |x| amp * (0.5 * x[0]).sin());
        let b = [z.profile(Sign::Plus).clone(), z.profile(Sign::Minus).clone()];
        h.push(t, e, b, SpectralField::zeros(grid, 1));
    }
    Ok(h)
}

pub fn frozen_data() -> InitialData {
    InitialData {
        dim: 1,
        epsilon0: 1e-3,
        x_width: 1.0,
        v_radius: 1.0,
        phi0_scale: 0.0,
        phi0_width: 1.0,
        phi1_scale: 0.0,
        phi1_width: 1.0,
    }
}

fn scatter(items: &mut Items) -> Result<()> {
    let probes =
        vec![([0.0; 3], [0.3, 0.0, 0.0]), ([1.0, 0.0, 0.0], [-0.2, 0.0, 0.0]), ([-2.0, 0.0, 0.0], [0.5, 0.0, 0.0])];
    let dt = 0.1;
    let h = frozen_history(2.0, 160, dt)?;
    let split = split_field(&h);
    let mut exact = 0.0_f64;
    let mut bars = Vec::new();
    let mut report = None;
    for t0 in [4.0, 2.0] {
        let r = scattering_limits(&split, &probes, t0, 16.0, dt, 1.0)?;
        for (p, vi) in probes.iter().zip(&r.v_infinity) {
            let tr = integrate(&h, &p.0, &p.1, 0.0, 2.0, dt)?;
            let vt = tr.end().1;
            exact = exact.max((0..3).map(|a| (vi[a] - vt[a]).abs()).fold(0.0, f64::max));
        }
        bars.push(r.max_error_bar());
        report = Some(r);
    }
    items.le("frozen_v_infinity_error", exact, 1e-14);
    items.le("error_bar_growth_with_depth", bars[1] - bars[0], 0.0);
    let x = *h.grid();
    let v = BoxGrid::new(1, 1.5, 64)?;
    let dist = Distribution::grid(frozen_data(), x, v)?;
    let defect = f_infinity_check(&dist, &h, report.as_ref().expect("report"), 4.0, 8.0, dt)?;
    items.le("frozen_f_infinity_defect", defect, 1e-14);

    let zero = frozen_history(0.0, 160, dt)?;
    let zsplit = split_field(&zero);
    let r = scattering_limits(&zsplit, &probes, 2.0, 16.0, dt, 1.0)?;
    let dv = probes
        .iter()
        .zip(&r.v_infinity)
        .map(|(p, vi)| (0..3).map(|a| (vi[a] - p.1[a]).abs()).fold(0.0, f64::max))
        .fold(0.0, f64::max);
    items.le("zero_field_v_infinity_error", dv, 0.0);
    let pd = r.position_defect.iter().map(|d| d.1).fold(0.0, f64::max);
    items.le("zero_field_position_defect", pd, 1e-13);
    Ok(())
}
