use std::fmt::Write as _;
use std::path::Path;
use std::str::FromStr;

use sha2::{Digest, Sha256};

use crate::quadrature::QuadratureRule;
use crate::spectral::BoxGrid;
use crate::transport::InitialData;
use crate::{Error, Result};

/// Transport discretisation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolverMode {
    Grid,
    Particle,
}

impl FromStr for SolverMode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "grid" => Ok(SolverMode::Grid),
            "particle" => Ok(SolverMode::Particle),
            other => Err(Error::Config(format!("mode must be grid or particle, got '{other}'"))),
        }
    }
}

impl std::fmt::Display for SolverMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            SolverMode::Grid => "grid",
            SolverMode::Particle => "particle",
        })
    }
}

/// Everything a run depends on. Parsed from flat `key = value` text.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub dim: usize,
    pub half_length: f64,
    pub grid_points: usize,
    pub velocity_points: usize,
    pub v_max: f64,
    pub dt: f64,
    pub horizon: f64,
    pub mode: SolverMode,
    pub particles: usize,
    pub jitter: bool,
    pub epsilon0: f64,
    pub x_width: f64,
    pub v_radius: f64,
    pub phi0_scale: f64,
    pub phi0_width: f64,
    pub phi1_scale: f64,
    pub phi1_width: f64,
    pub coupling: bool,
    pub series_order: usize,
    pub alpha0: usize,
    pub seed: u64,
    pub output_every: usize,
    pub quadrature: QuadratureRule,
}

impl Default for RunConfig {
    /// The 1-D reference experiment.
    fn default() -> Self {
        Self {
            dim: 1,
            half_length: 40.0,
            grid_points: 256,
            velocity_points: 256,
            v_max: 1.5,
            dt: 0.02,
            horizon: 30.0,
            mode: SolverMode::Grid,
            particles: 1 << 20,
            jitter: false,
            epsilon0: 1e-3,
            x_width: 1.0,
            v_radius: 1.0,
            phi0_scale: 1.0,
            phi0_width: 1.0,
            phi1_scale: 0.0,
            phi1_width: 1.0,
            coupling: true,
            series_order: 20,
            alpha0: 8,
            seed: 0,
            output_every: 250,
            quadrature: QuadratureRule::Trapezoid,
        }
    }
}

fn parse<T: FromStr>(key: &str, value: &str) -> Result<T> {
    value.parse().map_err(|_| Error::Config(format!("{key}: cannot parse '{value}'")))
}

fn parse_bool(key: &str, value: &str) -> Result<bool> {
    match value {
        "true" | "yes" | "1" => Ok(true),
        "false" | "no" | "0" => Ok(false),
        _ => Err(Error::Config(format!("{key}: expected true or false, got '{value}'"))),
    }
}

impl RunConfig {
    /// Parses `key = value` lines; `#` starts a comment. Unknown or repeated
    /// keys are errors; missing keys keep their defaults.
    pub fn parse(text: &str) -> Result<Self> {
        let mut c = RunConfig::default();
        let mut seen = std::collections::HashSet::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("line {}: expected key = value", lineno + 1)))?;
            let (key, value) = (key.trim(), value.trim());
            if !seen.insert(key.to_string()) {
                return Err(Error::Config(format!("line {}: duplicate key '{key}'", lineno + 1)));
            }
            match key {
                "dim" => c.dim = parse(key, value)?,
                "half_length" => c.half_length = parse(key, value)?,
                "grid_points" => c.grid_points = parse(key, value)?,
                "velocity_points" => c.velocity_points = parse(key, value)?,
                "v_max" => c.v_max = parse(key, value)?,
                "dt" => c.dt = parse(key, value)?,
                "horizon" => c.horizon = parse(key, value)?,
                "mode" => c.mode = parse(key, value)?,
                "particles" => c.particles = parse(key, value)?,
                "jitter" => c.jitter = parse_bool(key, value)?,
                "epsilon0" => c.epsilon0 = parse(key, value)?,
                "x_width" => c.x_width = parse(key, value)?,
                "v_radius" => c.v_radius = parse(key, value)?,
                "phi0_scale" => c.phi0_scale = parse(key, value)?,
                "phi0_width" => c.phi0_width = parse(key, value)?,
                "phi1_scale" => c.phi1_scale = parse(key, value)?,
                "phi1_width" => c.phi1_width = parse(key, value)?,
                "coupling" => c.coupling = parse_bool(key, value)?,
                "series_order" => c.series_order = parse(key, value)?,
                "alpha0" => c.alpha0 = parse(key, value)?,
                "seed" => c.seed = parse(key, value)?,
                "output_every" => c.output_every = parse(key, value)?,
                "quadrature" => c.quadrature = parse(key, value)?,
                other => return Err(Error::Config(format!("line {}: unknown key '{other}'", lineno + 1))),
            }
        }
        c.validate()?;
        Ok(c)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    /// Canonical text: every key, fixed order, round-trip exact floats.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let mut put = |k: &str, v: String| {
            let _ = writeln!(s, "{k} = {v}");
        };
        put("dim", self.dim.to_string());
        put("half_length", format!("{:?}", self.half_length));
        put("grid_points", self.grid_points.to_string());
        put("velocity_points", self.velocity_points.to_string());
        put("v_max", format!("{:?}", self.v_max));
        put("dt", format!("{:?}", self.dt));
        put("horizon", format!("{:?}", self.horizon));
        put("mode", self.mode.to_string());
        put("particles", self.particles.to_string());
        put("jitter", self.jitter.to_string());
        put("epsilon0", format!("{:?}", self.epsilon0));
        put("x_width", format!("{:?}", self.x_width));
        put("v_radius", format!("{:?}", self.v_radius));
        put("phi0_scale", format!("{:?}", self.phi0_scale));
        put("phi0_width", format!("{:?}", self.phi0_width));
        put("phi1_scale", format!("{:?}", self.phi1_scale));
        put("phi1_width", format!("{:?}", self.phi1_width));
        put("coupling", self.coupling.to_string());
        put("series_order", self.series_order.to_string());
        put("alpha0", self.alpha0.to_string());
        put("seed", self.seed.to_string());
        put("output_every", self.output_every.to_string());
        put("quadrature", self.quadrature.to_string());
        s
    }

    /// SHA-256 of the canonical text, hex encoded.
    pub fn hash(&self) -> String {
        let digest = Sha256::digest(self.to_text().as_bytes());
        digest.iter().map(|b| format!("{b:02x}")).collect()
    }

    pub fn initial_data(&self) -> InitialData {
        InitialData {
            dim: self.dim,
            epsilon0: self.epsilon0,
            x_width: self.x_width,
            v_radius: self.v_radius,
            phi0_scale: self.phi0_scale,
            phi0_width: self.phi0_width,
            phi1_scale: self.phi1_scale,
            phi1_width: self.phi1_width,
        }
    }

    pub fn x_grid(&self) -> Result<BoxGrid> {
        BoxGrid::new(self.dim, self.half_length, self.grid_points)
    }

    pub fn v_grid(&self) -> Result<BoxGrid> {
        BoxGrid::new(self.dim, self.v_max, self.velocity_points)
    }

    /// `t_wrap = L − R_support`.
    pub fn wrap_time(&self) -> f64 {
        self.half_length - self.initial_data().support_radius()
    }

    pub fn steps(&self) -> usize {
        (self.horizon / self.dt).round() as usize
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Config(m));
        if !(1..=3).contains(&self.dim) {
            return bad(format!("dim = {} not in 1..=3", self.dim));
        }
        let grid = self.x_grid().map_err(|e| Error::Config(e.to_string()))?;
        for (name, v) in [
            ("dt", self.dt),
            ("horizon", self.horizon),
            ("epsilon0", self.epsilon0),
            ("x_width", self.x_width),
            ("v_radius", self.v_radius),
            ("phi0_width", self.phi0_width),
            ("phi1_width", self.phi1_width),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return bad(format!("{name} = {v} must be positive"));
            }
        }
        if !(self.phi0_scale.is_finite() && self.phi1_scale.is_finite()) {
            return bad("phi scales must be finite".into());
        }
        let n = self.horizon / self.dt;
        if (n - n.round()).abs() > 1e-9 * n.max(1.0) {
            return bad(format!("horizon {} is not a multiple of dt {}", self.horizon, self.dt));
        }
        if self.dt > 0.5 * grid.spacing() {
            return bad(format!("dt = {} exceeds 0.5 dx = {}", self.dt, 0.5 * grid.spacing()));
        }
        let t_wrap = self.wrap_time();
        if self.horizon >= t_wrap {
            return Err(Error::Wrap(format!(
                "horizon {} must stay below t_wrap = L - R_support = {t_wrap}",
                self.horizon
            )));
        }
        if self.output_every == 0 {
            return bad("output_every must be positive".into());
        }
        if self.alpha0 < 2 {
            return bad("alpha0 must be at least 2".into());
        }
        match self.mode {
            SolverMode::Grid => {
                if self.dim > 2 {
                    return bad("grid mode supports dim <= 2; use mode = particle".into());
                }
                self.v_grid().map_err(|e| Error::Config(e.to_string()))?;
                if self.v_max < self.v_radius + 4.0 * self.epsilon0 {
                    return bad(format!(
                        "v_max = {} must be at least v_radius + 4 epsilon0 = {}",
                        self.v_max,
                        self.v_radius + 4.0 * self.epsilon0
                    ));
                }
            }
            SolverMode::Particle => {
                if self.particles < 4usize.pow(self.dim as u32) {
                    return bad(format!("particles = {} is too small", self.particles));
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_is_valid_and_round_trips() {
        let c = RunConfig::default();
        c.validate().unwrap();
        let back = RunConfig::parse(&c.to_text()).unwrap();
        assert_eq!(back, c);
        assert_eq!(back.hash(), c.hash());
        assert_eq!(c.steps(), 1500);
    }

    #[test]
    fn comments_and_defaults() {
        let c = RunConfig::parse("# reference\n dt = 0.01 # finer\n\nmode = grid\n").unwrap();
        assert_eq!(c.dt, 0.01);
        assert_ne!(c.hash(), RunConfig::default().hash());
    }

    #[test]
    fn rejects_bad_input() {
        assert!(RunConfig::parse("colour = red").is_err());
        assert!(RunConfig::parse("dt = 0.02\ndt = 0.01").is_err());
        assert!(RunConfig::parse("dt = fast").is_err());
        assert!(RunConfig::parse("dt = 0.5").is_err());
        assert!(matches!(RunConfig::parse("horizon = 36"), Err(Error::Wrap(_))));
        assert!(RunConfig::parse("v_max = 1.0").is_err());
        assert!(RunConfig::parse("dim = 3").is_err());
        assert!(RunConfig::parse("dim = 3\nmode = particle\ngrid_points = 32").is_ok());
    }
}
