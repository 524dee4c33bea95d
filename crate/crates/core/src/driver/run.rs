use log::{debug, info};

use super::config::{RunConfig, SolverMode};
use crate::kg::{FieldState, Sign};
use crate::spectral::{norm, NormSpec, SpectralField};
use crate::transport::{Distribution, RunHistory};
use crate::{Error, Result};

/// One row of the norm time series.
#[derive(Debug, Clone, PartialEq)]
pub struct NormRecord {
    pub time: f64,
    pub quantity: String,
    pub norm: String,
    pub value: f64,
}

/// What an observer sees after each completed step (and once at `t = 0`).
pub struct StepContext<'a> {
    pub config: &'a RunConfig,
    pub step: usize,
    pub time: f64,
    pub is_final: bool,
    pub state: &'a FieldState,
    pub dist: &'a Distribution,
    pub density: &'a SpectralField,
}

pub trait StepObserver {
    fn observe(&mut self, ctx: &StepContext<'_>) -> Result<()>;

    /// Called once after the last step.
    fn finish(&mut self, _output: &RunOutput) -> Result<()> {
        Ok(())
    }
}

#[derive(Debug, Clone, Copy)]
pub struct RunOptions {
    /// Keep `Ê`, `B̂±`, `ρ̂` at every step for trajectory analysis.
    pub keep_history: bool,
    /// Record the per-step norm series.
    pub record_norms: bool,
}

impl Default for RunOptions {
    fn default() -> Self {
        Self { keep_history: true, record_norms: true }
    }
}

/// Result of a run held in memory.
#[derive(Debug, Clone)]
pub struct RunOutput {
    pub config: RunConfig,
    pub history: Option<RunHistory>,
    pub state: FieldState,
    pub dist: Distribution,
    pub initial_dist: Distribution,
    pub norms: Vec<NormRecord>,
}

impl RunOutput {
    /// `(times, values)` of one recorded series.
    pub fn series(&self, quantity: &str, norm: &str) -> Result<(Vec<f64>, Vec<f64>)> {
        series_of(&self.norms, quantity, norm)
    }
}

pub fn series_of(records: &[NormRecord], quantity: &str, norm: &str) -> Result<(Vec<f64>, Vec<f64>)> {
    let (t, v): (Vec<f64>, Vec<f64>) =
        records.iter().filter(|r| r.quantity == quantity && r.norm == norm).map(|r| (r.time, r.value)).unzip();
    if t.is_empty() {
        return Err(Error::Lookup(format!("no series '{quantity}' in norm '{norm}'")));
    }
    Ok((t, v))
}

/// Builds the initial field state and distribution of a config.
pub fn initial_conditions(config: &RunConfig) -> Result<(FieldState, Distribution)> {
    config.validate()?;
    let data = config.initial_data();
    let x = config.x_grid()?;
    let state = FieldState::new(data.phi0_field(x), data.phi1_field(x))?;
    let dist = match config.mode {
        SolverMode::Grid => Distribution::grid(data, x, config.v_grid()?)?,
        SolverMode::Particle => {
            let jitter = config.jitter.then_some(config.seed);
            Distribution::particles(data, x, config.particles, jitter)?
        }
    };
    Ok((state, dist))
}

/// `E^r = E − Σ± E^osc±`.
pub fn remainder_field(state: &FieldState) -> Result<SpectralField> {
    let mut r = state.electric_field();
    for sign in Sign::BOTH {
        r = r.sub(&state.oscillatory_field(sign))?;
    }
    Ok(r)
}

const LP: [(f64, &str); 3] = [(1.0, "L1"), (2.0, "L2"), (f64::INFINITY, "Linf")];

fn record_norms(
    out: &mut Vec<NormRecord>,
    t: f64,
    state: &FieldState,
    dist: &Distribution,
    rho: &SpectralField,
) -> Result<()> {
    let mut put = |q: &str, n: &str, v: f64| {
        out.push(NormRecord { time: t, quantity: q.to_string(), norm: n.to_string(), value: v })
    };
    for (p, name) in LP {
        put("rho", name, norm(rho, NormSpec::Lp(p))?);
    }
    let e = state.electric_field();
    let er = remainder_field(state)?;
    for (p, name) in &LP[1..] {
        put("E", name, norm(&e, NormSpec::Lp(*p))?);
        put("E_r", name, norm(&er, NormSpec::Lp(*p))?);
        for sign in Sign::BOTH {
            let q = format!("E_osc_{}", sign.label());
            put(&q, name, norm(&state.oscillatory_field(sign), NormSpec::Lp(*p))?);
        }
    }
    put("phi", "Linf", norm(state.phi(), NormSpec::Lp(f64::INFINITY))?);
    put("energy", "value", state.energy());
    put("mass", "value", dist.mass());
    Ok(())
}

fn real_samples(field: &SpectralField) -> Result<Vec<Vec<f64>>> {
    field.to_real()
}

/// Stateful Strang-split stepper for one config.
///
/// Each step drifts `Δt/2`, kicks `Δt` with the field at the half step,
/// drifts `Δt/2`, then advances the field exactly with the Duhamel source
/// sampled at `t, t+Δt/2, t+Δt`. With `coupling = false` the density does not
/// source the field and the field does not act on particles.
#[derive(Debug, Clone)]
pub struct Simulation {
    config: RunConfig,
    step: usize,
    state: FieldState,
    dist: Distribution,
    rho: SpectralField,
}

impl Simulation {
    pub fn new(config: &RunConfig) -> Result<Self> {
        let (state, dist) = initial_conditions(config)?;
        let rho = dist.density()?;
        Ok(Self { config: config.clone(), step: 0, state, dist, rho })
    }

    pub fn config(&self) -> &RunConfig {
        &self.config
    }

    pub fn step_index(&self) -> usize {
        self.step
    }

    pub fn time(&self) -> f64 {
        self.state.time()
    }

    pub fn state(&self) -> &FieldState {
        &self.state
    }

    pub fn distribution(&self) -> &Distribution {
        &self.dist
    }

    pub fn density(&self) -> &SpectralField {
        &self.rho
    }

    /// Advances by one `Δt`.
    pub fn step(&mut self) -> Result<()> {
        let dt = self.config.dt;
        let rule = self.config.quadrature;
        let t = self.state.time();
        self.dist.drift(0.5 * dt);
        let rho_h = self.dist.density()?;
        if self.config.coupling {
            let half = self.state.duhamel_step(&[(t, &self.rho), (t + 0.5 * dt, &rho_h)], rule)?;
            self.dist.kick(dt, &real_samples(&half.electric_field())?)?;
        }
        self.dist.drift(0.5 * dt);
        let rho_next = self.dist.density()?;
        let t1 = (self.step + 1) as f64 * dt;
        self.state = if self.config.coupling {
            self.state.duhamel_step(&[(t, &self.rho), (t + 0.5 * dt, &rho_h), (t1, &rho_next)], rule)?
        } else {
            self.state.propagate_homogeneous(dt)
        };
        self.rho = rho_next;
        self.step += 1;
        Ok(())
    }

    fn context(&self) -> StepContext<'_> {
        StepContext {
            config: &self.config,
            step: self.step,
            time: self.state.time(),
            is_final: self.step == self.config.steps(),
            state: &self.state,
            dist: &self.dist,
            density: &self.rho,
        }
    }
}

/// Runs a config over `[0, T]`, calling observers at `t = 0` and after every step.
pub fn run(config: &RunConfig, options: RunOptions, observers: &mut [&mut dyn StepObserver]) -> Result<RunOutput> {
    let mut sim = Simulation::new(config)?;
    let initial_dist = sim.dist.clone();
    let x = config.x_grid()?;
    let steps = config.steps();
    let mut history = options.keep_history.then(|| RunHistory::new(x));
    let mut norms = Vec::new();
    // the history holds the force on particles and the density sourcing the field
    let coupling = config.coupling;
    let push = |h: &mut Option<RunHistory>, sim: &Simulation| {
        if let Some(h) = h {
            let st = &sim.state;
            let (e, src) = if coupling {
                (st.electric_field(), sim.rho.clone())
            } else {
                (SpectralField::zeros(x, x.dim()), SpectralField::zeros(x, 1))
            };
            h.push(st.time(), e, [st.profile(Sign::Plus).clone(), st.profile(Sign::Minus).clone()], src);
        }
    };
    info!("run: {} steps of {}, mode {}, coupling {}", steps, config.dt, config.mode, config.coupling);
    loop {
        push(&mut history, &sim);
        if options.record_norms {
            record_norms(&mut norms, sim.time(), &sim.state, &sim.dist, &sim.rho)?;
        }
        let ctx = sim.context();
        for o in observers.iter_mut() {
            o.observe(&ctx)?;
        }
        if sim.step == steps {
            break;
        }
        sim.step()?;
        if sim.step % 100 == 0 {
            debug!("step {} / {steps}, t = {:.3}", sim.step, sim.time());
        }
    }
    let Simulation { state, dist, .. } = sim;
    let output = RunOutput { config: config.clone(), history, state, dist, initial_dist, norms };
    for o in observers.iter_mut() {
        o.finish(&output)?;
    }
    Ok(output)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> RunConfig {
        RunConfig {
            half_length: 16.0,
            grid_points: 128,
            velocity_points: 64,
            dt: 0.1,
            horizon: 2.0,
            ..RunConfig::default()
        }
    }

    #[test]
    fn uncoupled_field_is_linear_klein_gordon() {
        let c = RunConfig { coupling: false, phi1_scale: 0.5, ..small() };
        let out = run(&c, RunOptions::default(), &mut []).unwrap();
        let (s0, _) = initial_conditions(&c).unwrap();
        let mut lin = s0.clone();
        for _ in 0..c.steps() {
            lin = lin.propagate_homogeneous(c.dt);
        }
        let diff = out.state.phi().sub(lin.phi()).unwrap().max_coefficient();
        assert!(diff < 1e-12, "{diff}");
        let direct = s0.propagate_homogeneous(c.horizon);
        let diff = out.state.phi().sub(direct.phi()).unwrap().max_coefficient();
        assert!(diff < 1e-12 * s0.phi().max_coefficient().max(1.0), "{diff}");
        let (_, er) = out.series("E_r", "Linf").unwrap();
        assert!(er.iter().all(|v| *v < 1e-14), "{er:?}");
    }

    #[test]
    fn uncoupled_density_is_free_streaming() {
        let c = RunConfig { coupling: false, ..small() };
        let out = run(&c, RunOptions::default(), &mut []).unwrap();
        let mut free = out.initial_dist.clone();
        free.drift(c.horizon);
        let a = out.dist.density().unwrap();
        let b = free.density().unwrap();
        assert!(a.sub(&b).unwrap().max_coefficient() < 1e-13 * b.max_coefficient());
    }

    #[test]
    fn coupled_run_conserves_mass_and_is_deterministic() {
        let c = small();
        let a = run(&c, RunOptions::default(), &mut []).unwrap();
        let b = run(&c, RunOptions::default(), &mut []).unwrap();
        assert_eq!(a.norms, b.norms);
        let (_, m) = a.series("mass", "value").unwrap();
        assert!((m[m.len() - 1] - m[0]).abs() < 1e-12 * m[0]);
        assert_eq!(a.history.as_ref().unwrap().times().len(), c.steps() + 1);
        assert!(a.series("nothing", "L2").is_err());
    }

    #[test]
    fn observers_see_every_step() {
        struct Count(usize, bool);
        impl StepObserver for Count {
            fn observe(&mut self, ctx: &StepContext<'_>) -> Result<()> {
                self.0 += 1;
                self.1 |= ctx.is_final;
                Ok(())
            }
        }
        let c = small();
        let mut k = Count(0, false);
        run(&c, RunOptions { keep_history: false, record_norms: false }, &mut [&mut k]).unwrap();
        assert_eq!(k.0, c.steps() + 1);
        assert!(k.1);
    }
}
