use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::initial::InitialData;
use super::spline::PeriodicSpline2;
use super::velocity::relativistic_velocity;
use crate::spectral::{fft, sum, BoxGrid, SpectralField};
use crate::{par, Error, Point, Result};

/// Relative level of `f` on the outermost velocity cells that counts as the
/// support touching the lattice boundary.
pub const SUPPORT_TOLERANCE: f64 = 1e-5;

/// Fraction of the Nyquist wavenumber kept after particle deposition.
pub const PARTICLE_CUTOFF: f64 = 2.0 / 3.0;

/// How `f₀` is evaluated at characteristic feet.
#[derive(Debug, Clone)]
pub enum InitialProfile {
    Analytic { data: InitialData, x: BoxGrid },
    Lattice { spline: PeriodicSpline2, v_max: f64, v_radius: f64 },
}

impl InitialProfile {
    pub fn eval(&self, x: &Point, v: &Point) -> Result<f64> {
        match self {
            InitialProfile::Analytic { data, x: grid } => {
                let mut xw = *x;
                for c in xw.iter_mut().take(grid.dim()) {
                    *c = grid.wrap(*c);
                }
                Ok(data.f0(&xw, v))
            }
            InitialProfile::Lattice { spline, v_max, v_radius } => {
                if v[0].abs() >= *v_max {
                    if v[0].abs() >= *v_radius {
                        return Ok(0.0);
                    }
                    return Err(Error::SupportViolation(format!(
                        "foot velocity {} leaves the lattice [-{v_max}, {v_max}]",
                        v[0]
                    )));
                }
                Ok(spline.eval(x[0], v[0]))
            }
        }
    }
}

#[derive(Debug, Clone)]
enum Repr {
    /// Values laid out `[iv][ix]` (x fastest).
    Grid {
        v: BoxGrid,
        values: Vec<f64>,
    },
    Particles {
        pos: Vec<Point>,
        vel: Vec<Point>,
        weight: Vec<f64>,
    },
}

/// The kinetic unknown `f(t, x, v)` in grid or particle form.
#[derive(Debug, Clone)]
pub struct Distribution {
    x: BoxGrid,
    repr: Repr,
    initial: InitialProfile,
}

fn shift_symbol(grid: &BoxGrid, flat: usize, shift: &Point) -> Complex64 {
    let k = grid.wavevector(flat);
    let nyq = grid.nyquist_axes(flat);
    let mut s = Complex64::new(1.0, 0.0);
    for a in 0..grid.dim() {
        let phase = k[a] * shift[a];
        s *= if nyq[a] { Complex64::new(phase.cos(), 0.0) } else { Complex64::from_polar(1.0, -phase) };
    }
    s
}

/// `g(y) ← g(y − shift)` by Fourier interpolation.
fn shift_real(grid: &BoxGrid, data: &mut [f64], shift: &Point) {
    let mut c = fft::forward_real(grid, data);
    for (flat, z) in c.iter_mut().enumerate() {
        *z *= shift_symbol(grid, flat, shift);
    }
    data.copy_from_slice(&fft::inverse_real(grid, &c));
}

fn transpose(data: &[f64], rows: usize, cols: usize) -> Vec<f64> {
    let mut out = vec![0.0; data.len()];
    for r in 0..rows {
        for c in 0..cols {
            out[c * rows + r] = data[r * cols + c];
        }
    }
    out
}

fn tsc_weights(delta: f64) -> [f64; 3] {
    [0.5 * (0.5 - delta).powi(2), 0.75 - delta * delta, 0.5 * (0.5 + delta).powi(2)]
}

/// Grid indices and weights of the triangular-shaped-cloud stencil at `x`.
fn tsc_stencil(grid: &BoxGrid, x: &Point) -> Vec<(usize, f64)> {
    let n = grid.points() as i64;
    let d = grid.dim();
    let mut axes = [[(0usize, 0.0f64); 3]; 3];
    for (a, ax) in axes.iter_mut().enumerate().take(d) {
        let xi = (grid.wrap(x[a]) + grid.half_length()) / grid.spacing();
        let j = xi.round();
        let w = tsc_weights(xi - j);
        for (m, slot) in ax.iter_mut().enumerate() {
            *slot = ((j as i64 - 1 + m as i64).rem_euclid(n) as usize, w[m]);
        }
    }
    let mut out = Vec::with_capacity(3usize.pow(d as u32));
    let count = 3usize.pow(d as u32);
    for m in 0..count {
        let mut idx = [0usize; 3];
        let mut w = 1.0;
        let mut r = m;
        for a in 0..d {
            let (i, wa) = axes[a][r % 3];
            idx[a] = i;
            w *= wa;
            r /= 3;
        }
        out.push((grid.ravel(idx), w));
    }
    out
}

const DEPOSIT_CHUNK: usize = 4096;

impl Distribution {
    /// Semi-Lagrangian lattice over `x × v`, `v` periodic on `[−V_max, V_max)^d`.
    pub fn grid(data: InitialData, x: BoxGrid, v: BoxGrid) -> Result<Self> {
        if x.dim() != v.dim() || x.dim() != data.dim {
            return Err(Error::Dimension("x, v and data dimensions differ".into()));
        }
        if x.dim() > 2 {
            return Err(Error::Dimension("grid mode supports d <= 2; use particles".into()));
        }
        let nx = x.len();
        let values: Vec<f64> = (0..v.len())
            .flat_map(|iv| {
                let vv = v.position(iv);
                (0..nx).map(move |ix| (ix, vv))
            })
            .map(|(ix, vv)| data.f0(&x.position(ix), &vv))
            .collect();
        let dist = Self { x, repr: Repr::Grid { v, values }, initial: InitialProfile::Analytic { data, x } };
        dist.check_support()?;
        Ok(dist)
    }

    /// 1-D lattice data `[iv][ix]`; feet are evaluated with a cubic spline.
    pub fn from_lattice(x: BoxGrid, v: BoxGrid, values: Vec<f64>, v_radius: f64) -> Result<Self> {
        let spline = PeriodicSpline2::new(x, v, &values)?;
        let dist = Self {
            x,
            repr: Repr::Grid { v, values },
            initial: InitialProfile::Lattice { spline, v_max: v.half_length(), v_radius },
        };
        dist.check_support()?;
        Ok(dist)
    }

    /// Weighted particles on a phase-space lattice covering the support of
    /// `f₀`, with `count^{1/2d}` points per axis and optional seeded jitter.
    pub fn particles(data: InitialData, x: BoxGrid, count: usize, jitter_seed: Option<u64>) -> Result<Self> {
        let d = x.dim();
        if d != data.dim {
            return Err(Error::Dimension("x and data dimensions differ".into()));
        }
        let per_axis = ((count as f64).powf(1.0 / (2 * d) as f64).floor() as usize).max(2);
        let rx = (super::initial::GAUSSIAN_SUPPORT_WIDTHS * data.x_width).min(x.half_length());
        let rv = data.v_radius;
        let (hx, hv) = (2.0 * rx / per_axis as f64, 2.0 * rv / per_axis as f64);
        let cell = (hx * hv).powi(d as i32);
        let mut rng = jitter_seed.map(ChaCha8Rng::seed_from_u64);
        let total = per_axis.pow(2 * d as u32);
        let (mut pos, mut vel, mut weight) = (Vec::new(), Vec::new(), Vec::new());
        for m in 0..total {
            let mut r = m;
            let mut xp = [0.0; 3];
            let mut vp = [0.0; 3];
            for a in 0..2 * d {
                let i = r % per_axis;
                r /= per_axis;
                let off = match rng.as_mut() {
                    Some(g) => g.gen_range(-0.5..0.5),
                    None => 0.0,
                };
                if a < d {
                    xp[a] = -rx + (i as f64 + 0.5 + off) * hx;
                } else {
                    vp[a - d] = -rv + (i as f64 + 0.5 + off) * hv;
                }
            }
            let w = data.f0(&xp, &vp) * cell;
            if w > 0.0 {
                pos.push(xp);
                vel.push(vp);
                weight.push(w);
            }
        }
        Ok(Self { x, repr: Repr::Particles { pos, vel, weight }, initial: InitialProfile::Analytic { data, x } })
    }

    pub fn x_grid(&self) -> &BoxGrid {
        &self.x
    }

    pub fn v_grid(&self) -> Option<&BoxGrid> {
        match &self.repr {
            Repr::Grid { v, .. } => Some(v),
            Repr::Particles { .. } => None,
        }
    }

    /// Lattice values `[iv][ix]` in grid mode.
    pub fn values(&self) -> Option<&[f64]> {
        match &self.repr {
            Repr::Grid { values, .. } => Some(values),
            Repr::Particles { .. } => None,
        }
    }

    /// Particle positions, velocities and weights in particle mode.
    pub fn particle_data(&self) -> Option<(&[Point], &[Point], &[f64])> {
        match &self.repr {
            Repr::Particles { pos, vel, weight } => Some((pos, vel, weight)),
            Repr::Grid { .. } => None,
        }
    }

    pub fn is_particles(&self) -> bool {
        matches!(self.repr, Repr::Particles { .. })
    }

    pub fn initial(&self) -> &InitialProfile {
        &self.initial
    }

    /// Free transport `x ← x + τ v̂` over time `tau`.
    pub fn drift(&mut self, tau: f64) {
        let x = self.x;
        match &mut self.repr {
            Repr::Grid { v, values } => {
                let nx = x.len();
                let vg = *v;
                par::for_each_chunk_mut(values, nx, |iv, row| {
                    let vh = relativistic_velocity(&vg.position(iv));
                    let shift = [tau * vh[0], tau * vh[1], tau * vh[2]];
                    shift_real(&x, row, &shift);
                });
            }
            Repr::Particles { pos, vel, .. } => {
                for (p, v) in pos.iter_mut().zip(vel.iter()) {
                    let vh = relativistic_velocity(v);
                    for a in 0..x.dim() {
                        p[a] += tau * vh[a];
                    }
                }
            }
        }
    }

    /// Acceleration `v ← v + τE(x)` with `E` given as real samples on the x grid.
    pub fn kick(&mut self, tau: f64, e: &[Vec<f64>]) -> Result<()> {
        let x = self.x;
        if e.len() != x.dim() || e.iter().any(|c| c.len() != x.len()) {
            return Err(Error::Dimension("field samples do not match the x grid".into()));
        }
        match &mut self.repr {
            Repr::Grid { v, values } => {
                let (nx, nv) = (x.len(), v.len());
                let vg = *v;
                let mut t = transpose(values, nv, nx);
                par::for_each_chunk_mut(&mut t, nv, |ix, row| {
                    let mut shift = [0.0; 3];
                    for a in 0..x.dim() {
                        shift[a] = tau * e[a][ix];
                    }
                    shift_real(&vg, row, &shift);
                });
                *values = transpose(&t, nx, nv);
            }
            Repr::Particles { pos, vel, .. } => {
                for (p, v) in pos.iter().zip(vel.iter_mut()) {
                    let st = tsc_stencil(&x, p);
                    for a in 0..x.dim() {
                        let ea: f64 = st.iter().map(|&(i, w)| w * e[a][i]).sum();
                        v[a] += tau * ea;
                    }
                }
            }
        }
        Ok(())
    }

    /// `ρ = ∫ f dv` as a spectral field.
    pub fn density(&self) -> Result<SpectralField> {
        self.weighted_density(&|_| 1.0)
    }

    /// `∫ f φ(v) dv` as a spectral field.
    pub fn weighted_density(&self, weight: &(dyn Fn(&Point) -> f64 + Sync)) -> Result<SpectralField> {
        let x = self.x;
        match &self.repr {
            Repr::Grid { v, values } => {
                self.check_support()?;
                let nx = x.len();
                let dv = v.cell_volume();
                let w: Vec<f64> = (0..v.len()).map(|iv| weight(&v.position(iv)) * dv).collect();
                let rho: Vec<f64> = par::map_indexed(nx, |ix| {
                    let mut acc = 0.0;
                    for (iv, wv) in w.iter().enumerate() {
                        acc += wv * values[iv * nx + ix];
                    }
                    acc
                });
                SpectralField::from_real(x, &rho)
            }
            Repr::Particles { pos, vel, weight: wp } => {
                let chunks = pos.len().div_ceil(DEPOSIT_CHUNK);
                let buffers: Vec<Vec<f64>> = par::map_indexed(chunks, |c| {
                    let mut buf = vec![0.0; x.len()];
                    let lo = c * DEPOSIT_CHUNK;
                    let hi = (lo + DEPOSIT_CHUNK).min(pos.len());
                    for p in lo..hi {
                        let q = wp[p] * weight(&vel[p]);
                        for (i, w) in tsc_stencil(&x, &pos[p]) {
                            buf[i] += q * w;
                        }
                    }
                    buf
                });
                let inv = 1.0 / x.cell_volume();
                let mut rho = vec![0.0; x.len()];
                for buf in &buffers {
                    for (r, b) in rho.iter_mut().zip(buf) {
                        *r += b;
                    }
                }
                rho.iter_mut().for_each(|r| *r *= inv);
                let field = SpectralField::from_real(x, &rho)?;
                let cut = PARTICLE_CUTOFF * x.nyquist_wavenumber();
                Ok(field.map_coefficients(
                    |_, k, z| {
                        if k.iter().any(|c| c.abs() > cut) {
                            Complex64::new(0.0, 0.0)
                        } else {
                            z
                        }
                    },
                ))
            }
        }
    }

    /// `∫∫ f dx dv`.
    pub fn mass(&self) -> f64 {
        match &self.repr {
            Repr::Grid { v, values } => sum::neumaier(values.iter().copied()) * self.x.cell_volume() * v.cell_volume(),
            Repr::Particles { weight, .. } => sum::neumaier(weight.iter().copied()),
        }
    }

    /// Fails when `f` is non-negligible on the outermost velocity cells.
    pub fn check_support(&self) -> Result<()> {
        let Repr::Grid { v, values } = &self.repr else {
            return Ok(());
        };
        let nx = self.x.len();
        let peak = values.iter().fold(0.0_f64, |m, f| m.max(f.abs()));
        if peak == 0.0 {
            return Ok(());
        }
        let n = v.points();
        let mut edge = 0.0_f64;
        for iv in 0..v.len() {
            let idx = v.unravel(iv);
            if (0..v.dim()).any(|a| idx[a] == 0 || idx[a] == n - 1) {
                let row = &values[iv * nx..(iv + 1) * nx];
                edge = row.iter().fold(edge, |m, f| m.max(f.abs()));
            }
        }
        if edge > SUPPORT_TOLERANCE * peak {
            return Err(Error::SupportViolation(format!(
                "f reaches {:.3e} of its peak on the velocity lattice boundary |v| = {}",
                edge / peak,
                v.half_length()
            )));
        }
        Ok(())
    }

    /// Smallest lattice value relative to the peak (grid mode), a measure of
    /// interpolation undershoot.
    pub fn undershoot(&self) -> f64 {
        match &self.repr {
            Repr::Grid { values, .. } => {
                let peak = values.iter().fold(0.0_f64, |m, f| m.max(*f));
                let low = values.iter().fold(0.0_f64, |m, f| m.min(*f));
                if peak > 0.0 {
                    -low / peak
                } else {
                    0.0
                }
            }
            Repr::Particles { .. } => 0.0,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn data(dim: usize) -> InitialData {
        InitialData {
            dim,
            epsilon0: 1e-3,
            x_width: 1.0,
            v_radius: 1.0,
            phi0_scale: 0.0,
            phi0_width: 1.0,
            phi1_scale: 0.0,
            phi1_width: 1.0,
        }
    }

    #[test]
    fn separable_density_at_t0() {
        let x = BoxGrid::new(1, 10.0, 64).unwrap();
        let v = BoxGrid::new(1, 1.5, 64).unwrap();
        let d = data(1);
        let f = Distribution::grid(d, x, v).unwrap();
        let rho = f.density().unwrap().to_real_scalar().unwrap();
        let hv: f64 = (0..64).map(|j| d.f0(&[0.0; 3], &v.position(j)) * v.spacing()).sum::<f64>() / 1e-3;
        for (i, r) in rho.iter().enumerate() {
            let g = 1e-3 * (-x.coordinate(i).powi(2) / 2.0).exp();
            assert!((r - g * hv).abs() < 1e-15);
        }
    }

    #[test]
    fn grid_mass_conserved() {
        let x = BoxGrid::new(1, 10.0, 64).unwrap();
        let v = BoxGrid::new(1, 1.5, 64).unwrap();
        let mut f = Distribution::grid(data(1), x, v).unwrap();
        let m0 = f.mass();
        let e: Vec<f64> = (0..64).map(|i| 1e-3 * (x.coordinate(i) * 0.6).sin()).collect();
        for _ in 0..50 {
            f.drift(0.05);
            f.kick(0.1, std::slice::from_ref(&e)).unwrap();
            f.drift(0.05);
        }
        assert!((f.mass() - m0).abs() < 1e-12 * m0);
    }

    #[test]
    fn particle_mass_exact_and_positive() {
        let x = BoxGrid::new(1, 10.0, 64).unwrap();
        let mut f = Distribution::particles(data(1), x, 40_000, Some(3)).unwrap();
        let m0 = f.mass();
        f.drift(2.0);
        let e = vec![vec![1e-3; 64]];
        f.kick(1.0, &e).unwrap();
        assert_eq!(f.mass(), m0);
        let (_, _, w) = f.particle_data().unwrap();
        assert!(w.iter().all(|&w| w > 0.0));
        let rho = f.density().unwrap();
        let total = rho.component(0)[0].re * x.volume();
        assert!((total - m0).abs() < 1e-12 * m0);
    }

    #[test]
    fn support_violation_detected() {
        let x = BoxGrid::new(1, 10.0, 32).unwrap();
        let v = BoxGrid::new(1, 0.8, 32).unwrap();
        assert!(matches!(Distribution::grid(data(1), x, v), Err(Error::SupportViolation(_))));
    }
}
