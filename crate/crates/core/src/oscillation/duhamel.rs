use num_complex::Complex64;

use super::resolvent::omega;
use crate::driver::run::{StepContext, StepObserver};
use crate::kg::{amplitude, lambda, Sign};
use crate::quadrature::{exp_weights, QuadratureRule};
use crate::spectral::fft;
use crate::transport::{relativistic_velocity, velocity_jacobian, Distribution};
use crate::{par, Error, Point, Result};

type Weight = Box<dyn Fn(&Point) -> f64 + Send + Sync>;
type WeightGrad = Box<dyn Fn(&Point) -> Point + Send + Sync>;

/// Relative residual of the decoupling identity at one time, per sign.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DuhamelResidual {
    pub time: f64,
    pub relative: [f64; 2],
    /// `‖G^osc± ⋆ S‖` (coefficient ℓ²), the normalisation.
    pub lhs_norm: [f64; 2],
}

impl DuhamelResidual {
    pub fn max_relative(&self) -> f64 {
        self.relative[0].max(self.relative[1])
    }
}

/// Streams the two sides of
/// `G^osc±⋆S = a±e^{λ±t}Ŝ±,0 − a±Ŝ±,1(t) + ∫₀ᵗ a±e^{λ±(t−τ)}Ŝ±,2(τ)dτ`
/// with `S = ∫fφ dv`, `Ŝ±,1 = ∫f̂ φ/ω dv`, `Ŝ±,2 = ∫(fE)^ · ∇ᵥ(φ/ω) dv`,
/// `ω = λ± + ik·v̂`, over the steps of a grid-mode run.
///
/// Nyquist modes are excluded from both sides.
pub struct DuhamelDecoupling {
    weight: Weight,
    weight_grad: WeightGrad,
    output_times: Vec<f64>,
    rule: QuadratureRule,
    s0: Option<[Vec<Complex64>; 2]>,
    lhs: [Vec<Complex64>; 2],
    int2: [Vec<Complex64>; 2],
    prev: Option<(f64, Vec<Complex64>, [Vec<Complex64>; 2])>,
    pub residuals: Vec<DuhamelResidual>,
}

/// Per-step transforms of the lattice.
struct Moments {
    s: Vec<Complex64>,
    s1: [Vec<Complex64>; 2],
    s2: [Vec<Complex64>; 2],
}

impl DuhamelDecoupling {
    /// Weight `φ ≡ 1`, so `S = ρ`.
    pub fn new(output_times: Vec<f64>, rule: QuadratureRule) -> Self {
        Self::with_weight(output_times, rule, Box::new(|_| 1.0), Box::new(|_| [0.0; 3]))
    }

    pub fn with_weight(output_times: Vec<f64>, rule: QuadratureRule, weight: Weight, weight_grad: WeightGrad) -> Self {
        Self {
            weight,
            weight_grad,
            output_times,
            rule,
            s0: None,
            lhs: [Vec::new(), Vec::new()],
            int2: [Vec::new(), Vec::new()],
            prev: None,
            residuals: Vec::new(),
        }
    }

    pub fn max_relative(&self) -> f64 {
        self.residuals.iter().fold(0.0, |m, r| m.max(r.max_relative()))
    }

    fn moments(&self, dist: &Distribution, e: Option<&[Vec<f64>]>) -> Result<Moments> {
        let (Some(values), Some(vg)) = (dist.values(), dist.v_grid()) else {
            return Err(Error::Dependency("the decoupling check needs a grid-mode (x, v) lattice".into()));
        };
        let xg = *dist.x_grid();
        let (nx, d) = (xg.len(), xg.dim());
        let dv = vg.cell_volume();
        let rows: Vec<Vec<Complex64>> = par::map_indexed(vg.len(), |iv| {
            let row = &values[iv * nx..(iv + 1) * nx];
            let mut out = fft::forward_real(&xg, row);
            if let Some(e) = e {
                for c in 0..d {
                    let g: Vec<f64> = row.iter().zip(&e[c]).map(|(f, ec)| f * ec).collect();
                    out.extend(fft::forward_real(&xg, &g));
                }
            }
            out
        });
        let keep: Vec<bool> = (0..nx).map(|flat| !xg.nyquist_axes(flat).iter().any(|&b| b)).collect();
        let per_mode: Vec<[Complex64; 5]> = par::map_indexed(nx, |flat| {
            let z = Complex64::new(0.0, 0.0);
            let mut acc = [z; 5];
            if !keep[flat] {
                return acc;
            }
            let k = xg.wavevector(flat);
            for iv in 0..vg.len() {
                let v = vg.position(iv);
                let phi = (self.weight)(&v);
                let fhat = rows[iv][flat];
                acc[0] += phi * fhat * dv;
                let vh = relativistic_velocity(&v);
                let jac = velocity_jacobian(&v);
                let grad = (self.weight_grad)(&v);
                for sign in Sign::BOTH {
                    let w = omega(sign, &k, &vh).inv();
                    let i = sign.index();
                    acc[1 + i] += phi * w * fhat * dv;
                    if e.is_some() {
                        let mut s2 = z;
                        for j in 0..d {
                            let kdv: f64 = (0..d).map(|m| k[m] * jac[m][j]).sum();
                            let dpsi = grad[j] * w - phi * w * w * Complex64::new(0.0, kdv);
                            s2 += rows[iv][(1 + j) * nx + flat] * dpsi;
                        }
                        acc[3 + i] += s2 * dv;
                    }
                }
            }
            acc
        });
        let col = |c: usize| per_mode.iter().map(|m| m[c]).collect::<Vec<_>>();
        Ok(Moments { s: col(0), s1: [col(1), col(2)], s2: [col(3), col(4)] })
    }

    /// Feeds the lattice at time `t`; `e` is the force field acting on it
    /// (`None` for free streaming). Times must increase from 0.
    pub fn observe_state(&mut self, t: f64, dist: &Distribution, e: Option<&[Vec<f64>]>) -> Result<()> {
        let m = self.moments(dist, e)?;
        let xg = *dist.x_grid();
        let n = xg.len();
        match self.prev.take() {
            None => {
                if t != 0.0 {
                    return Err(Error::Ordering { s: 0.0, t });
                }
                self.s0 = Some(m.s1.clone());
                let z = vec![Complex64::new(0.0, 0.0); n];
                self.lhs = [z.clone(), z.clone()];
                self.int2 = [z.clone(), z];
            }
            Some((t0, s_prev, s2_prev)) => {
                if t <= t0 {
                    return Err(Error::Ordering { s: t0, t });
                }
                let times = [t0, t];
                for sign in Sign::BOTH {
                    let i = sign.index();
                    for flat in 0..n {
                        let lam = lambda(sign, &xg.wavevector(flat));
                        let w = exp_weights(self.rule, -lam, &times);
                        let rot = (lam * (t - t0)).exp();
                        self.lhs[i][flat] = rot * (self.lhs[i][flat] + w[0] * s_prev[flat] + w[1] * m.s[flat]);
                        self.int2[i][flat] =
                            rot * (self.int2[i][flat] + w[0] * s2_prev[i][flat] + w[1] * m.s2[i][flat]);
                    }
                }
            }
        }
        if self.output_times.iter().any(|&o| (o - t).abs() <= 1e-9 * (1.0 + t.abs())) {
            let s0 = self.s0.as_ref().expect("initial moments");
            let mut relative = [0.0; 2];
            let mut lhs_norm = [0.0; 2];
            for sign in Sign::BOTH {
                let i = sign.index();
                let (mut num, mut den) = (0.0, 0.0);
                for flat in 0..n {
                    let k = xg.wavevector(flat);
                    let a = amplitude(sign, &k);
                    let rhs = (lambda(sign, &k) * t).exp() * s0[i][flat] - m.s1[i][flat] + self.int2[i][flat];
                    num += (a * (rhs - self.lhs[i][flat])).norm_sqr();
                    den += (a * self.lhs[i][flat]).norm_sqr();
                }
                lhs_norm[i] = den.sqrt();
                relative[i] = if den > 0.0 { (num / den).sqrt() } else { num.sqrt() };
            }
            self.residuals.push(DuhamelResidual { time: t, relative, lhs_norm });
        }
        self.prev = Some((t, m.s, m.s2));
        Ok(())
    }
}

impl StepObserver for DuhamelDecoupling {
    fn observe(&mut self, ctx: &StepContext<'_>) -> Result<()> {
        if ctx.config.coupling {
            let e = ctx.state.electric_field().to_real()?;
            self.observe_state(ctx.time, ctx.dist, Some(&e))
        } else {
            self.observe_state(ctx.time, ctx.dist, None)
        }
    }
}
