use num_complex::Complex64;

use super::resolvent::omega;
use super::split::OscillatorySplit;
use crate::kg::{amplitude, Sign};
use crate::spectral::eval::Phases;
use crate::transport::{mat_vec_jacobian, relativistic_velocity, CharacteristicBundle, Trajectory};
use crate::{par, Error, Point, Result};

/// Field ingredients of the decompositions at one `(t, x, v)`, summed over `±`.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct PointFields {
    pub e: Point,
    pub e_osc: Point,
    pub e_r: Point,
    pub osc1: Point,
    pub osc2: Point,
    /// `grad_osc2[m][i] = ∂_{x_m} E^{osc,2}_i`.
    pub grad_osc2: [[f64; 3]; 3],
    pub grad_osc3: [[f64; 3]; 3],
    /// `Σ± a±(i∂ₓ) φ±,1 ⋆ F`.
    pub a_phi1_f: Point,
    /// `Σ± a±(i∂ₓ) φ±,2 ⋆ F`.
    pub a_phi2_f: Point,
}

/// Evaluates every ingredient in one pass over the modes.
pub fn point_fields(split: &OscillatorySplit<'_>, t: f64, x: &Point, v: &Point) -> Result<PointFields> {
    let grid = *split.history().grid();
    let d = grid.dim();
    let at = split.locate(t)?;
    let phases = Phases::new(&grid, x);
    let vh = relativistic_velocity(v);
    let z = Complex64::new(0.0, 0.0);
    let mut e = [z; 3];
    let mut e_osc = [z; 3];
    let mut osc1 = [z; 3];
    let mut osc2 = [z; 3];
    let mut g2 = [[z; 3]; 3];
    let mut g3 = [[z; 3]; 3];
    let mut p1 = [z; 3];
    let mut p2 = [z; 3];
    for flat in 0..grid.len() {
        if grid.nyquist_axes(flat).iter().any(|&b| b) {
            continue;
        }
        let k = grid.wavevector(flat);
        let ph = phases.phase(grid.unravel(flat));
        let rho = split.density_coeff(flat, at) * ph;
        for c in 0..d {
            e[c] += split.electric_coeff(c, flat, at) * ph;
        }
        for sign in Sign::BOTH {
            let w = omega(sign, &k, &vh).inv();
            let w2 = w * w;
            let w3 = w2 * w;
            let a = amplitude(sign, &k);
            let rot = OscillatorySplit::phase(sign, &k, t) * ph;
            for c in 0..d {
                let osc = split.profile_coeff(sign, c, flat, at) * rot;
                let f = Complex64::new(0.0, k[c]) * rho;
                e_osc[c] += osc;
                osc1[c] += osc * w;
                osc2[c] += osc * w2;
                p1[c] += a * w * f;
                p2[c] += a * w2 * f;
                for m in 0..d {
                    let ik = Complex64::new(0.0, k[m]);
                    g2[m][c] += ik * osc * w2;
                    g3[m][c] += ik * osc * w3;
                }
            }
        }
    }
    let re = |a: [Complex64; 3]| [a[0].re, a[1].re, a[2].re];
    let re2 = |a: [[Complex64; 3]; 3]| [re(a[0]), re(a[1]), re(a[2])];
    let (e, e_osc) = (re(e), re(e_osc));
    Ok(PointFields {
        e,
        e_osc,
        e_r: [e[0] - e_osc[0], e[1] - e_osc[1], e[2] - e_osc[2]],
        osc1: re(osc1),
        osc2: re(osc2),
        grad_osc2: re2(g2),
        grad_osc3: re2(g3),
        a_phi1_f: re(p1),
        a_phi2_f: re(p2),
    })
}

fn contract(w: &Point, grad: &[[f64; 3]; 3]) -> Point {
    let mut out = [0.0; 3];
    for (m, row) in grad.iter().enumerate() {
        for i in 0..3 {
            out[i] += w[m] * row[i];
        }
    }
    out
}

fn add(a: &Point, b: &Point) -> Point {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
}

fn sub(a: &Point, b: &Point) -> Point {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

fn scale(a: &Point, c: f64) -> Point {
    [a[0] * c, a[1] * c, a[2] * c]
}

fn max_abs(a: &Point) -> f64 {
    a.iter().fold(0.0_f64, |m, c| m.max(c.abs()))
}

/// `Q^tr = −Σ± a±φ±,1⋆F + Σ± (∇ᵥv̂ E)·∇ₓE^{osc,2}± + E^r`, by summand.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct QtrParts {
    pub transfer: Point,
    pub nonlinear: Point,
    pub remainder: Point,
}

impl QtrParts {
    pub fn total(&self) -> Point {
        add(&add(&self.transfer, &self.nonlinear), &self.remainder)
    }
}

/// `Q^{tr,1} = Σ± a±φ±,2⋆F − 2Σ± (∇ᵥv̂ E)·∇ₓE^{osc,3}±`, by summand.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Qtr1Parts {
    pub transfer: Point,
    pub nonlinear: Point,
}

impl Qtr1Parts {
    pub fn total(&self) -> Point {
        add(&self.transfer, &self.nonlinear)
    }
}

pub fn qtr_from(f: &PointFields, v: &Point) -> QtrParts {
    let pull = mat_vec_jacobian(v, &f.e);
    QtrParts { transfer: scale(&f.a_phi1_f, -1.0), nonlinear: contract(&pull, &f.grad_osc2), remainder: f.e_r }
}

pub fn qtr1_from(f: &PointFields, v: &Point) -> Qtr1Parts {
    let pull = mat_vec_jacobian(v, &f.e);
    Qtr1Parts { transfer: f.a_phi2_f, nonlinear: scale(&contract(&pull, &f.grad_osc3), -2.0) }
}

/// `Q^tr(t, ·, ·)` on a probe lattice.
pub fn qtr_eval(split: &OscillatorySplit<'_>, t: f64, probes: &[(Point, Point)]) -> Result<Vec<QtrParts>> {
    par::map_indexed(probes.len(), |p| {
        let (x, v) = &probes[p];
        point_fields(split, t, x, v).map(|f| qtr_from(&f, v))
    })
    .into_iter()
    .collect()
}

/// `Q^{tr,1}(t, ·, ·)` on a probe lattice.
pub fn qtr1_eval(split: &OscillatorySplit<'_>, t: f64, probes: &[(Point, Point)]) -> Result<Vec<Qtr1Parts>> {
    par::map_indexed(probes.len(), |p| {
        let (x, v) = &probes[p];
        point_fields(split, t, x, v).map(|f| qtr1_from(&f, v))
    })
    .into_iter()
    .collect()
}

/// Ingredients sampled at every node of one backward trajectory.
struct NodeSamples {
    fields: Vec<PointFields>,
    qtr: Vec<Point>,
    qtr1: Vec<Point>,
}

fn sample_nodes(split: &OscillatorySplit<'_>, tr: &Trajectory) -> Result<NodeSamples> {
    let mut fields = Vec::with_capacity(tr.times.len());
    let mut qtr = Vec::with_capacity(tr.times.len());
    let mut qtr1 = Vec::with_capacity(tr.times.len());
    for n in 0..tr.times.len() {
        let f = point_fields(split, tr.times[n], &tr.x[n], &tr.v[n])?;
        qtr.push(qtr_from(&f, &tr.v[n]).total());
        qtr1.push(qtr1_from(&f, &tr.v[n]).total());
        fields.push(f);
    }
    Ok(NodeSamples { fields, qtr, qtr1 })
}

/// `∫_s^t g dτ` by the trapezoid rule over nodes stored from `t` down to `s`.
fn trapezoid(times: &[f64], g: impl Fn(usize) -> Point) -> Point {
    let mut acc = [0.0; 3];
    for n in 0..times.len().saturating_sub(1) {
        let h = times[n] - times[n + 1];
        let (a, b) = (g(n), g(n + 1));
        for c in 0..3 {
            acc[c] += 0.5 * h * (a[c] + b[c]);
        }
    }
    acc
}

/// Parts of `V_{s,t} = v − V^osc_{t,t} + V^osc_{s,t} + V^tr_{s,t}` for one probe.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VelocityParts {
    pub x: Point,
    pub v: Point,
    /// `V_{s,t}` from the integrated characteristic.
    pub foot_v: Point,
    pub v_osc_tt: Point,
    pub v_osc_st: Point,
    pub v_tr: Point,
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct VelocityDecomposition {
    pub s: f64,
    pub t: f64,
    pub parts: Vec<VelocityParts>,
}

impl VelocityDecomposition {
    pub fn max_residual(&self) -> f64 {
        self.parts.iter().fold(0.0, |m, p| m.max(p.residual))
    }

    pub fn max_osc(&self) -> f64 {
        self.parts.iter().fold(0.0, |m, p| m.max(max_abs(&p.v_osc_st)))
    }

    pub fn max_transport(&self) -> f64 {
        self.parts.iter().fold(0.0, |m, p| m.max(max_abs(&p.v_tr)))
    }
}

fn check_bundle(bundle: &CharacteristicBundle) -> Result<()> {
    if bundle.s > bundle.t {
        return Err(Error::Ordering { s: bundle.s, t: bundle.t });
    }
    Ok(())
}

pub fn velocity_decomposition(
    bundle: &CharacteristicBundle,
    split: &OscillatorySplit<'_>,
) -> Result<VelocityDecomposition> {
    check_bundle(bundle)?;
    let parts = par::map_indexed(bundle.trajectories.len(), |p| {
        let tr = &bundle.trajectories[p];
        let nodes = sample_nodes(split, tr)?;
        let (x, v) = tr.start();
        let (_, vs) = tr.end();
        let last = tr.times.len() - 1;
        let v_osc_tt = nodes.fields[0].osc1;
        let v_osc_st = nodes.fields[last].osc1;
        let v_tr = scale(&trapezoid(&tr.times, |n| nodes.qtr[n]), -1.0);
        let predicted = add(&add(&sub(&v, &v_osc_tt), &v_osc_st), &v_tr);
        Ok(VelocityParts { x, v, foot_v: vs, v_osc_tt, v_osc_st, v_tr, residual: max_abs(&sub(&vs, &predicted)) })
    });
    Ok(VelocityDecomposition { s: bundle.s, t: bundle.t, parts: parts.into_iter().collect::<Result<_>>()? })
}

/// Parts of the velocity average `Ψ̂_{s,t}` for one probe.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StraighteningParts {
    pub x: Point,
    pub v: Point,
    /// `(x − X_{s,t})/(t − s)`.
    pub psi_hat: Point,
    pub psi_osc: Point,
    pub psi_tr: Point,
    pub psi_q: Point,
    /// `(1/(t−s))∫V dτ` against `v − V^osc_{t,t} + Ψ^osc + Ψ^tr`.
    pub average_residual: f64,
    /// `Ψ̂` against `v̂ + ∇ᵥv̂(−V^osc_{t,t} + Ψ^osc + Ψ^tr) + Ψ^Q`.
    pub hat_residual: f64,
    /// `(1 − |Ψ̂|²)/(1 − |v̂|²)`.
    pub speed_ratio: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StraighteningDecomposition {
    pub s: f64,
    pub t: f64,
    pub parts: Vec<StraighteningParts>,
}

impl StraighteningDecomposition {
    pub fn max_average_residual(&self) -> f64 {
        self.parts.iter().fold(0.0, |m, p| m.max(p.average_residual))
    }

    pub fn max_hat_residual(&self) -> f64 {
        self.parts.iter().fold(0.0, |m, p| m.max(p.hat_residual))
    }

    pub fn max_speed(&self) -> f64 {
        self.parts.iter().fold(0.0, |m, p| m.max(crate::spectral::norm3(&p.psi_hat)))
    }
}

pub fn straightening_decomposition(
    bundle: &CharacteristicBundle,
    split: &OscillatorySplit<'_>,
) -> Result<StraighteningDecomposition> {
    check_bundle(bundle)?;
    let (s, t) = (bundle.s, bundle.t);
    let span = t - s;
    let parts = par::map_indexed(bundle.trajectories.len(), |p| {
        let tr = &bundle.trajectories[p];
        let (x, v) = tr.start();
        let vh = relativistic_velocity(&v);
        let vh2: f64 = vh.iter().map(|c| c * c).sum();
        if span == 0.0 {
            let zero = [0.0; 3];
            return Ok(StraighteningParts {
                x,
                v,
                psi_hat: vh,
                psi_osc: zero,
                psi_tr: zero,
                psi_q: zero,
                average_residual: 0.0,
                hat_residual: 0.0,
                speed_ratio: 1.0,
            });
        }
        let nodes = sample_nodes(split, tr)?;
        let last = tr.times.len() - 1;
        let (xs, _) = tr.end();
        let psi_hat = scale(&sub(&x, &xs), 1.0 / span);
        let v_osc_tt = nodes.fields[0].osc1;
        let psi_osc = scale(&sub(&nodes.fields[0].osc2, &nodes.fields[last].osc2), 1.0 / span);
        let psi_tr =
            scale(&trapezoid(&tr.times, |n| add(&scale(&nodes.qtr[n], tr.times[n] - s), &nodes.qtr1[n])), -1.0 / span);
        let average = scale(&trapezoid(&tr.times, |n| tr.v[n]), 1.0 / span);
        let predicted = add(&add(&sub(&v, &v_osc_tt), &psi_osc), &psi_tr);
        let psi_q = scale(
            &trapezoid(&tr.times, |n| {
                let vn = tr.v[n];
                let lin = mat_vec_jacobian(&v, &sub(&vn, &v));
                sub(&sub(&relativistic_velocity(&vn), &vh), &lin)
            }),
            1.0 / span,
        );
        let hat = add(&add(&vh, &mat_vec_jacobian(&v, &sub(&predicted, &v))), &psi_q);
        let ph2: f64 = psi_hat.iter().map(|c| c * c).sum();
        Ok(StraighteningParts {
            x,
            v,
            psi_hat,
            psi_osc,
            psi_tr,
            psi_q,
            average_residual: max_abs(&sub(&average, &predicted)),
            hat_residual: max_abs(&sub(&psi_hat, &hat)),
            speed_ratio: (1.0 - ph2) / (1.0 - vh2),
        })
    });
    Ok(StraighteningDecomposition { s, t, parts: parts.into_iter().collect::<Result<_>>()? })
}
