//! Lebesgue, Sobolev and Besov norms of grid fields.

use std::fmt;
use std::str::FromStr;

use super::{littlewood_paley as lp, multiplier, sum, SpectralField};
use crate::{Error, Result};

/// Function space selector for [`norm`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NormSpec {
    /// `Lᵖ`, midpoint Riemann sum; `p = ∞` is the grid max.
    Lp(f64),
    /// `W^{s,p}` with integer `s`: `Σ_{|α|≤s} ‖∂^α f‖_p`.
    Sobolev { s: u32, p: f64 },
    /// `H^s` via `⟨k⟩^{2s}`-weighted Parseval.
    H(f64),
    /// `B^s_{p,r}`.
    Besov { s: f64, p: f64, r: f64 },
}

fn parse_exponent(s: &str) -> Result<f64> {
    let t = s.trim();
    if t.eq_ignore_ascii_case("inf") {
        return Ok(f64::INFINITY);
    }
    let v: f64 = t.parse().map_err(|_| Error::Config(format!("bad exponent '{t}'")))?;
    Ok(v)
}

fn fmt_exponent(p: f64) -> String {
    if p.is_infinite() {
        "inf".into()
    } else {
        format!("{p}")
    }
}

impl fmt::Display for NormSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            NormSpec::Lp(p) => write!(f, "L{}", fmt_exponent(p)),
            NormSpec::Sobolev { s, p } => write!(f, "W{},{}", s, fmt_exponent(p)),
            NormSpec::H(s) => write!(f, "H{s}"),
            NormSpec::Besov { s, p, r } => {
                write!(f, "B{},{},{}", s, fmt_exponent(p), fmt_exponent(r))
            }
        }
    }
}

impl FromStr for NormSpec {
    type Err = Error;

    /// Accepts `L2`, `Linf`, `W1,inf`, `H1.5`, `B0.5,2,2`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::Config(format!("unrecognised norm '{s}'"));
        let (head, rest) = s.split_at(s.chars().next().ok_or_else(bad)?.len_utf8());
        let parts: Vec<&str> = rest.split(',').collect();
        let spec = match (head, parts.len()) {
            ("L", 1) => NormSpec::Lp(parse_exponent(parts[0])?),
            ("W", 2) => {
                NormSpec::Sobolev { s: parts[0].trim().parse().map_err(|_| bad())?, p: parse_exponent(parts[1])? }
            }
            ("H", 1) => NormSpec::H(parts[0].trim().parse().map_err(|_| bad())?),
            ("B", 3) => NormSpec::Besov {
                s: parts[0].trim().parse().map_err(|_| bad())?,
                p: parse_exponent(parts[1])?,
                r: parse_exponent(parts[2])?,
            },
            _ => return Err(bad()),
        };
        spec.validate()?;
        Ok(spec)
    }
}

impl NormSpec {
    pub fn validate(&self) -> Result<()> {
        let p_ok = |p: f64| p >= 1.0;
        let ok = match *self {
            NormSpec::Lp(p) => p_ok(p),
            NormSpec::Sobolev { p, .. } => p_ok(p),
            NormSpec::H(s) => s >= 0.0 && s.is_finite(),
            NormSpec::Besov { s, p, r } => s >= 0.0 && s.is_finite() && p_ok(p) && p_ok(r),
        };
        if ok {
            Ok(())
        } else {
            Err(Error::Config(format!("norm parameters out of range: {self}")))
        }
    }
}

/// Largest `⟨k⟩^{2s}`-weighted energy fraction allowed in the outer quarter
/// of the spectrum before a Besov norm is declared unresolved.
pub const BESOV_TAIL_TOLERANCE: f64 = 1e-8;

/// Fraction of `Σ⟨k⟩^{2s}|ĉ|²` carried by modes with some `|k_a| > ¾ k_N`.
pub fn spectral_tail_fraction(field: &SpectralField, s: f64) -> f64 {
    let grid = field.grid();
    let cut = 0.75 * grid.nyquist_wavenumber();
    let mut total = sum::Neumaier::new();
    let mut tail = sum::Neumaier::new();
    for flat in 0..grid.len() {
        let k = grid.wavevector(flat);
        let w = super::japanese(&k).powf(2.0 * s);
        let e: f64 = field.components().iter().map(|c| c[flat].norm_sqr()).sum::<f64>() * w;
        total.add(e);
        if k.iter().any(|x| x.abs() > cut) {
            tail.add(e);
        }
    }
    if total.value() == 0.0 {
        0.0
    } else {
        tail.value() / total.value()
    }
}

/// `Lᵖ` norm of pointwise magnitudes sampled on the grid.
pub fn lp_of_samples(samples: &[f64], cell_volume: f64, p: f64) -> f64 {
    if p.is_infinite() {
        sum::lp_reduce(samples.iter().copied(), p)
    } else {
        sum::lp_reduce(samples.iter().copied(), p) * cell_volume.powf(1.0 / p)
    }
}

pub fn lp_norm(field: &SpectralField, p: f64) -> f64 {
    lp_of_samples(&field.magnitude_samples(), field.grid().cell_volume(), p)
}

fn multi_indices(dim: usize, order: u32) -> Vec<[u32; 3]> {
    let mut out = Vec::new();
    let max = |a: usize| if a < dim { order } else { 0 };
    for a in 0..=max(0) {
        for b in 0..=max(1) {
            for c in 0..=max(2) {
                if a + b + c == order {
                    out.push([a, b, c]);
                }
            }
        }
    }
    out
}

pub fn sobolev_norm(field: &SpectralField, s: u32, p: f64) -> f64 {
    let dim = field.grid().dim();
    let mut acc = sum::Neumaier::new();
    for order in 0..=s {
        for beta in multi_indices(dim, order) {
            acc.add(lp_norm(&multiplier::partial_multi(field, beta), p));
        }
    }
    acc.value()
}

/// `Σ_{|α|=m} ‖∂^α f‖_p`.
pub fn derivative_norm(field: &SpectralField, m: u32, p: f64) -> f64 {
    let dim = field.grid().dim();
    sum::neumaier(multi_indices(dim, m).into_iter().map(|beta| lp_norm(&multiplier::partial_multi(field, beta), p)))
}

pub fn h_norm(field: &SpectralField, s: f64) -> f64 {
    let grid = field.grid();
    let weights: Vec<f64> = (0..grid.len()).map(|flat| super::japanese(&grid.wavevector(flat)).powf(2.0 * s)).collect();
    let total =
        sum::neumaier(field.components().iter().flat_map(|c| c.iter().zip(&weights).map(|(z, w)| w * z.norm_sqr())));
    (grid.volume() * total).sqrt()
}

pub fn besov_norm(field: &SpectralField, s: f64, p: f64, r: f64) -> Result<f64> {
    let grid = *field.grid();
    let low = lp_norm(&lp::low_projector(field), p);
    let tail = spectral_tail_fraction(field, s);
    if tail > BESOV_TAIL_TOLERANCE {
        return Err(Error::Resolution(format!(
            "B^{s}_{{{p},{r}}}: {tail:.2e} of the weighted spectrum sits near Nyquist"
        )));
    }
    let mut terms = Vec::new();
    for j in 0..=lp::top_shell(&grid) {
        let pj = lp::lp_projector(field, j)?;
        terms.push(2f64.powf(s * j as f64) * lp_norm(&pj, p));
    }
    let total = sum::lp_reduce(terms.iter().copied(), r);
    Ok(low + total)
}

/// Evaluates `field` in the requested space.
pub fn norm(field: &SpectralField, spec: NormSpec) -> Result<f64> {
    spec.validate()?;
    match spec {
        NormSpec::Lp(p) => Ok(lp_norm(field, p)),
        NormSpec::Sobolev { s, p } => Ok(sobolev_norm(field, s, p)),
        NormSpec::H(s) => Ok(h_norm(field, s)),
        NormSpec::Besov { s, p, r } => besov_norm(field, s, p, r),
    }
}
