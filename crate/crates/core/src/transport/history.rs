use num_complex::Complex64;

use crate::kg::{lambda, Sign};
use crate::spectral::eval::Phases;
use crate::spectral::{BoxGrid, SpectralField};
use crate::{Error, Point, Result};

/// Read-only access to the electric field `E(t, x)` over a time span.
pub trait FieldHistory: Sync {
    fn dim(&self) -> usize;

    /// Stored time span `[first, last]`.
    fn span(&self) -> (f64, f64);

    fn electric(&self, t: f64, x: &Point) -> Result<Point>;

    fn check_time(&self, t: f64) -> Result<()> {
        let (first, last) = self.span();
        let slack = 1e-9 * (1.0 + last.abs());
        if t < first - slack || t > last + slack {
            return Err(Error::MissingHistory { t, first, last });
        }
        Ok(())
    }
}

/// `E ≡ 0` for all times.
#[derive(Debug, Clone, Copy)]
pub struct ZeroField {
    pub dim: usize,
}

impl FieldHistory for ZeroField {
    fn dim(&self) -> usize {
        self.dim
    }
    fn span(&self) -> (f64, f64) {
        (f64::NEG_INFINITY, f64::INFINITY)
    }
    fn electric(&self, _t: f64, _x: &Point) -> Result<Point> {
        Ok([0.0; 3])
    }
}

/// Closed-form field.
pub struct AnalyticField<F> {
    pub dim: usize,
    pub span: (f64, f64),
    pub field: F,
}

impl<F> FieldHistory for AnalyticField<F>
where
    F: Fn(f64, &Point) -> Point + Sync,
{
    fn dim(&self) -> usize {
        self.dim
    }
    fn span(&self) -> (f64, f64) {
        self.span
    }
    fn electric(&self, t: f64, x: &Point) -> Result<Point> {
        self.check_time(t)?;
        Ok((self.field)(t, x))
    }
}

/// Wraps a history and switches the field off after `t_freeze`.
pub struct FrozenAfter<'a> {
    pub inner: &'a dyn FieldHistory,
    pub t_freeze: f64,
}

impl FieldHistory for FrozenAfter<'_> {
    fn dim(&self) -> usize {
        self.inner.dim()
    }
    fn span(&self) -> (f64, f64) {
        (self.inner.span().0, f64::INFINITY)
    }
    fn electric(&self, t: f64, x: &Point) -> Result<Point> {
        if t > self.t_freeze {
            Ok([0.0; 3])
        } else {
            self.inner.electric(t, x)
        }
    }
}

/// Time series of spectral fields with linear interpolation between nodes.
#[derive(Debug, Clone, Default)]
pub struct SpectralSeries {
    times: Vec<f64>,
    fields: Vec<SpectralField>,
}

impl SpectralSeries {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, t: f64, field: SpectralField) {
        if let Some(&last) = self.times.last() {
            assert!(t > last, "series times must increase");
        }
        self.times.push(t);
        self.fields.push(field);
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn fields(&self) -> &[SpectralField] {
        &self.fields
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn span(&self) -> (f64, f64) {
        match (self.times.first(), self.times.last()) {
            (Some(&a), Some(&b)) => (a, b),
            _ => (0.0, -1.0),
        }
    }

    /// Bracketing node index `i` and weight `θ` with `t = (1−θ)t_i + θt_{i+1}`.
    pub fn locate(&self, t: f64) -> Result<(usize, f64)> {
        let (first, last) = self.span();
        let slack = 1e-9 * (1.0 + last.abs());
        if self.times.is_empty() || t < first - slack || t > last + slack {
            return Err(Error::MissingHistory { t, first, last });
        }
        if self.times.len() == 1 {
            return Ok((0, 0.0));
        }
        let i = match self.times.partition_point(|&s| s <= t) {
            0 => 0,
            p => (p - 1).min(self.times.len() - 2),
        };
        let theta = ((t - self.times[i]) / (self.times[i + 1] - self.times[i])).clamp(0.0, 1.0);
        Ok((i, theta))
    }

    /// Interpolated coefficients at time `t`.
    pub fn at(&self, t: f64) -> Result<SpectralField> {
        let (i, theta) = self.locate(t)?;
        if theta == 0.0 {
            return Ok(self.fields[i].clone());
        }
        let a = &self.fields[i];
        let b = &self.fields[i + 1];
        a.scaled(Complex64::new(1.0 - theta, 0.0)).axpy(Complex64::new(theta, 0.0), b)
    }

    /// Interpolated point values of every component at `(t, x)`.
    pub fn eval(&self, t: f64, x: &Point) -> Result<Vec<Complex64>> {
        let (i, theta) = self.locate(t)?;
        let phases = Phases::new(self.fields[i].grid(), x);
        let a = &self.fields[i];
        Ok((0..a.num_components())
            .map(|c| {
                let va = phases.sum(a.component(c));
                if theta == 0.0 {
                    va
                } else {
                    let vb = phases.sum(self.fields[i + 1].component(c));
                    va * (1.0 - theta) + vb * theta
                }
            })
            .collect())
    }
}

/// Everything the analysis needs from a coupled run, stored at every step:
/// `Ê`, `B̂±` and `ρ̂`.
#[derive(Debug, Clone)]
pub struct RunHistory {
    grid: BoxGrid,
    pub electric: SpectralSeries,
    pub profiles: [SpectralSeries; 2],
    pub density: SpectralSeries,
}

impl RunHistory {
    pub fn new(grid: BoxGrid) -> Self {
        Self {
            grid,
            electric: SpectralSeries::new(),
            profiles: [SpectralSeries::new(), SpectralSeries::new()],
            density: SpectralSeries::new(),
        }
    }

    pub fn grid(&self) -> &BoxGrid {
        &self.grid
    }

    pub fn push(&mut self, t: f64, electric: SpectralField, profiles: [SpectralField; 2], density: SpectralField) {
        self.electric.push(t, electric);
        let [p, m] = profiles;
        self.profiles[0].push(t, p);
        self.profiles[1].push(t, m);
        self.density.push(t, density);
    }

    pub fn times(&self) -> &[f64] {
        self.electric.times()
    }

    /// `Ê^osc±(t) = e^{λ±t} B̂±(t)` with `B̂±` interpolated linearly in time.
    pub fn oscillatory_at(&self, sign: Sign, t: f64) -> Result<SpectralField> {
        let b = self.profiles[sign.index()].at(t)?;
        Ok(b.map_coefficients(|_, k, z| z * (lambda(sign, k) * t).exp()))
    }
}

impl FieldHistory for RunHistory {
    fn dim(&self) -> usize {
        self.grid.dim()
    }

    fn span(&self) -> (f64, f64) {
        self.electric.span()
    }

    fn electric(&self, t: f64, x: &Point) -> Result<Point> {
        let values = self.electric.eval(t, x)?;
        let mut e = [0.0; 3];
        for (slot, v) in e.iter_mut().zip(values) {
            *slot = v.re;
        }
        Ok(e)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn series_interpolates_linearly() {
        let g = BoxGrid::new(1, 2.0, 8).unwrap();
        let mut s = SpectralSeries::new();
        for i in 0..4 {
            let t = i as f64 * 0.5;
            s.push(t, SpectralField::sample(g, |x| t * (std::f64::consts::FRAC_PI_2 * x[0]).cos()));
        }
        let x = [0.3, 0.0, 0.0];
        let v = s.eval(0.8, &x).unwrap()[0];
        assert!((v.re - 0.8 * (std::f64::consts::FRAC_PI_2 * 0.3).cos()).abs() < 1e-12);
        assert!(matches!(s.eval(2.0, &x), Err(Error::MissingHistory { .. })));
        assert!(s.eval(1.5, &x).is_ok());
    }
}
