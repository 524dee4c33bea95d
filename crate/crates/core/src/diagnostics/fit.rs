use std::f64::consts::PI;

use crate::{Error, Result};

/// Minimum samples per decade of `t` inside a fit window.
pub const SAMPLES_PER_DECADE: f64 = 8.0;

/// Klein-Gordon period at `k = 0`.
pub const KG_PERIOD: f64 = 2.0 * PI;

/// A fitted power law `value ∝ t^γ` over a window.
#[derive(Debug, Clone, PartialEq)]
pub struct DecayReport {
    pub quantity: String,
    pub norm: String,
    pub times: Vec<f64>,
    pub values: Vec<f64>,
    pub window: (f64, f64),
    pub exponent: f64,
    /// RMS of the log residuals of the fit.
    pub residual: f64,
    pub samples: usize,
    pub period_averaged: bool,
}

/// Least-squares slope of `log v` against `log t` over `window`.
///
/// Returns `(γ, rms log residual)`.
pub fn fit_decay_exponent(times: &[f64], values: &[f64], window: (f64, f64)) -> Result<(f64, f64)> {
    let (t0, t1) = window;
    if times.len() != values.len() {
        return Err(Error::Dimension("times and values differ in length".into()));
    }
    if !(t0 > 0.0 && t1 > t0) {
        return Err(Error::Domain(format!("fit window [{t0}, {t1}] must satisfy 0 < t0 < t1")));
    }
    let mut pts = Vec::new();
    for (&t, &v) in times.iter().zip(values) {
        if t < t0 || t > t1 {
            continue;
        }
        if !(v > 0.0) {
            return Err(Error::Domain(format!("nonpositive value {v} at t = {t}")));
        }
        pts.push((t.ln(), v.ln()));
    }
    let decades = (t1 / t0).log10();
    if pts.len() < 3 || (pts.len() as f64) < SAMPLES_PER_DECADE * decades {
        return Err(Error::InsufficientData(format!(
            "{} samples over {decades:.2} decades; need {SAMPLES_PER_DECADE} per decade",
            pts.len()
        )));
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let slope = sxy / sxx;
    let rms = (pts.iter().map(|p| (p.1 - my - slope * (p.0 - mx)).powi(2)).sum::<f64>() / n).sqrt();
    Ok((slope, rms))
}

/// Centred moving average over one `period` (trapezoid in `t`); samples
/// closer than half a period to either end are dropped.
pub fn period_average(times: &[f64], values: &[f64], period: f64) -> (Vec<f64>, Vec<f64>) {
    let half = 0.5 * period;
    let (Some(&first), Some(&last)) = (times.first(), times.last()) else {
        return (Vec::new(), Vec::new());
    };
    let mut out_t = Vec::new();
    let mut out_v = Vec::new();
    let mut lo = 0;
    let mut hi = 0;
    for (i, &t) in times.iter().enumerate() {
        if t - half < first - 1e-12 || t + half > last + 1e-12 {
            continue;
        }
        while times[lo] < t - half - 1e-12 {
            lo += 1;
        }
        while hi + 1 < times.len() && times[hi + 1] <= t + half + 1e-12 {
            hi += 1;
        }
        let mut acc = 0.0;
        for j in lo..hi {
            acc += 0.5 * (times[j + 1] - times[j]) * (values[j] + values[j + 1]);
        }
        let span = times[hi] - times[lo];
        if span > 0.0 {
            out_t.push(times[i]);
            out_v.push(acc / span);
        }
    }
    (out_t, out_v)
}

/// Fits one named series, optionally on its period-averaged envelope, and
/// enforces that the window ends before `t_wrap`.
pub fn fit_decay(
    quantity: &str,
    norm: &str,
    times: &[f64],
    values: &[f64],
    window: (f64, f64),
    t_wrap: f64,
    average_period: Option<f64>,
) -> Result<DecayReport> {
    if window.1 >= t_wrap {
        return Err(Error::Wrap(format!("fit window ends at {} but t_wrap = {t_wrap}", window.1)));
    }
    let (t, v) = match average_period {
        Some(p) => period_average(times, values, p),
        None => (times.to_vec(), values.to_vec()),
    };
    let (exponent, residual) = fit_decay_exponent(&t, &v, window)?;
    let samples = t.iter().filter(|&&s| s >= window.0 && s <= window.1).count();
    Ok(DecayReport {
        quantity: quantity.to_string(),
        norm: norm.to_string(),
        times: t,
        values: v,
        window,
        exponent,
        residual,
        samples,
        period_averaged: average_period.is_some(),
    })
}

impl DecayReport {
    /// CSV with a summary header block and the fitted samples.
    pub fn write_csv(&self, path: &std::path::Path) -> Result<()> {
        let mut w = csv::Writer::from_path(path)?;
        w.write_record(["quantity", "norm", "t0", "t1", "exponent", "residual", "samples", "period_averaged"])?;
        w.write_record([
            self.quantity.clone(),
            self.norm.clone(),
            format!("{:?}", self.window.0),
            format!("{:?}", self.window.1),
            format!("{:?}", self.exponent),
            format!("{:?}", self.residual),
            self.samples.to_string(),
            self.period_averaged.to_string(),
        ])?;
        w.flush()?;
        let mut s = csv::Writer::from_path(path.with_extension("series.csv"))?;
        s.write_record(["time", "value"])?;
        for (t, v) in self.times.iter().zip(&self.values) {
            s.write_record([format!("{t:?}"), format!("{v:?}")])?;
        }
        s.flush()?;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid(t0: f64, t1: f64, n: usize) -> Vec<f64> {
        (0..n).map(|i| t0 + (t1 - t0) * i as f64 / (n - 1) as f64).collect()
    }

    #[test]
    fn exact_power_law() {
        let t = grid(1.0, 30.0, 300);
        let v: Vec<f64> = t.iter().map(|t| 3.0 * t.powf(-2.0)).collect();
        let (g, r) = fit_decay_exponent(&t, &v, (2.0, 25.0)).unwrap();
        assert!((g + 2.0).abs() < 1e-6 && r < 1e-10);
    }

    #[test]
    fn constant_series() {
        let t = grid(1.0, 30.0, 100);
        let (g, _) = fit_decay_exponent(&t, &vec![0.7; 100], (1.0, 30.0)).unwrap();
        assert!(g.abs() < 1e-12);
    }

    #[test]
    fn oscillating_power_law_with_averaging() {
        let t = grid(0.5, 80.0, 4000);
        let v: Vec<f64> = t.iter().map(|t| (1.0 + 0.1 * t.sin()) / t).collect();
        let r = fit_decay("x", "Linf", &t, &v, (5.0, 70.0), 90.0, Some(KG_PERIOD)).unwrap();
        assert!((r.exponent + 1.0).abs() < 0.05, "{}", r.exponent);
        assert!(r.period_averaged);
    }

    #[test]
    fn errors() {
        let t = grid(1.0, 10.0, 50);
        let mut v = vec![1.0; 50];
        v[10] = 0.0;
        assert!(matches!(fit_decay_exponent(&t, &v, (1.0, 10.0)), Err(Error::Domain(_))));
        let sparse = [1.0, 2.0, 4.0, 8.0, 16.0];
        assert!(matches!(fit_decay_exponent(&sparse, &[1.0; 5], (1.0, 16.0)), Err(Error::InsufficientData(_))));
        assert!(matches!(fit_decay("q", "L2", &t, &[1.0; 50], (1.0, 9.0), 8.0, None), Err(Error::Wrap(_))));
    }

    #[test]
    fn averaging_preserves_constants() {
        let t = grid(0.0, 20.0, 201);
        let (ta, va) = period_average(&t, &vec![2.0; 201], KG_PERIOD);
        assert!(!ta.is_empty());
        assert!(ta[0] >= KG_PERIOD / 2.0 - 1e-9);
        assert!(va.iter().all(|v| (v - 2.0).abs() < 1e-14));
    }
}
