use crate::oscillation::{point_fields, OscillatorySplit};
use crate::transport::{evaluate_f, integrate, relativistic_velocity, Distribution, FieldHistory};
use crate::{par, Error, Point, Result};

/// Scattering state estimates for a probe set.
#[derive(Debug, Clone, PartialEq)]
pub struct ScatteringReport {
    pub probes: Vec<(Point, Point)>,
    /// Geometric extrapolation levels `t_m = t₀·2^m`.
    pub levels: Vec<f64>,
    pub v_infinity: Vec<Point>,
    /// Per-probe error bar on `V∞` (max norm).
    pub error_bar: Vec<f64>,
    /// Tail exponent `p` assumed in `W(t) − W∞ ∝ t^{−p}`.
    pub tail_exponent: f64,
    /// Tail exponent measured from the last three levels (max over probes of the median).
    pub measured_tail: f64,
    /// `(t, max_p |V(t) − V∞|)` at every trajectory node.
    pub convergence: Vec<(f64, f64)>,
    /// `(t, max_p |X(t) − x − tV̂∞|)` at every trajectory node.
    pub position_defect: Vec<(f64, f64)>,
}

impl ScatteringReport {
    pub fn max_error_bar(&self) -> f64 {
        self.error_bar.iter().fold(0.0, |m, e| m.max(*e))
    }

    /// `max_p |V(t) − V∞|` at the levels.
    pub fn level_convergence(&self) -> Vec<(f64, f64)> {
        self.levels
            .iter()
            .map(|&t| {
                let i = self
                    .convergence
                    .iter()
                    .position(|c| (c.0 - t).abs() < 1e-9 * (1.0 + t))
                    .expect("levels are trajectory nodes");
                self.convergence[i]
            })
            .collect()
    }
}

fn max_abs_diff(a: &Point, b: &Point) -> f64 {
    (0..3).fold(0.0, |m, i| m.max((a[i] - b[i]).abs()))
}

/// Richardson table for `W(t_m)` with `t_m = t₀2^m` and tail terms
/// `t^{−p}, t^{−p−1}, …`; returns the deepest estimate and its error bar.
pub fn richardson(values: &[Point], tail: f64) -> (Point, f64) {
    let mut table: Vec<Vec<Point>> = vec![values.to_vec()];
    for j in 1..values.len() {
        let prev = &table[j - 1];
        let factor = 2f64.powf(tail + (j - 1) as f64) - 1.0;
        let col: Vec<Point> = (1..prev.len())
            .map(|m| {
                let mut r = prev[m];
                for c in 0..3 {
                    r[c] += (prev[m][c] - prev[m - 1][c]) / factor;
                }
                r
            })
            .collect();
        table.push(col);
    }
    let depth = table.len() - 1;
    let best = table[depth][0];
    let err = if depth == 0 {
        f64::INFINITY
    } else {
        let prev_col = &table[depth - 1];
        let a = max_abs_diff(&best, &prev_col[prev_col.len() - 1]);
        2.0 * a
    };
    (best, err)
}

/// Forward characteristics from `(x, v)` at `t = 0` through the stored run;
/// `V∞` by Richardson extrapolation of the oscillation-corrected velocity
/// `W = V − Σ±E^{osc,1}±(t, X, V)` at `t_m = t₀2^m ≤ t_end`.
pub fn scattering_limits(
    split: &OscillatorySplit<'_>,
    probes: &[(Point, Point)],
    t0: f64,
    t_end: f64,
    dtau: f64,
    tail_exponent: f64,
) -> Result<ScatteringReport> {
    let history = split.history();
    let mut levels = Vec::new();
    let mut t = t0;
    while t <= t_end * (1.0 + 1e-12) {
        levels.push(t);
        t *= 2.0;
    }
    if levels.len() < 3 {
        return Err(Error::InsufficientData(format!(
            "{} extrapolation levels in [{t0}, {t_end}]; need 3",
            levels.len()
        )));
    }
    let results: Vec<Result<_>> = par::map_indexed(probes.len(), |p| {
        let (x, v) = &probes[p];
        let mut tr = integrate(history, x, v, 0.0, levels[0], dtau)?;
        let mut marks = vec![tr.times.len() - 1];
        let stops: Vec<f64> = levels[1..].iter().copied().chain(std::iter::once(t_end)).collect();
        for &stop in &stops {
            let (xs, vs) = tr.end();
            let from = *tr.times.last().expect("nodes");
            let seg = integrate(history, &xs, &vs, from, stop, dtau)?;
            tr.times.extend_from_slice(&seg.times[1..]);
            tr.x.extend_from_slice(&seg.x[1..]);
            tr.v.extend_from_slice(&seg.v[1..]);
            marks.push(tr.times.len() - 1);
        }
        marks.truncate(levels.len());
        let mut w = Vec::with_capacity(levels.len());
        for &n in &marks {
            let f = point_fields(split, tr.times[n], &tr.x[n], &tr.v[n])?;
            let vn = tr.v[n];
            w.push([vn[0] - f.osc1[0], vn[1] - f.osc1[1], vn[2] - f.osc1[2]]);
        }
        let (v_inf, err) = richardson(&w, tail_exponent);
        let m = w.len();
        let mut measured = f64::NAN;
        if m >= 3 {
            let a = max_abs_diff(&w[m - 2], &w[m - 3]);
            let b = max_abs_diff(&w[m - 1], &w[m - 2]);
            if a > 0.0 && b > 0.0 {
                measured = (a / b).log2();
            }
        }
        let vh = relativistic_velocity(&v_inf);
        let conv: Vec<f64> = tr.v.iter().map(|vn| max_abs_diff(vn, &v_inf)).collect();
        let pos: Vec<f64> = tr
            .times
            .iter()
            .zip(&tr.x)
            .map(|(&t, xn)| {
                let straight = [x[0] + t * vh[0], x[1] + t * vh[1], x[2] + t * vh[2]];
                max_abs_diff(xn, &straight)
            })
            .collect();
        Ok((v_inf, err, measured, tr.times, conv, pos))
    });
    let mut v_infinity = Vec::new();
    let mut error_bar = Vec::new();
    let mut tails = Vec::new();
    let mut convergence: Vec<(f64, f64)> = Vec::new();
    let mut position_defect: Vec<(f64, f64)> = Vec::new();
    for r in results {
        let (vi, e, m, times, conv, pos) = r?;
        v_infinity.push(vi);
        error_bar.push(e);
        if m.is_finite() {
            tails.push(m);
        }
        if convergence.is_empty() {
            convergence = times.iter().map(|&t| (t, 0.0)).collect();
            position_defect = convergence.clone();
        }
        for (i, (c, p)) in conv.iter().zip(&pos).enumerate() {
            convergence[i].1 = convergence[i].1.max(*c);
            position_defect[i].1 = position_defect[i].1.max(*p);
        }
    }
    tails.sort_by(|a, b| a.total_cmp(b));
    let measured_tail = tails.get(tails.len() / 2).copied().unwrap_or(f64::NAN);
    Ok(ScatteringReport {
        probes: probes.to_vec(),
        levels,
        v_infinity,
        error_bar,
        tail_exponent,
        measured_tail,
        convergence,
        position_defect,
    })
}

/// `sup_p |f(t, x+tV̂∞, V∞) − f(t′, x+t′V̂∞, V∞)|`.
pub fn f_infinity_check(
    dist: &Distribution,
    history: &dyn FieldHistory,
    report: &ScatteringReport,
    t: f64,
    t_prime: f64,
    dtau: f64,
) -> Result<f64> {
    if t > t_prime {
        return Err(Error::Ordering { s: t, t: t_prime });
    }
    let grid = dist.x_grid();
    let results: Vec<Result<f64>> = par::map_indexed(report.probes.len(), |p| {
        let x = report.probes[p].0;
        let v_inf = report.v_infinity[p];
        let vh = relativistic_velocity(&v_inf);
        let shifted = |s: f64| [x[0] + s * vh[0], x[1] + s * vh[1], x[2] + s * vh[2]];
        for s in [t, t_prime] {
            let xs = shifted(s);
            if (0..grid.dim()).any(|a| xs[a].abs() >= grid.half_length()) {
                return Err(Error::Wrap(format!("shifted probe {xs:?} at t = {s} leaves the box")));
            }
        }
        let a = evaluate_f(dist, history, t, &shifted(t), &v_inf, dtau)?;
        let b = evaluate_f(dist, history, t_prime, &shifted(t_prime), &v_inf, dtau)?;
        Ok((a - b).abs())
    });
    results.into_iter().try_fold(0.0_f64, |m, r| Ok(m.max(r?)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kg::{FieldState, Sign};
    use crate::oscillation::split_field;
    use crate::spectral::{BoxGrid, SpectralField};
    use crate::transport::{InitialData, RunHistory};

    fn data() -> InitialData {
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

    /// History with `E(t, x) = amp·g(t)·sin(x/2)` and no oscillatory part.
    fn history(g: impl Fn(f64) -> f64, steps: usize, dt: f64) -> RunHistory {
        let grid = BoxGrid::new(1, 4.0 * std::f64::consts::PI, 64).unwrap();
        let mut h = RunHistory::new(grid);
        let z = FieldState::zeros(grid);
        for n in 0..=steps {
            let t = n as f64 * dt;
            let e = SpectralField::sample(grid, |x| 0.01 * g(t) * (0.5 * x[0]).sin());
            let b = [z.profile(Sign::Plus).clone(), z.profile(Sign::Minus).clone()];
            h.push(t, e, b, SpectralField::zeros(grid, 1));
        }
        h
    }

    fn probes() -> Vec<(Point, Point)> {
        vec![([0.0; 3], [0.3, 0.0, 0.0]), ([1.0, 0.0, 0.0], [-0.2, 0.0, 0.0]), ([-2.0, 0.0, 0.0], [0.5, 0.0, 0.0])]
    }

    #[test]
    fn zero_field_scatters_trivially() {
        let h = history(|_| 0.0, 160, 0.1);
        let split = split_field(&h);
        let r = scattering_limits(&split, &probes(), 2.0, 16.0, 0.1, 1.0).unwrap();
        for (p, vi) in probes().iter().zip(&r.v_infinity) {
            assert_eq!(vi, &p.1);
        }
        assert_eq!(r.max_error_bar(), 0.0);
        assert!(r.position_defect.iter().all(|d| d.1 < 1e-13));
        let x = BoxGrid::new(1, 4.0 * std::f64::consts::PI, 64).unwrap();
        let v = BoxGrid::new(1, 1.5, 64).unwrap();
        let dist = Distribution::grid(data(), x, v).unwrap();
        let defect = f_infinity_check(&dist, &h, &r, 4.0, 8.0, 0.1).unwrap();
        assert!(defect < 1e-17, "{defect}");
    }

    #[test]
    fn frozen_field_gives_exact_limit() {
        let h = history(|t| if t < 2.0 { 1.0 } else { 0.0 }, 160, 0.1);
        let split = split_field(&h);
        let mut bars = Vec::new();
        for t0 in [4.0, 2.0] {
            let r = scattering_limits(&split, &probes(), t0, 16.0, 0.1, 1.0).unwrap();
            for (p, vi) in probes().iter().zip(&r.v_infinity) {
                let tr = integrate(&h, &p.0, &p.1, 0.0, 16.0, 0.1).unwrap();
                let n = tr.node_near(3.0);
                assert!(max_abs_diff(vi, &tr.v[n]) < 1e-15);
            }
            bars.push(r.max_error_bar());
        }
        assert!(bars[1] <= bars[0]);
        assert_eq!(bars[1], 0.0);
    }

    #[test]
    fn too_few_levels() {
        let h = history(|_| 0.0, 40, 0.1);
        let split = split_field(&h);
        assert!(matches!(scattering_limits(&split, &probes(), 2.0, 4.0, 0.1, 1.0), Err(Error::InsufficientData(_))));
    }

    #[test]
    fn richardson_removes_power_tail() {
        let vals: Vec<Point> = (0..5).map(|m| [1.0 + 3.0 / 2f64.powi(m) + 0.5 / 4f64.powi(m), 0.0, 0.0]).collect();
        let (best, err) = richardson(&vals, 1.0);
        assert!((best[0] - 1.0).abs() < 1e-12, "{best:?}");
        assert!(err < 1e-10);
    }
}
