use super::history::FieldHistory;
use super::jacobian::{flow_jacobian, JacobianSample};
use super::velocity::relativistic_velocity;
use crate::{par, Error, Point, Result};

/// Sampled solution of `ẋ = v̂`, `v̇ = E(t, x)` between two times.
///
/// Nodes are stored in integration order; positions are not wrapped.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub x: Vec<Point>,
    pub v: Vec<Point>,
}

impl Trajectory {
    pub fn start(&self) -> (Point, Point) {
        (self.x[0], self.v[0])
    }

    pub fn end(&self) -> (Point, Point) {
        let n = self.times.len() - 1;
        (self.x[n], self.v[n])
    }

    /// Node whose time is closest to `t`.
    pub fn node_near(&self, t: f64) -> usize {
        let mut best = 0;
        for (i, &s) in self.times.iter().enumerate() {
            if (s - t).abs() < (self.times[best] - t).abs() {
                best = i;
            }
        }
        best
    }
}

fn add_scaled(a: &Point, b: &Point, c: f64) -> Point {
    [a[0] + c * b[0], a[1] + c * b[1], a[2] + c * b[2]]
}

fn rhs(history: &dyn FieldHistory, t: f64, x: &Point, v: &Point) -> Result<(Point, Point)> {
    Ok((relativistic_velocity(v), history.electric(t, x)?))
}

/// One classical RK4 step of signed size `h`.
pub fn rk4_step(history: &dyn FieldHistory, t: f64, x: &Point, v: &Point, h: f64) -> Result<(Point, Point)> {
    let (k1x, k1v) = rhs(history, t, x, v)?;
    let (k2x, k2v) = rhs(history, t + 0.5 * h, &add_scaled(x, &k1x, 0.5 * h), &add_scaled(v, &k1v, 0.5 * h))?;
    let (k3x, k3v) = rhs(history, t + 0.5 * h, &add_scaled(x, &k2x, 0.5 * h), &add_scaled(v, &k2v, 0.5 * h))?;
    let (k4x, k4v) = rhs(history, t + h, &add_scaled(x, &k3x, h), &add_scaled(v, &k3v, h))?;
    let mut xn = *x;
    let mut vn = *v;
    for a in 0..3 {
        xn[a] += h / 6.0 * (k1x[a] + 2.0 * k2x[a] + 2.0 * k3x[a] + k4x[a]);
        vn[a] += h / 6.0 * (k1v[a] + 2.0 * k2v[a] + 2.0 * k3v[a] + k4v[a]);
    }
    Ok((xn, vn))
}

/// Integrates the characteristic through `(x, v)` at time `from` to time `to`
/// (either direction) with steps of at most `dtau`.
pub fn integrate(
    history: &dyn FieldHistory,
    x: &Point,
    v: &Point,
    from: f64,
    to: f64,
    dtau: f64,
) -> Result<Trajectory> {
    if !(dtau > 0.0 && dtau.is_finite()) {
        return Err(Error::Domain(format!("step {dtau} must be positive")));
    }
    history.check_time(from)?;
    history.check_time(to)?;
    let span = to - from;
    let steps = ((span.abs() / dtau) - 1e-9).ceil().max(0.0) as usize;
    let mut traj = Trajectory {
        times: Vec::with_capacity(steps + 1),
        x: Vec::with_capacity(steps + 1),
        v: Vec::with_capacity(steps + 1),
    };
    traj.times.push(from);
    traj.x.push(*x);
    traj.v.push(*v);
    if steps == 0 {
        return Ok(traj);
    }
    let h = span / steps as f64;
    let (mut xc, mut vc) = (*x, *v);
    for n in 0..steps {
        let t = from + n as f64 * h;
        let (xn, vn) = rk4_step(history, t, &xc, &vc, h)?;
        xc = xn;
        vc = vn;
        traj.times.push(if n + 1 == steps { to } else { from + (n + 1) as f64 * h });
        traj.x.push(xc);
        traj.v.push(vc);
    }
    Ok(traj)
}

/// Backward characteristics `(X_{s,t}, V_{s,t})` for a probe set.
#[derive(Debug, Clone)]
pub struct CharacteristicBundle {
    pub t: f64,
    pub s: f64,
    pub probes: Vec<(Point, Point)>,
    /// `trajectories[p]` runs from `t` down to `s`.
    pub trajectories: Vec<Trajectory>,
}

impl CharacteristicBundle {
    pub fn backward(history: &dyn FieldHistory, probes: &[(Point, Point)], t: f64, s: f64, dtau: f64) -> Result<Self> {
        if s > t {
            return Err(Error::Ordering { s, t });
        }
        let trajectories: Vec<Result<Trajectory>> =
            par::map_indexed(probes.len(), |p| integrate(history, &probes[p].0, &probes[p].1, t, s, dtau));
        let trajectories = trajectories.into_iter().collect::<Result<Vec<_>>>()?;
        Ok(Self { t, s, probes: probes.to_vec(), trajectories })
    }

    /// `(X_{s,t}, V_{s,t})` for every probe.
    pub fn feet(&self) -> Vec<(Point, Point)> {
        self.trajectories.iter().map(|tr| tr.end()).collect()
    }

    /// Largest `|V̂|` over all probes and nodes.
    pub fn max_speed(&self) -> f64 {
        self.trajectories
            .iter()
            .flat_map(|tr| tr.v.iter())
            .map(|v| {
                let vh = relativistic_velocity(v);
                (vh[0] * vh[0] + vh[1] * vh[1] + vh[2] * vh[2]).sqrt()
            })
            .fold(0.0, f64::max)
    }

    /// Central-difference Jacobians of `(x, v) ↦ (X_{s,t}, V_{s,t})` at every probe.
    pub fn jacobians(&self, history: &dyn FieldHistory, dtau: f64, h: f64) -> Result<Vec<JacobianSample>> {
        let dim = history.dim();
        let out: Vec<Result<JacobianSample>> = par::map_indexed(self.probes.len(), |p| {
            let (x, v) = &self.probes[p];
            flow_jacobian(dim, x, v, h, |x, v| Ok(integrate(history, x, v, self.t, self.s, dtau)?.end()))
        });
        out.into_iter().collect()
    }
}

#[cfg(test)]
mod tests {
    use super::super::history::{AnalyticField, ZeroField};
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn free_streaming_exact() {
        let h = ZeroField { dim: 1 };
        let v = [0.7, 0.0, 0.0];
        let tr = integrate(&h, &[1.0, 0.0, 0.0], &v, 5.0, 2.0, 0.1).unwrap();
        let (x, vv) = tr.end();
        let vh = relativistic_velocity(&v);
        assert!((x[0] - (1.0 - 3.0 * vh[0])).abs() < 1e-14);
        assert_eq!(vv, v);
        assert_eq!(tr.times[0], 5.0);
        assert_eq!(*tr.times.last().unwrap(), 2.0);
    }

    fn manufactured() -> AnalyticField<impl Fn(f64, &Point) -> Point + Sync> {
        let l = 10.0;
        AnalyticField {
            dim: 1,
            span: (0.0, 20.0),
            field: move |t: f64, x: &Point| [0.3 * t.cos() * (PI * x[0] / l).sin(), 0.0, 0.0],
        }
    }

    #[test]
    fn bundle_jacobians_free_streaming() {
        let h = ZeroField { dim: 1 };
        let probes = vec![([0.5, 0.0, 0.0], [0.3, 0.0, 0.0]), ([-1.0, 0.0, 0.0], [-0.8, 0.0, 0.0])];
        let b = CharacteristicBundle::backward(&h, &probes, 6.0, 1.0, 0.1).unwrap();
        for j in b.jacobians(&h, 0.1, 1e-2).unwrap() {
            assert!((j.det_x - 1.0).abs() < 1e-12);
            assert!((j.det_phase - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn fourth_order_against_refined_reference() {
        let h = manufactured();
        let x = [0.4, 0.0, 0.0];
        let v = [0.2, 0.0, 0.0];
        let reference = integrate(&h, &x, &v, 10.0, 0.0, 0.01).unwrap().end();
        let err = |dt: f64| {
            let (xe, ve) = integrate(&h, &x, &v, 10.0, 0.0, dt).unwrap().end();
            (xe[0] - reference.0[0]).abs() + (ve[0] - reference.1[0]).abs()
        };
        let (e1, e2) = (err(0.4), err(0.2));
        assert!(e1 / e2 > 12.0, "ratio {}", e1 / e2);
    }

    #[test]
    fn time_reversible() {
        let h = manufactured();
        let x = [-2.0, 0.0, 0.0];
        let v = [0.9, 0.0, 0.0];
        let back = integrate(&h, &x, &v, 12.0, 3.0, 0.05).unwrap();
        let (xs, vs) = back.end();
        let fwd = integrate(&h, &xs, &vs, 3.0, 12.0, 0.05).unwrap();
        let (xr, vr) = fwd.end();
        assert!((xr[0] - x[0]).abs() < 1e-7 && (vr[0] - v[0]).abs() < 1e-7);
    }

    #[test]
    fn missing_history_reported() {
        let h = manufactured();
        let r = integrate(&h, &[0.0; 3], &[0.0; 3], 25.0, 0.0, 0.1);
        assert!(matches!(r, Err(Error::MissingHistory { .. })));
    }
}
