//! Relativistic Vlasov transport: characteristics, distributions in grid or
//! particle form, density deposition and flow Jacobians.

pub mod characteristics;
pub mod distribution;
pub mod history;
pub mod initial;
pub mod jacobian;
pub mod spline;
pub mod velocity;

pub use characteristics::{integrate, CharacteristicBundle, Trajectory};
pub use distribution::{Distribution, InitialProfile};
pub use history::{AnalyticField, FieldHistory, FrozenAfter, RunHistory, SpectralSeries, ZeroField};
pub use initial::InitialData;
pub use jacobian::{flow_jacobian, JacobianSample};
pub use velocity::{gamma, mat_vec_jacobian, relativistic_velocity, velocity_jacobian};

use crate::{Point, Result};

/// `f(t, x, v) = f₀(X_{0,t}, V_{0,t})` with the foot found by backward RK4.
pub fn evaluate_f(
    dist: &Distribution,
    history: &dyn FieldHistory,
    t: f64,
    x: &Point,
    v: &Point,
    dtau: f64,
) -> Result<f64> {
    let (x0, v0) = integrate(history, x, v, t, 0.0, dtau)?.end();
    dist.initial().eval(&x0, &v0)
}
