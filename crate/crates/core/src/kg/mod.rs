//! Klein-Gordon field `(□ + 1)φ = −ρ`, `E = −∇φ`, solved exactly in Fourier
//! space with Duhamel source accumulation and oscillatory profile bookkeeping.

mod state;
mod symbols;

pub use crate::quadrature::QuadratureRule;
pub use state::{initial_oscillatory_source, FieldState};
pub use symbols::{amplitude, green_hat, green_hat_dt, green_osc, lambda, Sign};
