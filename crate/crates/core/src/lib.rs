//! Numerical laboratory for the relativistic Vlasov–Klein-Gordon system.
//!
//! The electric field is generated by the charge density through the
//! Klein-Gordon equation `(□ + 1)φ = −ρ`, `E = −∇φ`, and transports particles
//! with relativistic velocity `v̂ = v/⟨v⟩`. Besides solving the system on a
//! periodic box, the crate splits the field into pure Klein-Gordon
//! oscillations plus a remainder, decomposes particle velocities into
//! oscillatory and transport parts, and measures the decay and scattering
//! behaviour of every piece.
//!
//! Module map:
//!
//! - [`spectral`]: periodic grids, Fourier fields, multipliers,
//!   Littlewood-Paley shells and norms.
//! - [`kg`]: exact Klein-Gordon propagation, Duhamel sources and the
//!   oscillatory profiles `B±`.
//! - [`transport`]: characteristics, semi-Lagrangian and particle
//!   distributions, density deposition, Jacobians.
//! - [`oscillation`]: field splitting, resolvent kernels and the velocity,
//!   straightening and Duhamel-decoupling decompositions.
//! - [`diagnostics`]: decay fits, scattering limits and the bootstrap ledger.
//! - [`driver`]: configuration, the coupled time loop, archives and check
//!   suites.

pub mod diagnostics;
pub mod driver;
pub mod error;
pub mod kg;
pub mod oscillation;
pub mod par;
pub mod quadrature;
pub mod spectral;
pub mod transport;

pub use error::{Error, Result};

/// Phase-space coordinates are stored in three slots; components beyond the
/// run dimension stay zero.
pub type Point = [f64; 3];

pub use num_complex::Complex64;
