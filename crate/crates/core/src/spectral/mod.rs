//! Fourier representation of fields on a periodic box.

mod field;
mod grid;

pub mod eval;
pub mod fft;
pub mod inequalities;
pub mod littlewood_paley;
pub mod multiplier;
pub mod norms;
pub mod sum;

pub use field::SpectralField;
pub use grid::{dot3, japanese, norm3, BoxGrid};
pub use littlewood_paley::{low_projector, lp_projector};
pub use multiplier::{apply_multiplier, gradient};
pub use norms::{norm, NormSpec};
