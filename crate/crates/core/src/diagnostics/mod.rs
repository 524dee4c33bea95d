//! Decay fits, scattering limits and the bootstrap ledger.

pub mod bootstrap;
pub mod fit;
pub mod scattering;

pub use bootstrap::{bootstrap_monitor, frames_from_history, Ledger, LedgerFrame, LedgerRow, RowStatus};
pub use fit::{fit_decay, fit_decay_exponent, period_average, DecayReport, KG_PERIOD};
pub use scattering::{f_infinity_check, richardson, scattering_limits, ScatteringReport};
