//! Field splitting `E = ΣE^osc± + E^r`, resolvent kernels, and the velocity,
//! straightening and Duhamel-decoupling decompositions with their residuals.

pub mod decomposition;
pub mod duhamel;
pub mod keyint;
pub mod resolvent;
pub mod split;

pub use decomposition::{
    point_fields, qtr1_eval, qtr_eval, straightening_decomposition, velocity_decomposition, PointFields, Qtr1Parts,
    QtrParts, StraighteningDecomposition, StraighteningParts, VelocityDecomposition, VelocityParts,
};
pub use duhamel::{DuhamelDecoupling, DuhamelResidual};
pub use keyint::{keyint_check, keyint_suite, KeyintSample};
pub use resolvent::{omega, resolvent_apply, KernelForm, ResolventKernel};
pub use split::{split_field, split_state, OscillatorySplit};
