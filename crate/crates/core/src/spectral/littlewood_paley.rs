//! Homogeneous Littlewood-Paley shells on the grid.
//!
//! On the logarithmic scale `u = log₂|k| − j` the shell profile is
//! `ψ(u) = S(u + ½) − S(u − ½)` with the C^∞ step
//! `S(u) = h(u + ½) / (h(u + ½) + h(½ − u))`, `h(y) = e^{−1/y}` for `y > 0`.
//! `ψ` is supported in `[−1, 1]`, equals one at `u = 0`, and its integer
//! translates telescope to one. The low lump is `P_{≤0} = 1 − Σ_{j≥1} P_j`,
//! with symbol `1 − S(log₂|k| − ½)` and value one at `k = 0`.

use num_complex::Complex64;

use super::{multiplier, norm3, BoxGrid, SpectralField};
use crate::{Error, Result};

fn h(y: f64) -> f64 {
    if y <= 0.0 {
        0.0
    } else {
        (-1.0 / y).exp()
    }
}

/// Smooth step: 0 for `u ≤ −½`, 1 for `u ≥ ½`.
pub fn smooth_step(u: f64) -> f64 {
    if u <= -0.5 {
        0.0
    } else if u >= 0.5 {
        1.0
    } else {
        let a = h(u + 0.5);
        a / (a + h(0.5 - u))
    }
}

/// Shell profile on the log₂ scale.
pub fn bump(u: f64) -> f64 {
    smooth_step(u + 0.5) - smooth_step(u - 0.5)
}

/// Symbol of `P_j` at radius `r = |k|`.
pub fn shell_symbol(r: f64, j: i32) -> f64 {
    if r <= 0.0 {
        return 0.0;
    }
    bump(r.log2() - j as f64)
}

/// Symbol of `P_{≤0}` at radius `r`.
pub fn low_symbol(r: f64) -> f64 {
    if r <= 0.0 {
        return 1.0;
    }
    1.0 - smooth_step(r.log2() - 0.5)
}

/// Highest shell index whose support meets the grid's wavenumbers.
pub fn top_shell(grid: &BoxGrid) -> i32 {
    // support of P_j starts at 2^{j-1}
    let kmax = grid.max_wavenumber();
    let mut j = 0;
    while 2f64.powi(j) < kmax {
        j += 1;
    }
    j
}

/// Whether shell `j` lies entirely below the per-axis Nyquist wavenumber.
pub fn shell_fully_resolved(grid: &BoxGrid, j: i32) -> bool {
    2f64.powi(j + 1) <= grid.nyquist_wavenumber()
}

/// `P_j h` with a hard zero outside `[2^{j−1}, 2^{j+1}]`.
pub fn lp_projector(field: &SpectralField, j: i32) -> Result<SpectralField> {
    let grid = field.grid();
    if j > top_shell(grid) {
        return Err(Error::Resolution(format!(
            "shell {j} lies beyond the largest grid wavenumber {:.3}",
            grid.max_wavenumber()
        )));
    }
    multiplier::apply_multiplier(field, |k| Complex64::new(shell_symbol(norm3(k), j), 0.0))
}

/// `P_{≤0} h`, including the mean.
pub fn low_projector(field: &SpectralField) -> SpectralField {
    multiplier::apply_multiplier(field, |k| Complex64::new(low_symbol(norm3(k)), 0.0)).expect("finite symbol")
}

/// Low lump followed by shells `1..=top_shell`.
pub fn decompose(field: &SpectralField) -> (SpectralField, Vec<(i32, SpectralField)>) {
    let low = low_projector(field);
    let shells =
        (1..=top_shell(field.grid())).map(|j| (j, lp_projector(field, j).expect("resolvable shell"))).collect();
    (low, shells)
}
