use crate::{Error, Point, Result};

/// Finite-difference Jacobians of a phase-space flow at one probe.
#[derive(Debug, Clone, PartialEq)]
pub struct JacobianSample {
    /// `∂X_a/∂x_b`, `∂X_a/∂v_b`, `∂V_a/∂x_b`, `∂V_a/∂v_b`.
    pub dx_dx: [[f64; 3]; 3],
    pub dx_dv: [[f64; 3]; 3],
    pub dv_dx: [[f64; 3]; 3],
    pub dv_dv: [[f64; 3]; 3],
    /// `det ∇ₓX` and its Richardson error estimate.
    pub det_x: f64,
    pub det_x_error: f64,
    /// Determinant of the full phase-space Jacobian.
    pub det_phase: f64,
    pub det_phase_error: f64,
}

/// Determinant by Gaussian elimination with partial pivoting.
pub fn determinant(m: &[Vec<f64>]) -> f64 {
    let n = m.len();
    let mut a: Vec<Vec<f64>> = m.to_vec();
    let mut det = 1.0;
    for c in 0..n {
        let p = (c..n).max_by(|&i, &j| a[i][c].abs().total_cmp(&a[j][c].abs())).expect("nonempty");
        if a[p][c] == 0.0 {
            return 0.0;
        }
        if p != c {
            a.swap(p, c);
            det = -det;
        }
        det *= a[c][c];
        for r in c + 1..n {
            let f = a[r][c] / a[c][c];
            for k in c..n {
                a[r][k] -= f * a[c][k];
            }
        }
    }
    det
}

/// Central-difference Jacobian of `flow` at `(x, v)` using `±h` and `±2h`.
///
/// Entries are Richardson-combined (fourth order); error estimates are the
/// difference to the plain `±h` second-order determinant.
pub fn flow_jacobian<F>(dim: usize, x: &Point, v: &Point, h: f64, flow: F) -> Result<JacobianSample>
where
    F: Fn(&Point, &Point) -> Result<(Point, Point)>,
{
    if !(h > 0.0 && h.is_finite()) || !(1..=3).contains(&dim) {
        return Err(Error::Stencil(format!("step {h} in dimension {dim}")));
    }
    let n = 2 * dim;
    let mut fine = vec![vec![0.0; n]; n];
    let mut rich = vec![vec![0.0; n]; n];
    for col in 0..n {
        let eval = |delta: f64| -> Result<Vec<f64>> {
            let (mut xs, mut vs) = (*x, *v);
            if col < dim {
                xs[col] += delta;
            } else {
                vs[col - dim] += delta;
            }
            let (xo, vo) = flow(&xs, &vs)?;
            Ok(xo[..dim].iter().chain(vo[..dim].iter()).copied().collect())
        };
        let (p1, m1, p2, m2) = (eval(h)?, eval(-h)?, eval(2.0 * h)?, eval(-2.0 * h)?);
        for row in 0..n {
            let d1 = (p1[row] - m1[row]) / (2.0 * h);
            let d2 = (p2[row] - m2[row]) / (4.0 * h);
            if !(d1.is_finite() && d2.is_finite()) {
                return Err(Error::Stencil("non-finite flow values".into()));
            }
            fine[row][col] = d1;
            rich[row][col] = d1 + (d1 - d2) / 3.0;
        }
    }
    let block = |m: &Vec<Vec<f64>>, r0: usize, c0: usize| {
        let mut out = [[0.0; 3]; 3];
        for i in 0..dim {
            for j in 0..dim {
                out[i][j] = m[r0 + i][c0 + j];
            }
        }
        out
    };
    let sub = |m: &Vec<Vec<f64>>| -> Vec<Vec<f64>> { m[..dim].iter().map(|r| r[..dim].to_vec()).collect() };
    let det_x = determinant(&sub(&rich));
    let det_phase = determinant(&rich);
    Ok(JacobianSample {
        dx_dx: block(&rich, 0, 0),
        dx_dv: block(&rich, 0, dim),
        dv_dx: block(&rich, dim, 0),
        dv_dv: block(&rich, dim, dim),
        det_x,
        det_x_error: (determinant(&sub(&fine)) - det_x).abs(),
        det_phase,
        det_phase_error: (determinant(&fine) - det_phase).abs(),
    })
}
