use crate::Point;

/// `⟨v⟩ = √(1 + |v|²)`.
pub fn gamma(v: &Point) -> f64 {
    (1.0 + v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt()
}

/// Relativistic velocity `v̂ = v/⟨v⟩`.
pub fn relativistic_velocity(v: &Point) -> Point {
    let g = gamma(v);
    [v[0] / g, v[1] / g, v[2] / g]
}

/// `∇ᵥv̂ = (𝕀 − v̂⊗v̂)/⟨v⟩`, symmetric.
pub fn velocity_jacobian(v: &Point) -> [[f64; 3]; 3] {
    let g = gamma(v);
    let vh = relativistic_velocity(v);
    let mut m = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            let delta = if i == j { 1.0 } else { 0.0 };
            m[i][j] = (delta - vh[i] * vh[j]) / g;
        }
    }
    m
}

/// Inverse map `v = v̂/√(1 − |v̂|²)`; requires `|v̂| < 1`.
pub fn from_relativistic(vh: &Point) -> Point {
    let s = (1.0 - (vh[0] * vh[0] + vh[1] * vh[1] + vh[2] * vh[2])).sqrt();
    [vh[0] / s, vh[1] / s, vh[2] / s]
}

pub fn mat_vec(m: &[[f64; 3]; 3], x: &Point) -> Point {
    let mut out = [0.0; 3];
    for i in 0..3 {
        out[i] = m[i][0] * x[0] + m[i][1] * x[1] + m[i][2] * x[2];
    }
    out
}

/// `∇ᵥv̂(v) w`.
pub fn mat_vec_jacobian(v: &Point, w: &Point) -> Point {
    mat_vec(&velocity_jacobian(v), w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn worked_example() {
        assert_eq!(relativistic_velocity(&[0.0; 3]), [0.0; 3]);
        let vh = relativistic_velocity(&[3.0, 0.0, 0.0]);
        assert!((vh[0] - 3.0 / 10f64.sqrt()).abs() < 1e-15);
    }

    proptest! {
        #[test]
        fn speed_below_one(a in -50.0..50.0f64, b in -50.0..50.0f64, c in -50.0..50.0f64) {
            let vh = relativistic_velocity(&[a, b, c]);
            prop_assert!(vh[0] * vh[0] + vh[1] * vh[1] + vh[2] * vh[2] < 1.0);
            let back = from_relativistic(&vh);
            prop_assert!((back[0] - a).abs() < 1e-9 * (1.0 + a.abs().powi(3)));
        }

        #[test]
        fn jacobian_matches_finite_differences(a in -3.0..3.0f64, b in -3.0..3.0f64, c in -3.0..3.0f64) {
            let v = [a, b, c];
            let m = velocity_jacobian(&v);
            let h = 1e-5;
            for j in 0..3 {
                let mut vp = v;
                let mut vm = v;
                vp[j] += h;
                vm[j] -= h;
                let (p, q) = (relativistic_velocity(&vp), relativistic_velocity(&vm));
                for i in 0..3 {
                    prop_assert!(((p[i] - q[i]) / (2.0 * h) - m[i][j]).abs() < 1e-6);
                }
            }
        }
    }
}
