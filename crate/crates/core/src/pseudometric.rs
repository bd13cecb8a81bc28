//! Linear algebra of the index-2 pseudo-Euclidean space E₂⁴.
//!
//! The metric has signature (−, −, +, +) in the standard rectangular
//! coordinates `(x1, x2, x3, x4)`. Nothing here takes the square root of a
//! self inner product: callers that need a length use `|inner(v, v)|`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::Serialize;

use crate::error::{Error, Result};

/// Diagonal of the metric matrix.
pub const SIGNATURE: [f64; 4] = [-1.0, -1.0, 1.0, 1.0];

/// Default half-width of the null band used by [`classify`].
pub const DEFAULT_NULL_TOL: f64 = 1e-12;

/// A point or tangent vector of E₂⁴.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct Vector4(pub [f64; 4]);

impl Vector4 {
    pub const ZERO: Vector4 = Vector4([0.0; 4]);

    pub const fn new(x1: f64, x2: f64, x3: f64, x4: f64) -> Self {
        Vector4([x1, x2, x3, x4])
    }

    /// Standard basis vector `i_{k+1}` (zero-based slot `k`).
    pub fn basis(k: usize) -> Self {
        let mut v = [0.0; 4];
        v[k] = 1.0;
        Vector4(v)
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|c| c.is_finite())
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0.0)
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().fold(0.0, |m, c| m.max(c.abs()))
    }

    pub fn scale(self, k: f64) -> Self {
        self * k
    }
}

impl fmt::Display for Vector4 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c, d] = self.0;
        write!(f, "({a}, {b}, {c}, {d})")
    }
}

impl Add for Vector4 {
    type Output = Vector4;
    fn add(self, rhs: Vector4) -> Vector4 {
        Vector4(std::array::from_fn(|i| self.0[i] + rhs.0[i]))
    }
}

impl Sub for Vector4 {
    type Output = Vector4;
    fn sub(self, rhs: Vector4) -> Vector4 {
        Vector4(std::array::from_fn(|i| self.0[i] - rhs.0[i]))
    }
}

impl Neg for Vector4 {
    type Output = Vector4;
    fn neg(self) -> Vector4 {
        Vector4(self.0.map(|c| -c))
    }
}

impl Mul<f64> for Vector4 {
    type Output = Vector4;
    fn mul(self, k: f64) -> Vector4 {
        Vector4(self.0.map(|c| c * k))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CausalCharacter {
    Spacelike,
    Timelike,
    Null,
}

impl fmt::Display for CausalCharacter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CausalCharacter::Spacelike => "spacelike",
            CausalCharacter::Timelike => "timelike",
            CausalCharacter::Null => "null",
        })
    }
}

/// Which level set `⟨p − m, p − m⟩ = ±r²` a point lies on.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "tag", rename_all = "snake_case")]
pub enum QuadricMembership {
    /// `⟨p − m, p − m⟩ = r²`.
    PseudoSphere {
        radius: f64,
    },
    /// `⟨p − m, p − m⟩ = −r²`.
    PseudoHyperbolic {
        radius: f64,
    },
    /// Pseudo-hyperbolic with `x1 > 0`; reported in preference to
    /// [`QuadricMembership::PseudoHyperbolic`].
    HyperbolicSpace {
        radius: f64,
    },
    None,
}

/// The index-2 inner product `−v1w1 − v2w2 + v3w3 + v4w4`.
#[inline]
pub fn inner(v: Vector4, w: Vector4) -> f64 {
    -v.0[0] * w.0[0] - v.0[1] * w.0[1] + v.0[2] * w.0[2] + v.0[3] * w.0[3]
}

/// Causal character of `v` with an absolute null band of half-width `tol`.
///
/// The zero vector is spacelike.
pub fn classify(v: Vector4, tol: f64) -> CausalCharacter {
    if v.is_zero() {
        return CausalCharacter::Spacelike;
    }
    let q = inner(v, v);
    if q < -tol {
        CausalCharacter::Timelike
    } else if q > tol {
        CausalCharacter::Spacelike
    } else {
        CausalCharacter::Null
    }
}

// expanded along the last row so that two equal leading rows give an exact zero
fn det3(m: [[f64; 3]; 3]) -> f64 {
    m[2][0] * (m[0][1] * m[1][2] - m[0][2] * m[1][1]) - m[2][1] * (m[0][0] * m[1][2] - m[0][2] * m[1][0])
        + m[2][2] * (m[0][0] * m[1][1] - m[0][1] * m[1][0])
}

/// Pseudo-Euclidean triple cross product: cofactor expansion of the formal
/// determinant whose first row is `(−i1, −i2, i3, i4)` and whose remaining
/// rows are `x`, `y`, `z`.
///
/// The result is g-orthogonal to all three arguments.
pub fn cross(x: Vector4, y: Vector4, z: Vector4) -> Vector4 {
    let rows = [x.0, y.0, z.0];
    let minor = |skip: usize| {
        let mut m = [[0.0; 3]; 3];
        for (r, row) in rows.iter().enumerate() {
            let mut c = 0;
            for (j, &val) in row.iter().enumerate() {
                if j != skip {
                    m[r][c] = val;
                    c += 1;
                }
            }
        }
        det3(m)
    };
    // first-row entries carry (−, −, +, +); cofactor signs alternate (+, −, +, −)
    Vector4::new(-minor(0), minor(1), minor(2), -minor(3))
}

/// Classify `p` against the quadrics centred at `m` with radius `r`.
pub fn quadric_membership(p: Vector4, m: Vector4, r: f64, tol: f64) -> Result<QuadricMembership> {
    if !(r > 0.0) || !r.is_finite() {
        return Err(Error::InvalidRadius(r));
    }
    let d = p - m;
    let q = inner(d, d);
    let r2 = r * r;
    Ok(if (q - r2).abs() <= tol {
        QuadricMembership::PseudoSphere { radius: r }
    } else if (q + r2).abs() <= tol {
        if p.0[0] > 0.0 {
            QuadricMembership::HyperbolicSpace { radius: r }
        } else {
            QuadricMembership::PseudoHyperbolic { radius: r }
        }
    } else {
        QuadricMembership::None
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn i(k: usize) -> Vector4 {
        Vector4::basis(k - 1)
    }

    #[test]
    fn inner_examples() {
        assert_eq!(inner(i(1), i(1)), -1.0);
        assert_eq!(inner(i(3), i(4)), 0.0);
        assert_eq!(inner(Vector4::new(1.0, 2.0, 3.0, 4.0), Vector4::new(1.0, 1.0, 1.0, 1.0)), 4.0);
    }

    #[test]
    fn classify_examples() {
        let tol = DEFAULT_NULL_TOL;
        assert_eq!(classify(Vector4::new(1.0, 0.0, 1.0, 0.0), tol), CausalCharacter::Null);
        assert_eq!(classify(i(2), tol), CausalCharacter::Timelike);
        assert_eq!(classify(Vector4::new(1.0, 1.0, 2.0, 3.0), tol), CausalCharacter::Spacelike);
        assert_eq!(classify(Vector4::ZERO, tol), CausalCharacter::Spacelike);
    }

    #[test]
    fn cross_examples() {
        assert_eq!(cross(i(2), i(3), i(4)), Vector4::new(-1.0, 0.0, 0.0, 0.0));
        assert_eq!(cross(i(1), i(2), i(3)), Vector4::new(0.0, 0.0, 0.0, -1.0));
        let x = Vector4::new(0.3, -1.2, 4.0, 2.5);
        let z = Vector4::new(7.0, 0.1, -0.4, 1.0);
        assert_eq!(cross(x, x, z), Vector4::ZERO);
    }

    #[test]
    fn quadric_examples() {
        let o = Vector4::ZERO;
        assert_eq!(
            quadric_membership(Vector4::new(3.0, 0.0, 0.0, 0.0), o, 3.0, 1e-12).unwrap(),
            QuadricMembership::HyperbolicSpace { radius: 3.0 }
        );
        assert_eq!(
            quadric_membership(Vector4::new(-3.0, 0.0, 0.0, 0.0), o, 3.0, 1e-12).unwrap(),
            QuadricMembership::PseudoHyperbolic { radius: 3.0 }
        );
        assert_eq!(
            quadric_membership(Vector4::new(0.0, 0.0, 2.0, 0.0), o, 2.0, 1e-12).unwrap(),
            QuadricMembership::PseudoSphere { radius: 2.0 }
        );
        for r in [0.5, 1.0, 7.0] {
            assert_eq!(
                quadric_membership(Vector4::new(1.0, 0.0, 1.0, 0.0), o, r, 1e-12).unwrap(),
                QuadricMembership::None
            );
        }
        assert_eq!(quadric_membership(o, o, 0.0, 1e-12), Err(Error::InvalidRadius(0.0)));
        assert!(quadric_membership(o, o, -1.0, 1e-12).is_err());
    }

    fn vec4(mag: f64) -> impl Strategy<Value = Vector4> {
        proptest::array::uniform4(-mag..mag).prop_map(Vector4)
    }

    proptest! {
        #[test]
        fn inner_is_symmetric_and_bilinear(v in vec4(10.0), w in vec4(10.0), u in vec4(10.0), a in -5.0f64..5.0) {
            prop_assert_eq!(inner(v, w), inner(w, v));
            let lhs = inner(v * a + u, w);
            let rhs = a * inner(v, w) + inner(u, w);
            prop_assert!((lhs - rhs).abs() <= 1e-12 * (1.0 + lhs.abs()));
        }

        #[test]
        fn cross_is_g_orthogonal(x in vec4(10.0), y in vec4(10.0), z in vec4(10.0)) {
            let c = cross(x, y, z);
            // entries are cubic in magnitude-10 data, so scale the 1e-12 bound accordingly
            let scale = 1.0 + c.max_abs() * 10.0;
            for a in [x, y, z] {
                prop_assert!(inner(c, a).abs() <= 1e-12 * scale, "inner = {}", inner(c, a));
            }
        }

        #[test]
        fn cross_is_antisymmetric(x in vec4(10.0), y in vec4(10.0), z in vec4(10.0)) {
            let c = cross(x, y, z);
            for d in [cross(y, x, z), cross(x, z, y), cross(z, y, x)] {
                prop_assert!((c + d).max_abs() <= 1e-12 * (1.0 + c.max_abs()));
            }
        }

        #[test]
        fn classify_is_scale_invariant(v in vec4(10.0), lam in prop_oneof![-10.0f64..-0.1, 0.1f64..10.0]) {
            prop_assert_eq!(classify(v * lam, 0.0), classify(v, 0.0));
        }
    }
}
