//! Rotation groups of E₂⁴ and Killing fields of its metric.
//!
//! Coordinates are named `(ξ, ϱ, ϑ, η) = (x1, x2, x3, x4)`. Killing fields
//! are linear, `W(p) = A·p`, so the Lie derivative of the constant metric
//! reduces to `S = gA + (gA)ᵀ`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::pseudometric::{Vector4, SIGNATURE};

pub type Mat4 = [[f64; 4]; 4];

pub const IDENTITY: Mat4 = [[1.0, 0.0, 0.0, 0.0], [0.0, 1.0, 0.0, 0.0], [0.0, 0.0, 1.0, 0.0], [0.0, 0.0, 0.0, 1.0]];

pub fn mat_vec(m: &Mat4, v: Vector4) -> Vector4 {
    Vector4(std::array::from_fn(|i| (0..4).map(|k| m[i][k] * v.0[k]).sum()))
}

pub fn mat_mul(a: &Mat4, b: &Mat4) -> Mat4 {
    std::array::from_fn(|i| std::array::from_fn(|j| (0..4).map(|k| a[i][k] * b[k][j]).sum()))
}

pub fn max_abs(m: &Mat4) -> f64 {
    m.iter().flatten().fold(0.0, |acc, x| acc.max(x.abs()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RotationKind {
    Hyperbolic,
    Elliptic,
}

/// The six coordinate-plane rotations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RotationGenerator {
    Omega1,
    Omega2,
    Omega3,
    Omega4,
    Omega5,
    Omega6,
}

impl RotationGenerator {
    pub const ALL: [RotationGenerator; 6] = [
        RotationGenerator::Omega1,
        RotationGenerator::Omega2,
        RotationGenerator::Omega3,
        RotationGenerator::Omega4,
        RotationGenerator::Omega5,
        RotationGenerator::Omega6,
    ];

    /// Ordered pair of zero-based coordinate slots mixed by the rotation.
    pub fn plane(self) -> (usize, usize) {
        match self {
            RotationGenerator::Omega1 => (0, 2),
            RotationGenerator::Omega2 => (0, 3),
            RotationGenerator::Omega3 => (1, 2),
            RotationGenerator::Omega4 => (1, 3),
            RotationGenerator::Omega5 => (0, 1),
            RotationGenerator::Omega6 => (2, 3),
        }
    }

    pub fn kind(self) -> RotationKind {
        match self {
            RotationGenerator::Omega5 | RotationGenerator::Omega6 => RotationKind::Elliptic,
            _ => RotationKind::Hyperbolic,
        }
    }

    /// Infinitesimal generator, `d/ds rotation_matrix(self, s)` at `s = 0`.
    ///
    /// For the elliptic planes this is the negative of the field
    /// `ξ∂ϱ − ϱ∂ξ` (resp. `ϑ∂η − η∂ϑ`), matching the orientation used by the
    /// surface parametrizations.
    pub fn generator_matrix(self) -> LinearField {
        let (i, j) = self.plane();
        let mut a = [[0.0; 4]; 4];
        a[i][j] = 1.0;
        a[j][i] = match self.kind() {
            RotationKind::Hyperbolic => 1.0,
            RotationKind::Elliptic => -1.0,
        };
        LinearField(a)
    }
}

impl fmt::Display for RotationGenerator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let k = RotationGenerator::ALL.iter().position(|g| g == self).unwrap() + 1;
        write!(f, "omega{k}")
    }
}

impl FromStr for RotationGenerator {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let lower = s.to_ascii_lowercase();
        let digit = lower
            .strip_prefix("omega")
            .or_else(|| lower.strip_prefix('Ω'))
            .or_else(|| lower.strip_prefix('ω'))
            .unwrap_or(&lower);
        match digit.parse::<usize>() {
            Ok(k @ 1..=6) => Ok(RotationGenerator::ALL[k - 1]),
            _ => Err(format!("unknown rotation generator `{s}` (expected omega1..omega6)")),
        }
    }
}

/// Coefficients `a..f` of the general Killing field.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct KillingParams {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
    pub e: f64,
    pub f: f64,
}

impl KillingParams {
    pub fn from_array([a, b, c, d, e, f]: [f64; 6]) -> Self {
        KillingParams { a, b, c, d, e, f }
    }

    /// Matrix of the field, `W(p) = A·p`.
    pub fn field(&self) -> LinearField {
        let KillingParams { a, b, c, d, e, f } = *self;
        LinearField([[0.0, -f, c, a], [f, 0.0, b, d], [c, b, 0.0, -e], [a, d, e, 0.0]])
    }
}

/// A linear vector field `W(p) = A·p` on E₂⁴.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearField(pub Mat4);

impl LinearField {
    pub fn apply(&self, p: Vector4) -> Vector4 {
        mat_vec(&self.0, p)
    }
}

/// `a(η∂ξ + ξ∂η) + b(ϑ∂ϱ + ϱ∂ϑ) + c(ϑ∂ξ + ξ∂ϑ) + d(η∂ϱ + ϱ∂η) + e(ϑ∂η − η∂ϑ) + f(ξ∂ϱ − ϱ∂ξ)`
/// evaluated at `p = (ξ, ϱ, ϑ, η)`.
pub fn killing_field_eval(params: &KillingParams, p: Vector4) -> Vector4 {
    let KillingParams { a, b, c, d, e, f } = *params;
    let [xi, rho, vartheta, eta] = p.0;
    Vector4::new(
        a * eta + c * vartheta - f * rho,
        b * vartheta + d * eta + f * xi,
        b * rho + c * xi - e * eta,
        a * xi + d * rho + e * vartheta,
    )
}

/// Lie derivative of the metric along a linear field:
/// `S_ij = Σ_k (g_ik A_kj + g_jk A_ki)`. Zero exactly when the field is Killing.
pub fn lie_residual(field: &LinearField) -> Mat4 {
    let a = &field.0;
    let g = SIGNATURE;
    std::array::from_fn(|i| std::array::from_fn(|j| g[i] * a[i][j] + g[j] * a[j][i]))
}

/// Finite rotation by parameter `s` in the generator's plane.
pub fn rotation_matrix(gen: RotationGenerator, s: f64) -> Mat4 {
    let (i, j) = gen.plane();
    let mut m = IDENTITY;
    match gen.kind() {
        RotationKind::Hyperbolic => {
            let (ch, sh) = (s.cosh(), s.sinh());
            m[i][i] = ch;
            m[i][j] = sh;
            m[j][i] = sh;
            m[j][j] = ch;
        }
        RotationKind::Elliptic => {
            let (sn, cs) = s.sin_cos();
            m[i][i] = cs;
            m[i][j] = sn;
            m[j][i] = -sn;
            m[j][j] = cs;
        }
    }
    m
}
