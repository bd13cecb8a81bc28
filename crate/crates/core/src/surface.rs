//! The three rotational families as maps `(u, v, t) → E₂⁴`.
//!
//! Each family is the orbit of a planar profile curve under two commuting
//! coordinate-plane rotations. `u` and `v` are the rotation parameters and
//! `t` is the profile parameter.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::expr::{Jet, ProfileFunction};
use crate::isometry::RotationGenerator;
use crate::pseudometric::Vector4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FamilyKind {
    /// Hyperbolic rotations in the `(x1, x3)` and `(x2, x4)` planes.
    Hyperbolic14,
    /// Hyperbolic rotations in the `(x1, x4)` and `(x2, x3)` planes.
    Hyperbolic23,
    /// Elliptic rotations in the `(x1, x2)` and `(x3, x4)` planes.
    Elliptic56,
}

impl fmt::Display for FamilyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FamilyKind::Hyperbolic14 => "hyperbolic14",
            FamilyKind::Hyperbolic23 => "hyperbolic23",
            FamilyKind::Elliptic56 => "elliptic56",
        })
    }
}

impl FromStr for FamilyKind {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "hyperbolic14" => Ok(FamilyKind::Hyperbolic14),
            "hyperbolic23" => Ok(FamilyKind::Hyperbolic23),
            "elliptic56" => Ok(FamilyKind::Elliptic56),
            _ => Err(format!("unknown family `{s}`")),
        }
    }
}

/// Which pair of profile slots carries the curve.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Variant {
    A,
    B,
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Variant::A => "A",
            Variant::B => "B",
        })
    }
}

/// How one rotation parameter enters its coordinate pair: the pair is
/// `profile · (P(w), Q(w))`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Shape {
    CoshSinh,
    SinhCosh,
    SinCos,
    CosNegSin,
}

impl Shape {
    /// `(P, Q)` differentiated `order` times (0, 1 or 2).
    pub(crate) fn eval(self, w: f64, order: u8) -> (f64, f64) {
        let (ch, sh) = (w.cosh(), w.sinh());
        let (sn, cs) = w.sin_cos();
        match (self, order % 2, order % 4) {
            (Shape::CoshSinh, 0, _) => (ch, sh),
            (Shape::CoshSinh, _, _) => (sh, ch),
            (Shape::SinhCosh, 0, _) => (sh, ch),
            (Shape::SinhCosh, _, _) => (ch, sh),
            (Shape::SinCos, _, 0) => (sn, cs),
            (Shape::SinCos, _, 1) => (cs, -sn),
            (Shape::SinCos, _, 2) => (-sn, -cs),
            (Shape::SinCos, _, _) => (-cs, sn),
            (Shape::CosNegSin, _, 0) => (cs, -sn),
            (Shape::CosNegSin, _, 1) => (-sn, -cs),
            (Shape::CosNegSin, _, 2) => (-cs, sn),
            (Shape::CosNegSin, _, _) => (sn, cs),
        }
    }
}

/// Coordinate pair, shape and generator of one rotation parameter.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Slot {
    pub slots: (usize, usize),
    pub shape: Shape,
    pub generator: RotationGenerator,
}

impl Slot {
    /// Adds `scale · d^order(P, Q)(w)` into the slot pair of `out`.
    pub(crate) fn accumulate(&self, out: &mut [f64; 4], scale: f64, w: f64, order: u8) {
        let (p, q) = self.shape.eval(w, order);
        out[self.slots.0] += scale * p;
        out[self.slots.1] += scale * q;
    }
}

/// Diagonal first fundamental form: `E du² + G dv² + N dt²`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MetricCoefficients {
    #[serde(rename = "E")]
    pub e: f64,
    #[serde(rename = "G")]
    pub g: f64,
    #[serde(rename = "N")]
    pub n: f64,
}

impl MetricCoefficients {
    pub fn is_degenerate(&self) -> bool {
        self.e == 0.0 || self.g == 0.0 || self.n == 0.0
    }

    pub fn quadratic(&self, du: f64, dv: f64, dt: f64) -> f64 {
        self.e * du * du + self.g * dv * dv + self.n * dt * dt
    }
}

/// Coordinates and arclength velocities on a rotational manifold.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct GeodesicState {
    pub u: f64,
    pub v: f64,
    pub t: f64,
    pub du: f64,
    pub dv: f64,
    pub dt: f64,
}

impl GeodesicState {
    pub fn new(u: f64, v: f64, t: f64, du: f64, dv: f64, dt: f64) -> Self {
        GeodesicState { u, v, t, du, dv, dt }
    }

    pub fn to_array(self) -> [f64; 6] {
        [self.u, self.v, self.t, self.du, self.dv, self.dt]
    }

    pub fn from_array([u, v, t, du, dv, dt]: [f64; 6]) -> Self {
        GeodesicState { u, v, t, du, dv, dt }
    }

    pub fn is_finite(&self) -> bool {
        self.to_array().iter().all(|x| x.is_finite())
    }

    pub fn with_velocities(self, du: f64, dv: f64, dt: f64) -> Self {
        GeodesicState { du, dv, dt, ..self }
    }
}

/// Value of the Lagrangian together with the degeneracy flag of the metric.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LagrangianValue {
    pub value: f64,
    pub degenerate: bool,
}

/// A rotational family with its two active profile functions.
#[derive(Debug, Clone, PartialEq)]
pub struct SurfaceFamily {
    pub kind: FamilyKind,
    pub variant: Variant,
    pub fa: ProfileFunction,
    pub fb: ProfileFunction,
}

impl SurfaceFamily {
    pub fn new(kind: FamilyKind, variant: Variant, fa: ProfileFunction, fb: ProfileFunction) -> Result<Self> {
        if fa.domain != fb.domain {
            return Err(Error::Precondition(format!(
                "profiles must share a domain: fa on {:?}, fb on {:?}",
                fa.domain, fb.domain
            )));
        }
        Ok(SurfaceFamily { kind, variant, fa, fb })
    }

    /// Parses both profiles over a shared domain.
    pub fn from_text(kind: FamilyKind, variant: Variant, fa: &str, fb: &str, domain: (f64, f64)) -> Result<Self> {
        let fa = ProfileFunction::parse(fa, domain)?;
        let fb = ProfileFunction::parse(fb, domain)?;
        SurfaceFamily::new(kind, variant, fa, fb)
    }

    pub fn domain(&self) -> (f64, f64) {
        self.fa.domain
    }

    pub fn contains(&self, t: f64) -> bool {
        self.fa.contains(t)
    }

    pub(crate) fn slots(&self) -> (Slot, Slot) {
        use RotationGenerator::*;
        use Shape::*;
        let mk = |slots, shape, generator| Slot { slots, shape, generator };
        match (self.kind, self.variant) {
            (FamilyKind::Hyperbolic14, Variant::A) => (mk((0, 2), CoshSinh, Omega1), mk((1, 3), SinhCosh, Omega4)),
            (FamilyKind::Hyperbolic14, Variant::B) => (mk((0, 2), SinhCosh, Omega1), mk((1, 3), CoshSinh, Omega4)),
            (FamilyKind::Hyperbolic23, Variant::A) => (mk((0, 3), CoshSinh, Omega2), mk((1, 2), CoshSinh, Omega3)),
            (FamilyKind::Hyperbolic23, Variant::B) => (mk((0, 3), SinhCosh, Omega2), mk((1, 2), SinhCosh, Omega3)),
            (FamilyKind::Elliptic56, Variant::A) => (mk((0, 1), SinCos, Omega5), mk((2, 3), SinCos, Omega6)),
            (FamilyKind::Elliptic56, Variant::B) => (mk((0, 1), CosNegSin, Omega5), mk((2, 3), CosNegSin, Omega6)),
        }
    }

    /// Generators shifting `u` and `v` respectively.
    pub fn generators(&self) -> (RotationGenerator, RotationGenerator) {
        let (a, b) = self.slots();
        (a.generator, b.generator)
    }

    /// Signs `(sE, sG, sNa, sNb)` with `E = sE·fa²`, `G = sG·fb²`,
    /// `N = sNa·fa'² + sNb·fb'²`.
    fn signs(&self) -> [f64; 4] {
        match (self.kind, self.variant) {
            (FamilyKind::Hyperbolic14, Variant::A) => [1.0, -1.0, -1.0, 1.0],
            (FamilyKind::Hyperbolic14, Variant::B) => [-1.0, 1.0, 1.0, -1.0],
            (FamilyKind::Hyperbolic23, Variant::A) => [1.0, 1.0, -1.0, -1.0],
            (FamilyKind::Hyperbolic23, Variant::B) => [-1.0, -1.0, 1.0, 1.0],
            (FamilyKind::Elliptic56, _) => [-1.0, 1.0, -1.0, 1.0],
        }
    }

    pub fn jets(&self, t: f64) -> Result<(Jet, Jet)> {
        Ok((self.fa.jet(t)?, self.fb.jet(t)?))
    }

    /// Metric coefficients and their `t`-derivatives.
    pub fn metric_with_derivative(&self, t: f64) -> Result<(MetricCoefficients, MetricCoefficients)> {
        let (a, b) = self.jets(t)?;
        let [se, sg, sna, snb] = self.signs();
        let m = MetricCoefficients { e: se * a.f * a.f, g: sg * b.f * b.f, n: sna * a.d1 * a.d1 + snb * b.d1 * b.d1 };
        let dm = MetricCoefficients {
            e: 2.0 * se * a.f * a.d1,
            g: 2.0 * sg * b.f * b.d1,
            n: 2.0 * (sna * a.d1 * a.d2 + snb * b.d1 * b.d2),
        };
        Ok((m, dm))
    }

    pub fn metric_coefficients(&self, t: f64) -> Result<MetricCoefficients> {
        Ok(self.metric_with_derivative(t)?.0)
    }

    pub fn immerse(&self, u: f64, v: f64, t: f64) -> Result<Vector4> {
        let (a, b) = (self.fa.value_at(t)?, self.fb.value_at(t)?);
        let (su, sv) = self.slots();
        let mut x = [0.0; 4];
        su.accumulate(&mut x, a, u, 0);
        sv.accumulate(&mut x, b, v, 0);
        Ok(Vector4(x))
    }

    /// Coordinate tangents `(∂u, ∂v, ∂t)` of [`SurfaceFamily::immerse`].
    pub fn tangent_frame(&self, u: f64, v: f64, t: f64) -> Result<(Vector4, Vector4, Vector4)> {
        let (a, b) = self.jets(t)?;
        let (su, sv) = self.slots();
        let (mut du, mut dv, mut dt) = ([0.0; 4], [0.0; 4], [0.0; 4]);
        su.accumulate(&mut du, a.f, u, 1);
        sv.accumulate(&mut dv, b.f, v, 1);
        su.accumulate(&mut dt, a.d1, u, 0);
        sv.accumulate(&mut dt, b.d1, v, 0);
        Ok((Vector4(du), Vector4(dv), Vector4(dt)))
    }

    /// `E du² + G dv² + N dt²` at the state.
    pub fn lagrangian(&self, st: &GeodesicState) -> Result<LagrangianValue> {
        let m = self.metric_coefficients(st.t)?;
        Ok(LagrangianValue { value: m.quadratic(st.du, st.dv, st.dt), degenerate: m.is_degenerate() })
    }

    /// Rescales the velocities so that the Lagrangian equals −1.
    pub fn normalize_timelike(&self, st: &GeodesicState) -> Result<GeodesicState> {
        let l = self.lagrangian(st)?.value;
        if !(l < 0.0) {
            return Err(Error::NotTimelike(l));
        }
        let k = 1.0 / (-l).sqrt();
        Ok(st.with_velocities(st.du * k, st.dv * k, st.dt * k))
    }

    /// Recovers `(u, v, t)` from an ambient point on the surface.
    ///
    /// `hint` seeds the Newton solve for `t` and picks the branch of elliptic
    /// angles; it must lie near the answer.
    pub fn chart(&self, p: Vector4, hint: (f64, f64, f64)) -> Result<(f64, f64, f64)> {
        let (su, sv) = self.slots();
        let x = p.0;
        let radius2 = |s: &Slot| {
            let (xi, xj) = (x[s.slots.0], x[s.slots.1]);
            match s.shape {
                Shape::CoshSinh => xi * xi - xj * xj,
                Shape::SinhCosh => xj * xj - xi * xi,
                Shape::SinCos | Shape::CosNegSin => xi * xi + xj * xj,
            }
        };
        let (ra, rb) = (radius2(&su), radius2(&sv));

        let mut t = hint.2;
        for _ in 0..60 {
            let (a, b) = self.jets(t)?;
            let (fa_res, fa_slope) = (a.f * a.f - ra, 2.0 * a.f * a.d1);
            let (fb_res, fb_slope) = (b.f * b.f - rb, 2.0 * b.f * b.d1);
            let (res, slope) = if fa_slope.abs() >= fb_slope.abs() { (fa_res, fa_slope) } else { (fb_res, fb_slope) };
            if slope == 0.0 {
                break;
            }
            let step = res / slope;
            let (lo, hi) = self.domain();
            t = (t - step).clamp(lo, hi);
            if step.abs() <= 1e-15 * (1.0 + t.abs()) {
                break;
            }
        }
        let (a, b) = (self.fa.value_at(t)?, self.fb.value_at(t)?);
        let angle = |s: &Slot, scale: f64, near: f64| -> f64 {
            let (xi, xj) = (x[s.slots.0] / scale, x[s.slots.1] / scale);
            match s.shape {
                Shape::CoshSinh => (xj / xi).atanh(),
                Shape::SinhCosh => (xi / xj).atanh(),
                Shape::SinCos => unwrap_near(xi.atan2(xj), near),
                Shape::CosNegSin => unwrap_near((-xj).atan2(xi), near),
            }
        };
        Ok((angle(&su, a, hint.0), angle(&sv, b, hint.1), t))
    }
}

fn unwrap_near(w: f64, near: f64) -> f64 {
    w + 2.0 * PI * ((near - w) / (2.0 * PI)).round()
}
