//! Euler–Lagrange geodesic flow on the rotational manifolds.
//!
//! With the diagonal Lagrangian `L = E u̇² + G v̇² + N ṫ²` the rotation
//! parameters are cyclic, so `p_u = 2E u̇` and `p_v = 2G v̇` are conserved.
//! The Clairaut-type invariants are the same momenta written through the
//! angle decompositions of the unit velocity.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::isometry::{mat_vec, rotation_matrix, RotationGenerator};
use crate::surface::{FamilyKind, GeodesicState, SurfaceFamily};

pub const DEFAULT_STEP: f64 = 1e-3;
pub const DEFAULT_LENGTH: f64 = 5.0;
/// Residual below which an angle decomposition counts as defined.
pub const DEFAULT_ANGLE_TOL: f64 = 1e-10;

/// Right-hand side `(u̇, v̇, ṫ, ü, v̈, ẗ)` of the geodesic system.
pub fn geodesic_rhs(fam: &SurfaceFamily, st: &GeodesicState) -> Result<[f64; 6]> {
    let (m, dm) = fam.metric_with_derivative(st.t)?;
    if m.is_degenerate() {
        return Err(Error::DegenerateMetric { t: st.t, e: m.e, g: m.g, n: m.n });
    }
    let GeodesicState { du, dv, dt, .. } = *st;
    let ddu = -(dm.e / m.e) * du * dt;
    let ddv = -(dm.g / m.g) * dv * dt;
    let ddt = (dm.e * du * du + dm.g * dv * dv - dm.n * dt * dt) / (2.0 * m.n);
    Ok([du, dv, dt, ddu, ddv, ddt])
}

/// Conjugate momenta `(2E u̇, 2G v̇)`.
pub fn momenta(fam: &SurfaceFamily, st: &GeodesicState) -> Result<(f64, f64)> {
    let m = fam.metric_coefficients(st.t)?;
    Ok((2.0 * m.e * st.du, 2.0 * m.g * st.dv))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Method {
    #[default]
    Rk4,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Termination {
    Completed,
    /// The next step would leave the profile domain; `s` is the last valid sample.
    DomainExit {
        s: f64,
        t: f64,
    },
    Degenerate {
        s: f64,
        t: f64,
    },
    NonFinite {
        s: f64,
    },
}

impl Termination {
    pub fn is_completed(&self) -> bool {
        matches!(self, Termination::Completed)
    }
}

/// One sample of a trajectory with its conservation diagnostics.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Sample {
    pub s: f64,
    pub state: GeodesicState,
    #[serde(rename = "L")]
    pub l: f64,
    pub p_u: f64,
    pub p_v: f64,
    pub inv1: f64,
    pub inv2: f64,
    /// Whether the Clairaut angles are defined at this sample.
    pub angles_defined: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Trajectory {
    pub samples: Vec<Sample>,
    pub termination: Termination,
    pub requested_length: f64,
}

impl Trajectory {
    pub fn last(&self) -> &Sample {
        self.samples.last().expect("trajectory always holds its initial sample")
    }

    pub fn reached_length(&self) -> f64 {
        self.last().s
    }

    /// Maximum deviation of each diagnostic from its initial value.
    pub fn drift(&self) -> Drift {
        let first = self.samples[0];
        let mut d = Drift::default();
        for smp in &self.samples {
            d.p_u_drift = d.p_u_drift.max((smp.p_u - first.p_u).abs());
            d.p_v_drift = d.p_v_drift.max((smp.p_v - first.p_v).abs());
            d.l_drift = d.l_drift.max((smp.l - first.l).abs());
            d.inv1_drift = d.inv1_drift.max((smp.inv1 - first.inv1).abs());
            d.inv2_drift = d.inv2_drift.max((smp.inv2 - first.inv2).abs());
        }
        d
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct Drift {
    pub p_u_drift: f64,
    pub p_v_drift: f64,
    #[serde(rename = "L_drift")]
    pub l_drift: f64,
    pub inv1_drift: f64,
    pub inv2_drift: f64,
}

fn sample(fam: &SurfaceFamily, s: f64, state: GeodesicState) -> Result<Sample> {
    let rep = clairaut_report(fam, &state)?;
    Ok(Sample {
        s,
        state,
        l: rep.l,
        p_u: rep.p_u,
        p_v: rep.p_v,
        inv1: rep.invariant1,
        inv2: rep.invariant2,
        angles_defined: rep.angles.defined,
    })
}

fn rk4_step(fam: &SurfaceFamily, y: [f64; 6], h: f64) -> Result<[f64; 6]> {
    let at = |y: [f64; 6]| geodesic_rhs(fam, &GeodesicState::from_array(y));
    let shift = |y: [f64; 6], k: &[f64; 6], c: f64| -> [f64; 6] { std::array::from_fn(|i| y[i] + c * k[i]) };
    let k1 = at(y)?;
    let k2 = at(shift(y, &k1, h / 2.0))?;
    let k3 = at(shift(y, &k2, h / 2.0))?;
    let k4 = at(shift(y, &k3, h))?;
    Ok(std::array::from_fn(|i| y[i] + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i])))
}

/// Fixed-step integration of the geodesic system from `st0` over arclength
/// `length`. Samples are taken at every step and at `s = length`.
///
/// Leaving the profile domain, hitting a degenerate metric or producing a
/// non-finite state stops the run early; the samples gathered so far are
/// returned with the reason in [`Trajectory::termination`].
pub fn integrate(
    fam: &SurfaceFamily,
    st0: &GeodesicState,
    length: f64,
    step: f64,
    method: Method,
) -> Result<Trajectory> {
    let Method::Rk4 = method;
    if !(length > 0.0 && length.is_finite()) {
        return Err(Error::Precondition(format!("length must be positive and finite, got {length}")));
    }
    if !(step > 0.0 && step.is_finite()) {
        return Err(Error::Precondition(format!("step must be positive and finite, got {step}")));
    }
    if step > length {
        return Err(Error::Precondition(format!("step {step} exceeds length {length}")));
    }
    if !st0.is_finite() {
        return Err(Error::NonFinite(0.0));
    }
    // validates the domain and metric at the start
    geodesic_rhs(fam, st0)?;

    let full = (length / step * (1.0 + 1e-12)).floor() as usize;
    let mut grid: Vec<f64> = (1..=full).map(|i| i as f64 * step).collect();
    match grid.last_mut() {
        Some(last) if (length - *last).abs() <= 1e-9 * step => *last = length,
        _ => grid.push(length),
    }

    let mut samples = Vec::with_capacity(grid.len() + 1);
    samples.push(sample(fam, 0.0, *st0)?);
    let mut y = st0.to_array();
    let mut s_prev = 0.0;
    let mut termination = Termination::Completed;
    for s in grid {
        let next = match rk4_step(fam, y, s - s_prev) {
            Ok(next) => next,
            Err(Error::OutsideDomain { t, .. }) => {
                termination = Termination::DomainExit { s: s_prev, t };
                break;
            }
            Err(Error::DegenerateMetric { t, .. }) => {
                termination = Termination::Degenerate { s: s_prev, t };
                break;
            }
            Err(Error::Expr(_)) => {
                termination = Termination::NonFinite { s: s_prev };
                break;
            }
            Err(e) => return Err(e),
        };
        let state = GeodesicState::from_array(next);
        if !state.is_finite() {
            termination = Termination::NonFinite { s: s_prev };
            break;
        }
        match sample(fam, s, state) {
            Ok(smp) => samples.push(smp),
            Err(Error::OutsideDomain { t, .. }) => {
                termination = Termination::DomainExit { s: s_prev, t };
                break;
            }
            Err(e) => return Err(e),
        }
        y = next;
        s_prev = s;
    }
    Ok(Trajectory { samples, termination, requested_length: length })
}

/// Angles `(φ, θ)` of a velocity in the family's decomposition.
///
/// `phi`/`theta` are finite whenever the two rotation-velocity equations can
/// be solved; `defined` additionally requires the profile-velocity equation to
/// hold within the tolerance, measured by `residual`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AngleDecomposition {
    pub phi: f64,
    pub theta: f64,
    pub defined: bool,
    pub residual: f64,
}

impl AngleDecomposition {
    pub fn is_solvable(&self) -> bool {
        self.phi.is_finite() && self.theta.is_finite()
    }
}

fn sign(x: f64) -> f64 {
    if x < 0.0 {
        -1.0
    } else {
        1.0
    }
}

/// Decomposes the velocity of `st`:
///
/// * Hyperbolic14: `fa·u̇ = cos φ`, `fb·v̇ = cosh θ sin φ`, `ṫ = sinh θ sin φ`;
/// * Hyperbolic23: `fa·u̇ = cos θ sinh φ`, `fb·v̇ = sin θ sinh φ`, `ṫ = cosh φ`;
/// * Elliptic56: `fa·u̇ = sin φ cosh θ`, `fb·v̇ = sinh θ sin φ`, `ṫ = cos φ`.
///
/// The angles solve the first two equations; the third one is the residual.
/// `φ` carries the sign needed to reproduce a negative left-hand side.
pub fn extract_angles(fam: &SurfaceFamily, st: &GeodesicState, tol: f64) -> Result<AngleDecomposition> {
    let (a, b) = (fam.fa.value_at(st.t)?, fam.fb.value_at(st.t)?);
    let (x, y, dt) = (a * st.du, b * st.dv, st.dt);
    let (phi, theta, residual) = match fam.kind {
        FamilyKind::Hyperbolic14 => {
            let residual = (x * x + y * y - dt * dt - 1.0).abs();
            if x.abs() > 1.0 {
                (f64::NAN, f64::NAN, residual)
            } else {
                let sin_abs = (1.0 - x * x).sqrt();
                let phi = sign(y) * x.acos();
                if sin_abs == 0.0 {
                    let theta = if y == 0.0 { 0.0 } else { f64::NAN };
                    (phi, theta, residual)
                } else {
                    let ch = y.abs() / sin_abs;
                    // acosh near 1 only resolves θ to ~1e-8; once the third
                    // equation holds, sinh θ = ṫ / sin φ is the better read
                    let theta = if residual <= tol {
                        (dt / (sign(y) * sin_abs)).asinh()
                    } else if ch >= 1.0 {
                        sign(dt * y) * ch.acosh()
                    } else {
                        f64::NAN
                    };
                    (phi, theta, residual)
                }
            }
        }
        FamilyKind::Hyperbolic23 => {
            let r = x.hypot(y);
            let theta = if r == 0.0 { 0.0 } else { y.atan2(x) };
            let phi = r.asinh();
            (phi, theta, (phi.cosh() - dt).abs())
        }
        FamilyKind::Elliptic56 => {
            if y.abs() > x.abs() {
                (f64::NAN, f64::NAN, f64::INFINITY)
            } else {
                let s = sign(x) * ((x - y) * (x + y)).sqrt();
                let theta = if x == 0.0 { 0.0 } else { (y / x).atanh() };
                if s.abs() > 1.0 {
                    (f64::NAN, theta, f64::INFINITY)
                } else {
                    let base = s.asin();
                    let phi = if dt >= 0.0 { base } else { sign(s) * std::f64::consts::PI - base };
                    (phi, theta, (phi.cos() - dt).abs())
                }
            }
        }
    };
    let solvable = phi.is_finite() && theta.is_finite();
    Ok(AngleDecomposition { phi, theta, defined: solvable && residual <= tol, residual })
}

/// Inverse of [`extract_angles`]: velocities at `(u, v, t)` from `(φ, θ)`.
pub fn state_from_angles(fam: &SurfaceFamily, u: f64, v: f64, t: f64, phi: f64, theta: f64) -> Result<GeodesicState> {
    let (a, b) = (fam.fa.value_at(t)?, fam.fb.value_at(t)?);
    if a == 0.0 || b == 0.0 {
        let m = fam.metric_coefficients(t)?;
        return Err(Error::DegenerateMetric { t, e: m.e, g: m.g, n: m.n });
    }
    let (x, y, dt) = match fam.kind {
        FamilyKind::Hyperbolic14 => (phi.cos(), theta.cosh() * phi.sin(), theta.sinh() * phi.sin()),
        FamilyKind::Hyperbolic23 => (theta.cos() * phi.sinh(), theta.sin() * phi.sinh(), phi.cosh()),
        FamilyKind::Elliptic56 => (phi.sin() * theta.cosh(), theta.sinh() * phi.sin(), phi.cos()),
    };
    Ok(GeodesicState::new(u, v, t, x / a, y / b, dt))
}

/// Signs `(σu, σv)` with `invariant1 = σu·p_u` and `invariant2 = σv·p_v`.
pub fn family_signs(fam: &SurfaceFamily) -> (f64, f64) {
    use crate::surface::Variant::*;
    match (fam.kind, fam.variant) {
        (FamilyKind::Hyperbolic14, A) | (FamilyKind::Hyperbolic23, A) => (1.0, 1.0),
        (FamilyKind::Hyperbolic14, B) | (FamilyKind::Hyperbolic23, B) => (-1.0, -1.0),
        (FamilyKind::Elliptic56, _) => (-1.0, 1.0),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ClairautReport {
    #[serde(rename = "L")]
    pub l: f64,
    pub p_u: f64,
    pub p_v: f64,
    pub invariant1: f64,
    pub invariant2: f64,
    pub angles: AngleDecomposition,
}

/// The family's two Clairaut quantities at a state:
///
/// * Hyperbolic14: `2fa cos φ`, `−2fb cosh θ sin φ`;
/// * Hyperbolic23: `2fa cos θ sinh φ`, `2fb sin θ sinh φ`;
/// * Elliptic56: `2fa sin φ cosh θ`, `2fb sinh θ sin φ`.
///
/// When the angles are undefined the signed momenta are reported instead.
pub fn clairaut_report(fam: &SurfaceFamily, st: &GeodesicState) -> Result<ClairautReport> {
    clairaut_report_with_tol(fam, st, DEFAULT_ANGLE_TOL)
}

pub fn clairaut_report_with_tol(fam: &SurfaceFamily, st: &GeodesicState, tol: f64) -> Result<ClairautReport> {
    let l = fam.lagrangian(st)?.value;
    let (p_u, p_v) = momenta(fam, st)?;
    let angles = extract_angles(fam, st, tol)?;
    let (a, b) = (fam.fa.value_at(st.t)?, fam.fb.value_at(st.t)?);
    let (su, sv) = family_signs(fam);
    let (invariant1, invariant2) = if angles.defined {
        let (phi, theta) = (angles.phi, angles.theta);
        match fam.kind {
            FamilyKind::Hyperbolic14 => (2.0 * a * phi.cos(), -2.0 * b * theta.cosh() * phi.sin()),
            FamilyKind::Hyperbolic23 => (2.0 * a * theta.cos() * phi.sinh(), 2.0 * b * theta.sin() * phi.sinh()),
            FamilyKind::Elliptic56 => (2.0 * a * phi.sin() * theta.cosh(), 2.0 * b * theta.sinh() * phi.sin()),
        }
    } else {
        (su * p_u, sv * p_v)
    };
    Ok(ClairautReport { l, p_u, p_v, invariant1, invariant2, angles })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SlopeReport {
    /// `ṫ / u̇` from the state.
    pub state_slope: f64,
    /// The family's closed-form `dt/du` from the angles and `L`; `None`
    /// when the angles cannot be solved or the formula is singular.
    pub closed_form_slope: Option<f64>,
    /// `|state_slope| − |closed_form_slope|`.
    pub matched: Option<f64>,
    /// Radicand under the square root of the closed form.
    pub radicand: f64,
    /// Elliptic56 only: the closed form carries a factor `i`; the reported
    /// slope is the real magnitude `fa·√|radicand| / (sin φ cosh θ)`.
    pub imaginary_factor: bool,
}

/// Compares `dt/du` of the state with the family's slope equation.
pub fn slope(fam: &SurfaceFamily, st: &GeodesicState) -> Result<SlopeReport> {
    if st.du == 0.0 {
        return Err(Error::MeridianUndefined);
    }
    let state_slope = st.dt / st.du;
    let l = fam.lagrangian(st)?.value;
    let ang = extract_angles(fam, st, DEFAULT_ANGLE_TOL)?;
    let a = fam.fa.value_at(st.t)?;
    let (phi, theta) = (ang.phi, ang.theta);
    let (radicand, value, imaginary_factor) = match fam.kind {
        FamilyKind::Hyperbolic14 => {
            let (tan, sec) = (phi.tan(), 1.0 / phi.cos());
            let r = 1.0 - theta.cosh().powi(2) * tan * tan - l * sec * sec;
            (r, a * r.sqrt(), false)
        }
        FamilyKind::Hyperbolic23 => {
            let sh = phi.sinh();
            let r = sh * sh - l;
            (r, a * r.sqrt() / (theta.cos() * sh), false)
        }
        FamilyKind::Elliptic56 => {
            let sn = phi.sin();
            let r = l + sn * sn;
            (r, a * r.abs().sqrt() / (sn * theta.cosh()), true)
        }
    };
    let closed_form_slope = (ang.is_solvable() && value.is_finite()).then_some(value);
    let matched = closed_form_slope.map(|p| state_slope.abs() - p.abs());
    Ok(SlopeReport { state_slope, closed_form_slope, matched, radicand, imaginary_factor })
}

/// Largest deviation of a sampled coordinate curve `(s, (u, v, t))` from the
/// geodesic equations, using central differences for velocity and
/// acceleration. Only interior samples with equal spacing on both sides are
/// checked.
pub fn curve_residual(fam: &SurfaceFamily, curve: &[(f64, [f64; 3])]) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for w in curve.windows(3) {
        let (s0, q0) = w[0];
        let (s1, q1) = w[1];
        let (s2, q2) = w[2];
        let h = s1 - s0;
        if ((s2 - s1) - h).abs() > 1e-9 * h {
            continue;
        }
        let vel: [f64; 3] = std::array::from_fn(|i| (q2[i] - q0[i]) / (2.0 * h));
        let acc: [f64; 3] = std::array::from_fn(|i| (q2[i] - 2.0 * q1[i] + q0[i]) / (h * h));
        let st = GeodesicState::new(q1[0], q1[1], q1[2], vel[0], vel[1], vel[2]);
        let rhs = geodesic_rhs(fam, &st)?;
        for i in 0..3 {
            worst = worst.max((acc[i] - rhs[3 + i]).abs());
        }
    }
    Ok(worst)
}

/// Result of mapping a trajectory through one of the family's rotations.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IsometryCheck {
    pub generator: RotationGenerator,
    pub angle: f64,
    /// Geodesic-equation residual of the mapped curve.
    pub max_residual: f64,
    /// Largest `|u' − (u + σ)|` (or the `v` analogue) over the samples.
    pub max_shift_error: f64,
    /// Largest ambient distance between the rotated point and the
    /// re-immersed recovered coordinates.
    pub max_chart_error: f64,
}

/// Rotates every sample of `traj` by `gen` through `angle`, reads the
/// coordinates back off the surface and measures how well the image satisfies
/// the geodesic equations.
pub fn isometry_check(
    fam: &SurfaceFamily,
    traj: &Trajectory,
    gen: RotationGenerator,
    angle: f64,
) -> Result<IsometryCheck> {
    let (gu, gv) = fam.generators();
    let shifts_u = if gen == gu {
        true
    } else if gen == gv {
        false
    } else {
        return Err(Error::Precondition(format!(
            "{gen} does not preserve the {}/{} family (its rotations are {gu} and {gv})",
            fam.kind, fam.variant
        )));
    };
    let rot = rotation_matrix(gen, angle);
    let mut curve = Vec::with_capacity(traj.samples.len());
    let (mut shift_err, mut chart_err) = (0.0f64, 0.0f64);
    for smp in &traj.samples {
        let GeodesicState { u, v, t, .. } = smp.state;
        let q = mat_vec(&rot, fam.immerse(u, v, t)?);
        let hint = if shifts_u { (u + angle, v, t) } else { (u, v + angle, t) };
        let (u2, v2, t2) = fam.chart(q, hint)?;
        let expected = if shifts_u { (u2 - (u + angle)).abs() } else { (v2 - (v + angle)).abs() };
        shift_err = shift_err.max(expected);
        chart_err = chart_err.max((fam.immerse(u2, v2, t2)? - q).max_abs());
        curve.push((smp.s, [u2, v2, t2]));
    }
    Ok(IsometryCheck {
        generator: gen,
        angle,
        max_residual: curve_residual(fam, &curve)?,
        max_shift_error: shift_err,
        max_chart_error: chart_err,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface::Variant;
    use proptest::prelude::*;

    fn h14() -> SurfaceFamily {
        SurfaceFamily::from_text(FamilyKind::Hyperbolic14, Variant::A, "t", "1", (0.5, 20.0)).unwrap()
    }

    fn h23_linear() -> SurfaceFamily {
        SurfaceFamily::from_text(FamilyKind::Hyperbolic23, Variant::A, "2 + t/sqrt(2)", "1 + t/sqrt(2)", (-1.0, 20.0))
            .unwrap()
    }

    fn e56() -> SurfaceFamily {
        SurfaceFamily::from_text(FamilyKind::Elliptic56, Variant::A, "t+2", "1", (-1.0, 20.0)).unwrap()
    }

    #[test]
    fn rhs_examples() {
        let f = h14();
        let meridian = GeodesicState::new(0.0, 0.0, 1.0, 0.0, 0.0, 1.0);
        assert_eq!(&geodesic_rhs(&f, &meridian).unwrap()[3..], &[0.0, 0.0, 0.0]);
        let st = GeodesicState::new(0.0, 0.0, 1.0, 0.5, 0.0, 0.5);
        let r = geodesic_rhs(&f, &st).unwrap();
        assert_eq!((r[3], r[4], r[5]), (-0.5, 0.0, -0.25));
        let axis = SurfaceFamily::from_text(FamilyKind::Hyperbolic14, Variant::A, "t", "1", (-1.0, 1.0)).unwrap();
        assert!(matches!(
            geodesic_rhs(&axis, &GeodesicState::new(0.0, 0.0, 0.0, 0.0, 0.0, 1.0)),
            Err(Error::DegenerateMetric { .. })
        ));
    }

    #[test]
    fn rhs_matches_lagrangian_variation() {
        // Euler–Lagrange residual d/ds(∂L/∂q̇) − ∂L/∂q with ∂L/∂t by differences
        let f = SurfaceFamily::from_text(FamilyKind::Hyperbolic14, Variant::A, "2 + sin(t)", "3 + t^2/4", (-2.0, 2.0))
            .unwrap();
        let st = GeodesicState::new(0.1, -0.2, 0.4, 0.3, -0.7, 1.1);
        let r = geodesic_rhs(&f, &st).unwrap();
        let (m, dm) = f.metric_with_derivative(st.t).unwrap();
        // d/ds(2N ṫ) = 2N' ṫ² + 2N ẗ ;  ∂L/∂t = E' u̇² + G' v̇² + N' ṫ²
        let lhs = 2.0 * dm.n * st.dt * st.dt + 2.0 * m.n * r[5];
        let rhs = dm.e * st.du * st.du + dm.g * st.dv * st.dv + dm.n * st.dt * st.dt;
        assert!((lhs - rhs).abs() < 1e-13);
        // d/ds(2E u̇) = 2E' ṫ u̇ + 2E ü = 0
        assert!((2.0 * dm.e * st.dt * st.du + 2.0 * m.e * r[3]).abs() < 1e-13);
        assert!((2.0 * dm.g * st.dt * st.dv + 2.0 * m.g * r[4]).abs() < 1e-13);
    }

    #[test]
    fn meridian_integrates_exactly() {
        let f = h14();
        let st0 = GeodesicState::new(0.0, 0.0, 1.0, 0.0, 0.0, 1.0);
        let tr = integrate(&f, &st0, 1.0, DEFAULT_STEP, Method::Rk4).unwrap();
        assert!(tr.termination.is_completed());
        let last = tr.last();
        assert_eq!(last.s, 1.0);
        let want = [0.0, 0.0, 2.0, 0.0, 0.0, 1.0];
        for (g, w) in last.state.to_array().iter().zip(want) {
            assert!((g - w).abs() <= 1e-12, "{:?}", last.state);
        }
        assert_eq!(tr.samples.len(), 1001);
        assert!(tr.samples.windows(2).all(|w| w[1].s > w[0].s));
    }

    #[test]
    fn momentum_conserved_on_h14() {
        let f = h14();
        let st0 = GeodesicState::new(0.0, 0.0, 1.0, 0.3, 0.1, 1.08f64.sqrt());
        let tr = integrate(&f, &st0, 5.0, 1e-3, Method::Rk4).unwrap();
        assert!(tr.termination.is_completed());
        let worst = tr.samples.iter().map(|s| (s.p_u - 0.6).abs()).fold(0.0, f64::max);
        assert!(worst <= 1e-10, "p_u drift {worst}");
    }

    #[test]
    fn integrate_preconditions() {
        let f = h14();
        let st0 = GeodesicState::new(0.0, 0.0, 1.0, 0.0, 0.0, 1.0);
        assert!(matches!(integrate(&f, &st0, 1.0, 2.0, Method::Rk4), Err(Error::Precondition(_))));
        assert!(matches!(integrate(&f, &st0, 1.0, 0.0, Method::Rk4), Err(Error::Precondition(_))));
        assert!(matches!(integrate(&f, &st0, -1.0, 0.1, Method::Rk4), Err(Error::Precondition(_))));
        let outside = GeodesicState { t: 30.0, ..st0 };
        assert!(matches!(integrate(&f, &outside, 1.0, 0.1, Method::Rk4), Err(Error::OutsideDomain { .. })));
    }

    #[test]
    fn partial_last_step_lands_on_length() {
        let f = h14();
        let st0 = GeodesicState::new(0.0, 0.0, 1.0, 0.0, 0.0, 1.0);
        let tr = integrate(&f, &st0, 1.05, 0.1, Method::Rk4).unwrap();
        assert_eq!(tr.last().s, 1.05);
        assert_eq!(tr.samples.len(), 12);
        assert!((tr.last().state.t - 2.05).abs() < 1e-12);
    }

    #[test]
    fn domain_exit_is_reported() {
        let f = h14();
        let st0 = GeodesicState::new(0.0, 0.0, 19.0, 0.0, 0.0, 1.0);
        let tr = integrate(&f, &st0, 5.0, 1e-2, Method::Rk4).unwrap();
        match tr.termination {
            Termination::DomainExit { s, .. } => {
                assert!((s - 1.0).abs() < 1.1e-2, "stopped at {s}");
                assert_eq!(tr.reached_length(), s);
            }
            other => panic!("unexpected termination {other:?}"),
        }
    }

    #[test]
    fn momenta_examples() {
        let st = GeodesicState::new(0.0, 0.0, 1.0, 0.3, 0.1, 0.0);
        let (pu, pv) = momenta(&h14(), &st).unwrap();
        assert!((pu - 0.6).abs() < 1e-15 && (pv + 0.2).abs() < 1e-15);
        assert_eq!(momenta(&h14(), &GeodesicState { du: 0.0, dv: 0.0, ..st }).unwrap(), (0.0, 0.0));
        let c = SurfaceFamily::from_text(FamilyKind::Hyperbolic23, Variant::A, "2", "1", (0.0, 1.0)).unwrap();
        assert_eq!(momenta(&c, &GeodesicState::new(0.0, 0.0, 0.5, 0.25, 1.0, 0.0)).unwrap(), (2.0, 2.0));
    }

    #[test]
    fn angle_examples() {
        let c = SurfaceFamily::from_text(FamilyKind::Hyperbolic23, Variant::A, "2", "1", (0.0, 1.0)).unwrap();
        let st = GeodesicState::new(0.0, 0.0, 0.5, 0.5, 0.0, 2f64.sqrt());
        let a = extract_angles(&c, &st, 1e-12).unwrap();
        assert!(a.defined);
        assert!((a.phi - 0.881_373_587_019_543).abs() < 1e-14);
        assert_eq!(a.theta, 0.0);
        assert!((a.phi.cosh() - 2f64.sqrt()).abs() < 1e-15);

        let meridian = GeodesicState::new(0.0, 0.0, 0.5, 0.0, 0.0, 1.0);
        let a = extract_angles(&c, &meridian, 1e-12).unwrap();
        assert_eq!((a.phi, a.theta, a.defined), (0.0, 0.0, true));

        let st = GeodesicState::new(0.0, 0.0, 1.0, 0.3, 0.1, 1.08f64.sqrt());
        let a = extract_angles(&h14(), &st, 1e-10).unwrap();
        assert!(!a.defined);
        assert!((a.residual - 1.98).abs() < 1e-12);
    }

    #[test]
    fn report_examples() {
        let c = SurfaceFamily::from_text(FamilyKind::Hyperbolic23, Variant::A, "2", "1", (0.0, 1.0)).unwrap();
        let st = GeodesicState::new(0.0, 0.0, 0.5, 0.5, 0.0, 2f64.sqrt());
        let r = clairaut_report(&c, &st).unwrap();
        assert!((r.invariant1 - 4.0).abs() < 1e-14);
        assert!((r.invariant1 - r.p_u).abs() < 1e-14);

        // consistent H14 state: fa·u̇ = 0.5, fb·v̇ = 1, ṫ = 0.5
        let st = GeodesicState::new(0.0, 0.0, 1.0, 0.5, 1.0, 0.5);
        let r = clairaut_report(&h14(), &st).unwrap();
        assert!(r.angles.defined);
        assert!((r.invariant1 - r.p_u).abs() < 1e-12);
        assert!((r.invariant2 - r.p_v).abs() < 1e-12);

        let e = e56();
        let st = state_from_angles(&e, 0.0, 0.0, 0.0, 0.7, 0.4).unwrap();
        let r = clairaut_report(&e, &st).unwrap();
        assert!(r.angles.defined);
        assert!((r.invariant2 - r.p_v).abs() < 1e-12);
        assert!((r.invariant1 + r.p_u).abs() < 1e-12);
    }

    #[test]
    fn slope_examples() {
        let f = h23_linear();
        let st = GeodesicState::new(0.0, 0.0, 0.0, 0.5, 0.0, 2f64.sqrt());
        let r = slope(&f, &st).unwrap();
        let want = 2.0 * 2f64.sqrt();
        assert!((r.state_slope - want).abs() < 1e-14);
        assert!((r.closed_form_slope.unwrap() - want).abs() < 1e-14);
        assert!(r.matched.unwrap().abs() < 1e-14);

        assert_eq!(slope(&f, &GeodesicState { du: 0.0, ..st }), Err(Error::MeridianUndefined));

        let e = e56();
        let st = state_from_angles(&e, 0.0, 0.0, 0.5, 1.1, -0.3).unwrap();
        let st = e.normalize_timelike(&st).unwrap();
        let r = slope(&e, &st).unwrap();
        assert!(r.imaginary_factor && r.radicand <= 1e-15);
        assert!(r.matched.unwrap().abs() < 1e-12);
    }

    #[test]
    fn meridians_and_parallels() {
        let f = h14();
        let st0 = GeodesicState::new(0.4, -0.3, 1.0, 0.0, 0.0, 0.8);
        let tr = integrate(&f, &st0, 3.0, 1e-2, Method::Rk4).unwrap();
        assert!(tr.samples.iter().all(|s| (s.state.u - 0.4).abs() <= 1e-12 && (s.state.v + 0.3).abs() <= 1e-12));

        // fb constant: the v-parallel through t = 2 stays put
        let par = GeodesicState::new(0.0, 0.0, 2.0, 0.0, 1.0, 0.0);
        let tr = integrate(&f, &par, 3.0, 1e-2, Method::Rk4).unwrap();
        assert!(tr.samples.iter().all(|s| (s.state.t - 2.0).abs() <= 1e-10 && s.state.u == 0.0));

        // fb growing: the parallel is not a geodesic and the flow leaves it
        let g = SurfaceFamily::from_text(FamilyKind::Hyperbolic14, Variant::A, "t", "1 + t/2", (0.5, 20.0)).unwrap();
        let curve: Vec<_> = (0..50).map(|k| (k as f64 * 1e-2, [0.0, k as f64 * 1e-2, 2.0])).collect();
        assert!(curve_residual(&g, &curve).unwrap() > 1e-3);
        let tr = integrate(&g, &par, 1.0, 1e-2, Method::Rk4).unwrap();
        assert!((tr.last().state.t - 2.0).abs() > 1e-3);
    }

    #[test]
    fn isometry_maps_geodesics_to_geodesics() {
        let f = h14();
        let st0 = GeodesicState::new(0.0, 0.0, 1.0, 0.3, 0.1, 1.08f64.sqrt());
        let tr = integrate(&f, &st0, 2.0, 1e-3, Method::Rk4).unwrap();
        let (gu, gv) = f.generators();
        for (g, ang) in [(gu, 0.7), (gv, -0.4)] {
            let chk = isometry_check(&f, &tr, g, ang).unwrap();
            assert!(chk.max_residual <= 1e-6, "{chk:?}");
            assert!(chk.max_shift_error <= 1e-9, "{chk:?}");
        }
        assert!(isometry_check(&f, &tr, RotationGenerator::Omega5, 0.1).is_err());
    }

    fn families() -> Vec<SurfaceFamily> {
        let mut out = Vec::new();
        for kind in [FamilyKind::Hyperbolic14, FamilyKind::Hyperbolic23, FamilyKind::Elliptic56] {
            for variant in [Variant::A, Variant::B] {
                out.push(SurfaceFamily::from_text(kind, variant, "2 + t/3", "1.5 + t^2/8", (-2.0, 2.0)).unwrap());
            }
        }
        out
    }

    proptest! {
        #[test]
        fn angles_round_trip(k in 0usize..6, t in -1.5f64..1.5, phi in -3.0f64..3.0, theta in -2.0f64..2.0) {
            let f = &families()[k];
            let st = state_from_angles(f, 0.1, 0.2, t, phi, theta).unwrap();
            let a = extract_angles(f, &st, 1e-10).unwrap();
            prop_assume!(a.defined);
            let back = state_from_angles(f, 0.1, 0.2, t, a.phi, a.theta).unwrap();
            for (x, y) in [(back.du, st.du), (back.dv, st.dv), (back.dt, st.dt)] {
                prop_assert!((x - y).abs() <= 1e-12 * (1.0 + y.abs()), "{:?} vs {:?}", back, st);
            }
        }

        #[test]
        fn clairaut_identity(k in 0usize..6, t in -1.5f64..1.5, phi in -3.0f64..3.0, theta in -2.0f64..2.0) {
            let f = &families()[k];
            let st = state_from_angles(f, 0.0, 0.0, t, phi, theta).unwrap();
            let r = clairaut_report(f, &st).unwrap();
            let (su, sv) = family_signs(f);
            prop_assert!((r.invariant1 - su * r.p_u).abs() <= 1e-12 * (1.0 + r.p_u.abs()));
            prop_assert!((r.invariant2 - sv * r.p_v).abs() <= 1e-12 * (1.0 + r.p_v.abs()));
        }
    }
}
