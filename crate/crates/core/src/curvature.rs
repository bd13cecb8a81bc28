//! Gaussian curvature, mean curvature vector and normal frames of the
//! 2-surfaces `S(t, s) = immerse(x(t), α(t), s)` cut out of a rotational
//! family by prescribing both rotation angles as functions of `t`.
//!
//! The closed-form expressions are evaluated as printed and compared with
//! finite-difference oracles built from the induced metric and the second
//! partials of the immersion. The oracle is the reference; the gaps are data.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::expr::{Jet, ProfileFunction};
use crate::pseudometric::{inner, Vector4};
use crate::surface::{FamilyKind, SurfaceFamily, Variant};

/// Relative finite-difference step; the absolute step is this times
/// `1 + |t| + |s|`.
pub const DEFAULT_FD_STEP: f64 = 1e-4;

pub fn default_fd_step(t: f64, s: f64) -> f64 {
    DEFAULT_FD_STEP * (1.0 + t.abs() + s.abs())
}

/// A rotational family restricted to the angle curve `(x(t), α(t))`; the
/// profile parameter of the family becomes the second surface parameter `s`.
#[derive(Debug, Clone, PartialEq)]
pub struct DoubleRotationSurface {
    pub family: SurfaceFamily,
    /// Angle fed to the family's first rotation (x, y or β).
    pub u_angle: ProfileFunction,
    /// Angle fed to the second rotation (α, z or θ).
    pub v_angle: ProfileFunction,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CurvatureReport {
    pub t: f64,
    pub s: f64,
    #[serde(rename = "K_formula")]
    pub k_formula: f64,
    #[serde(rename = "K_oracle")]
    pub k_oracle: f64,
    #[serde(rename = "K_gap")]
    pub k_gap: f64,
    #[serde(rename = "H_formula")]
    pub h_formula: Vector4,
    #[serde(rename = "H_oracle")]
    pub h_oracle: Vector4,
    #[serde(rename = "H_gap")]
    pub h_gap: f64,
    pub h3: f64,
    pub h4: f64,
    pub e3: Vector4,
    pub e4: Vector4,
    /// Ambient size of the part of `H_oracle` outside `span{e3, e4}`.
    pub normal_residual: f64,
}

struct Local {
    /// Profile jets at `s`, first rotation then second.
    a: Jet,
    b: Jet,
    /// Angle jets at `t`.
    x: Jet,
    y: Jet,
}

impl DoubleRotationSurface {
    /// Only the A variants carry closed-form curvature expressions.
    pub fn new(family: SurfaceFamily, u_angle: ProfileFunction, v_angle: ProfileFunction) -> Result<Self> {
        if family.variant != Variant::A {
            return Err(Error::Unsupported(format!(
                "curvature is only available for variant A families, got {}/{}",
                family.kind, family.variant
            )));
        }
        if u_angle.domain != v_angle.domain {
            return Err(Error::Precondition(format!(
                "angle functions must share a domain: {:?} vs {:?}",
                u_angle.domain, v_angle.domain
            )));
        }
        Ok(DoubleRotationSurface { family, u_angle, v_angle })
    }

    pub fn from_text(family: SurfaceFamily, u_angle: &str, v_angle: &str, t_range: (f64, f64)) -> Result<Self> {
        let u = ProfileFunction::parse(u_angle, t_range)?;
        let v = ProfileFunction::parse(v_angle, t_range)?;
        DoubleRotationSurface::new(family, u, v)
    }

    pub fn t_range(&self) -> (f64, f64) {
        self.u_angle.domain
    }

    pub fn s_range(&self) -> (f64, f64) {
        self.family.domain()
    }

    fn local(&self, t: f64, s: f64) -> Result<Local> {
        let (a, b) = self.family.jets(s)?;
        Ok(Local { a, b, x: self.u_angle.jet(t)?, y: self.v_angle.jet(t)? })
    }

    pub fn point(&self, t: f64, s: f64) -> Result<Vector4> {
        self.family.immerse(self.u_angle.value_at(t)?, self.v_angle.value_at(t)?, s)
    }

    /// Analytic first partials `(∂t S, ∂s S)`. No domain checks, so that
    /// difference stencils may step slightly past the parameter ranges.
    pub fn partials(&self, t: f64, s: f64) -> Result<(Vector4, Vector4)> {
        let a = self.family.fa.jet_unchecked(s)?;
        let b = self.family.fb.jet_unchecked(s)?;
        let x = self.u_angle.jet_unchecked(t)?;
        let y = self.v_angle.jet_unchecked(t)?;
        let (su, sv) = self.family.slots();
        let (mut st, mut ss) = ([0.0; 4], [0.0; 4]);
        su.accumulate(&mut st, a.f * x.d1, x.f, 1);
        sv.accumulate(&mut st, b.f * y.d1, y.f, 1);
        su.accumulate(&mut ss, a.d1, x.f, 0);
        sv.accumulate(&mut ss, b.d1, y.f, 0);
        Ok((Vector4(st), Vector4(ss)))
    }

    /// Induced metric `(g_tt, g_ts, g_ss)`.
    pub fn induced_metric(&self, t: f64, s: f64) -> Result<[f64; 3]> {
        let (pt, ps) = self.partials(t, s)?;
        Ok([inner(pt, pt), inner(pt, ps), inner(ps, ps)])
    }

    /// Unit normals `(e3, e4)`.
    ///
    /// Hyperbolic14 and Elliptic56 use the closed-form normals. For
    /// Hyperbolic23 the closed form is not orthogonal to the tangents, so
    /// the sign-corrected pair
    /// `e3 ∝ (f2ż sinh y, −f1ẏ sinh z, −f1ẏ cosh z, f2ż cosh y)`,
    /// `e4 ∝ (f2′cosh y, −f1′cosh z, −f1′sinh z, f2′sinh y)` is returned.
    pub fn normal_frame(&self, t: f64, s: f64) -> Result<(Vector4, Vector4)> {
        let l = self.local(t, s)?;
        let (r3, r4) = radicands(self.family.kind, &l);
        if !(r3 > 0.0) {
            return Err(Error::FrameDegenerate("e3", r3));
        }
        if !(r4 > 0.0) {
            return Err(Error::FrameDegenerate("e4", r4));
        }
        let (n3, n4) = (r3.sqrt(), r4.sqrt());
        let Local { a, b, x, y } = l;
        let (e3, e4) = match self.family.kind {
            FamilyKind::Hyperbolic14 => {
                let (ch_x, sh_x, ch_a, sh_a) = (x.f.cosh(), x.f.sinh(), y.f.cosh(), y.f.sinh());
                let (p, q) = (b.f * y.d1, a.f * x.d1);
                (
                    Vector4::new(p * sh_x, q * ch_a, p * ch_x, q * sh_a),
                    Vector4::new(b.d1 * ch_x, a.d1 * sh_a, b.d1 * sh_x, a.d1 * ch_a),
                )
            }
            FamilyKind::Hyperbolic23 => {
                let (ch_y, sh_y, ch_z, sh_z) = (x.f.cosh(), x.f.sinh(), y.f.cosh(), y.f.sinh());
                let (p, q) = (b.f * y.d1, a.f * x.d1);
                (
                    Vector4::new(p * sh_y, -q * sh_z, -q * ch_z, p * ch_y),
                    Vector4::new(b.d1 * ch_y, -a.d1 * ch_z, -a.d1 * sh_z, b.d1 * sh_y),
                )
            }
            FamilyKind::Elliptic56 => {
                let (cb, sb, ct, st) = (x.f.cos(), x.f.sin(), y.f.cos(), y.f.sin());
                let (p, q) = (b.f * y.d1, a.f * x.d1);
                (
                    Vector4::new(-p * cb, p * sb, -q * ct, q * st),
                    Vector4::new(b.d1 * sb, b.d1 * cb, a.d1 * st, a.d1 * ct),
                )
            }
        };
        Ok((e3.scale(1.0 / n3), e4.scale(1.0 / n4)))
    }

    /// `(K, h3, h4)` from the closed-form expressions, evaluated verbatim.
    pub fn formula(&self, t: f64, s: f64) -> Result<(f64, f64, f64)> {
        let l = self.local(t, s)?;
        let (r3, r4) = radicands(self.family.kind, &l);
        let Local { a, b, x, y } = l;
        Ok(match self.family.kind {
            FamilyKind::Hyperbolic14 => {
                let (f1, f4) = (a, b);
                let (xd, ad) = (x.d1, y.d1);
                let wedge = f1.d1 * f4.d2 - f1.d2 * f4.d1;
                let k = (f1.d1 * f4.f - f1.f * f4.d1).powi(2) * (xd * ad).powi(2) / r3
                    + (f1.d1 * f4.f * ad * ad - f4.d1 * f1.f * xd * xd) * wedge / r4;
                let h3 = f1.f * f4.f * (x.d2 * ad + xd * y.d2) / (2.0 * r3.sqrt())
                    + (f4.d1 * f1.f * xd * xd - f1.d1 * f4.f * ad * ad) / (2.0 * r4.sqrt());
                let h4 = wedge / (2.0 * r4.sqrt());
                (k, h3, h4)
            }
            FamilyKind::Hyperbolic23 => {
                let (f1, f2) = (a, b);
                let (yd, zd) = (x.d1, y.d1);
                let mixed = f1.d1 * f2.d2 + f1.d2 * f2.d1;
                let k = -((f1.f * f2.d1 + f1.d1 * f2.f).powi(2) * (yd * zd).powi(2) / r3
                    + (f1.f * f2.d1 * yd * yd + f1.d1 * f2.f * zd * zd) * mixed / r4);
                let h3 = f1.f * f2.f * (yd * y.d2 + x.d2 * zd) / (2.0 * r3.sqrt());
                let h4 = (f1.f * f2.d1 * yd * yd + f1.d1 * f2.f * zd * zd - f1.d2 * f2.d1 - f1.d1 * f2.d2)
                    / (2.0 * r4.sqrt());
                (k, h3, h4)
            }
            FamilyKind::Elliptic56 => {
                let (f2, f4) = (a, b);
                let (bd, td) = (x.d1, y.d1);
                let wedge = -f2.d2 * f4.d1 + f2.d1 * f4.d2;
                let k = -((f2.d1 * f4.f - f2.f * f4.d1).powi(2) * (bd * td).powi(2) / r3
                    + wedge * (f4.d1 * f2.f * bd * bd - f2.d1 * f4.f * td * td).powi(2) / r4);
                let h3 = f4.f * f2.f * (bd * y.d2 - td * x.d2) / (2.0 * r3.sqrt());
                let h4 = (f4.d1 * f2.f * bd * bd - f2.d1 * f4.f * td * td + f2.d2 * f4.d1 - f2.d1 * f4.d2)
                    / (2.0 * r4.sqrt());
                (k, h3, h4)
            }
        })
    }

    /// Intrinsic Gaussian curvature from central differences of the induced
    /// metric. See [`gaussian_curvature_fd`].
    pub fn k_oracle(&self, t: f64, s: f64, h: f64) -> Result<f64> {
        self.local(t, s)?;
        gaussian_curvature_fd(|t, s| self.induced_metric(t, s), t, s, h)
    }

    /// Mean curvature vector `½ g^{ab} (∂a∂b S)^⊥` with second partials from
    /// central differences of the analytic first partials.
    pub fn h_oracle(&self, t: f64, s: f64, h: f64) -> Result<Vector4> {
        self.local(t, s)?;
        let (pt, ps) = self.partials(t, s)?;
        let (pt_tp, _) = self.partials(t + h, s)?;
        let (pt_tm, _) = self.partials(t - h, s)?;
        let (pt_sp, ps_sp) = self.partials(t, s + h)?;
        let (pt_sm, ps_sm) = self.partials(t, s - h)?;
        let c = 1.0 / (2.0 * h);
        let stt = (pt_tp - pt_tm).scale(c);
        let sts = (pt_sp - pt_sm).scale(c);
        let sss = (ps_sp - ps_sm).scale(c);

        let g = [inner(pt, pt), inner(pt, ps), inner(ps, ps)];
        let inv = inverse2(g, t)?;
        let normal = |w: Vector4| {
            let (wt, ws) = (inner(w, pt), inner(w, ps));
            // tangential part g^{cd} <w, ∂c> ∂d
            let ct = inv[0] * wt + inv[1] * ws;
            let cs = inv[1] * wt + inv[2] * ws;
            w - pt.scale(ct) - ps.scale(cs)
        };
        let trace = normal(stt).scale(inv[0]) + normal(sts).scale(2.0 * inv[1]) + normal(sss).scale(inv[2]);
        Ok(trace.scale(0.5))
    }

    pub fn curvature_report(&self, t: f64, s: f64, fd_step: Option<f64>) -> Result<CurvatureReport> {
        let h = fd_step.unwrap_or_else(|| default_fd_step(t, s));
        if !(h > 0.0 && h.is_finite()) {
            return Err(Error::Precondition(format!("fd_step must be positive, got {h}")));
        }
        let (e3, e4) = self.normal_frame(t, s)?;
        let (k_formula, h3, h4) = self.formula(t, s)?;
        let k_oracle = self.k_oracle(t, s, h)?;
        let h_oracle = self.h_oracle(t, s, h)?;
        let h_formula = e3.scale(h3) + e4.scale(h4);
        let (eps3, eps4) = (inner(e3, e3), inner(e4, e4));
        let in_span = e3.scale(eps3 * inner(h_oracle, e3)) + e4.scale(eps4 * inner(h_oracle, e4));
        Ok(CurvatureReport {
            t,
            s,
            k_formula,
            k_oracle,
            k_gap: (k_formula - k_oracle).abs(),
            h_formula,
            h_oracle,
            h_gap: (h_formula - h_oracle).max_abs(),
            h3,
            h4,
            e3,
            e4,
            normal_residual: (h_oracle - in_span).max_abs(),
        })
    }
}

fn radicands(kind: FamilyKind, l: &Local) -> (f64, f64) {
    let Local { a, b, x, y } = l;
    match kind {
        FamilyKind::Hyperbolic14 => (b.f * b.f * y.d1 * y.d1 - a.f * a.f * x.d1 * x.d1, b.d1 * b.d1 - a.d1 * a.d1),
        FamilyKind::Hyperbolic23 => (b.f * b.f * y.d1 * y.d1 + a.f * a.f * x.d1 * x.d1, a.d1 * a.d1 + b.d1 * b.d1),
        FamilyKind::Elliptic56 => (b.f * b.f * y.d1 * y.d1 - a.f * a.f * x.d1 * x.d1, b.d1 * b.d1 - a.d1 * a.d1),
    }
}

/// Inverse of the symmetric 2×2 matrix `(g11, g12, g22)`.
fn inverse2(g: [f64; 3], at: f64) -> Result<[f64; 3]> {
    let det = g[0] * g[2] - g[1] * g[1];
    if det == 0.0 || !det.is_finite() {
        return Err(Error::DegenerateMetric { t: at, e: g[0], g: g[2], n: det });
    }
    Ok([g[2] / det, -g[1] / det, g[0] / det])
}

/// Gaussian curvature of a 2-metric `(g11, g12, g22)` given as a function of
/// `(x1, x2)`: Christoffel symbols from central differences of `g`, the
/// component `R_1212 = <R(∂1, ∂2)∂2, ∂1>` from central differences of the
/// Christoffel symbols, and `K = R_1212 / det g`.
///
/// Works for indefinite metrics since no square roots are taken.
pub fn gaussian_curvature_fd<F>(metric: F, x1: f64, x2: f64, h: f64) -> Result<f64>
where
    F: Fn(f64, f64) -> Result<[f64; 3]>,
{
    let full = |g: [f64; 3]| [[g[0], g[1]], [g[1], g[2]]];
    // Γ^k_ij at a point, indices 0/1
    let christoffel = |p: f64, q: f64| -> Result<[[[f64; 2]; 2]; 2]> {
        let g = metric(p, q)?;
        let inv = inverse2(g, p)?;
        let inv = full(inv);
        let c = 1.0 / (2.0 * h);
        let d1 = metric(p + h, q)?;
        let d1m = metric(p - h, q)?;
        let d2 = metric(p, q + h)?;
        let d2m = metric(p, q - h)?;
        let dg: [[[f64; 2]; 2]; 2] =
            [full(std::array::from_fn(|i| (d1[i] - d1m[i]) * c)), full(std::array::from_fn(|i| (d2[i] - d2m[i]) * c))];
        let mut gam = [[[0.0; 2]; 2]; 2];
        for k in 0..2 {
            for i in 0..2 {
                for j in 0..2 {
                    gam[k][i][j] = (0..2).map(|l| 0.5 * inv[k][l] * (dg[i][j][l] + dg[j][i][l] - dg[l][i][j])).sum();
                }
            }
        }
        Ok(gam)
    };
    let g0 = metric(x1, x2)?;
    let det = g0[0] * g0[2] - g0[1] * g0[1];
    if det == 0.0 || !det.is_finite() {
        return Err(Error::DegenerateMetric { t: x1, e: g0[0], g: g0[2], n: det });
    }
    let gam = christoffel(x1, x2)?;
    let c = 1.0 / (2.0 * h);
    let (a1p, a1m) = (christoffel(x1 + h, x2)?, christoffel(x1 - h, x2)?);
    let (a2p, a2m) = (christoffel(x1, x2 + h)?, christoffel(x1, x2 - h)?);
    // ∂_0 Γ and ∂_1 Γ
    let dgam = |dir: usize, l: usize, i: usize, j: usize| -> f64 {
        if dir == 0 {
            (a1p[l][i][j] - a1m[l][i][j]) * c
        } else {
            (a2p[l][i][j] - a2m[l][i][j]) * c
        }
    };
    // R^l_{k i j} with (i, j, k) = (0, 1, 1)
    let riemann_up = |l: usize| -> f64 {
        let (i, j, k) = (0, 1, 1);
        let quad: f64 = (0..2).map(|m| gam[l][i][m] * gam[m][j][k] - gam[l][j][m] * gam[m][i][k]).sum();
        dgam(i, l, j, k) - dgam(j, l, i, k) + quad
    };
    let g = full(g0);
    let r1212: f64 = (0..2).map(|l| g[0][l] * riemann_up(l)).sum();
    Ok(r1212 / det)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pseudometric::cross;
    use proptest::prelude::*;

    fn flat(kind: FamilyKind) -> DoubleRotationSurface {
        let (fa, fb, ua, va) = match kind {
            FamilyKind::Hyperbolic14 => ("2+t", "3+2*t", "1", "t"),
            FamilyKind::Hyperbolic23 => ("2+t", "1+t/2", "0.3", "t"),
            FamilyKind::Elliptic56 => ("2+t", "1+3*t", "0.4", "t"),
        };
        let fam = SurfaceFamily::from_text(kind, Variant::A, fa, fb, (0.0, 1.0)).unwrap();
        DoubleRotationSurface::from_text(fam, ua, va, (0.0, 1.0)).unwrap()
    }

    fn curved(kind: FamilyKind) -> DoubleRotationSurface {
        let (fa, fb, ua, va) = match kind {
            FamilyKind::Hyperbolic14 => ("2+t^2/3", "4+sin(t)", "0.3*t", "1.2*t + t^2/4"),
            FamilyKind::Hyperbolic23 => ("2+t^2/3", "1+sin(t)/2", "0.5*t + t^2/5", "cos(t)"),
            FamilyKind::Elliptic56 => ("1+t^2/4", "3+2*t+t^2", "0.4*t", "2*t - t^2/3"),
        };
        let fam = SurfaceFamily::from_text(kind, Variant::A, fa, fb, (0.0, 1.0)).unwrap();
        DoubleRotationSurface::from_text(fam, ua, va, (0.0, 1.0)).unwrap()
    }

    const KINDS: [FamilyKind; 3] = [FamilyKind::Hyperbolic14, FamilyKind::Hyperbolic23, FamilyKind::Elliptic56];

    fn metric_check(srf: &DoubleRotationSurface, t: f64, s: f64) {
        let (e3, e4) = srf.normal_frame(t, s).unwrap();
        let (pt, ps) = srf.partials(t, s).unwrap();
        for (a, b) in [(e3, pt), (e3, ps), (e4, pt), (e4, ps), (e3, e4)] {
            assert!(inner(a, b).abs() <= 1e-10, "{} at ({t}, {s})", srf.family.kind);
        }
        assert!((inner(e3, e3).abs() - 1.0).abs() <= 1e-10);
        assert!((inner(e4, e4).abs() - 1.0).abs() <= 1e-10);
    }

    #[test]
    fn frames_are_orthonormal_and_normal() {
        for kind in KINDS {
            for (t, s) in [(0.2, 0.3), (0.7, 0.9), (0.5, 0.1)] {
                metric_check(&curved(kind), t, s);
                metric_check(&flat(kind), t, s);
            }
        }
    }

    #[test]
    fn frame_characters() {
        let srf = curved(FamilyKind::Hyperbolic14);
        let (e3, e4) = srf.normal_frame(0.4, 0.6).unwrap();
        assert!((inner(e3, e3) - 1.0).abs() < 1e-12);
        assert!((inner(e4, e4) + 1.0).abs() < 1e-12);
        let srf = curved(FamilyKind::Elliptic56);
        let (e3, e4) = srf.normal_frame(0.4, 0.6).unwrap();
        assert!((inner(e3, e3) + 1.0).abs() < 1e-12);
        assert!((inner(e4, e4) + 1.0).abs() < 1e-12);
    }

    #[test]
    fn degenerate_frame() {
        // constant angles give no t-motion at all
        let fam = SurfaceFamily::from_text(FamilyKind::Hyperbolic14, Variant::A, "2+t", "3+2*t", (0.0, 1.0)).unwrap();
        let srf = DoubleRotationSurface::from_text(fam.clone(), "t", "0", (0.0, 1.0)).unwrap();
        assert!(matches!(srf.normal_frame(0.5, 0.5), Err(Error::FrameDegenerate("e3", _))));
        let fam = SurfaceFamily::from_text(FamilyKind::Hyperbolic14, Variant::A, "2+t", "3+t", (0.0, 1.0)).unwrap();
        let srf = DoubleRotationSurface::from_text(fam, "1", "t", (0.0, 1.0)).unwrap();
        assert!(matches!(srf.normal_frame(0.5, 0.5), Err(Error::FrameDegenerate("e4", _))));
    }

    #[test]
    fn variant_b_is_unsupported() {
        let fam = SurfaceFamily::from_text(FamilyKind::Hyperbolic14, Variant::B, "2+t", "3+2*t", (0.0, 1.0)).unwrap();
        assert!(matches!(DoubleRotationSurface::from_text(fam, "1", "t", (0.0, 1.0)), Err(Error::Unsupported(_))));
    }

    #[test]
    fn flat_configurations() {
        for kind in KINDS {
            let srf = flat(kind);
            for (t, s) in [(0.2, 0.3), (0.8, 0.6)] {
                let r = srf.curvature_report(t, s, None).unwrap();
                assert_eq!(r.k_formula.abs(), 0.0, "{kind}");
                assert!(r.k_oracle.abs() <= 1e-6, "{kind}: {}", r.k_oracle);
            }
        }
        let r = flat(FamilyKind::Hyperbolic14).curvature_report(0.5, 0.5, None).unwrap();
        assert_eq!(r.h4, 0.0);
    }

    #[test]
    fn oracle_recovers_known_curvatures() {
        // round sphere (θ, φ): g = diag(1, sin²θ), K = 1
        let sphere = |a: f64, _b: f64| Ok([1.0, 0.0, a.sin().powi(2)]);
        let k = gaussian_curvature_fd(sphere, 0.9, 0.3, 1e-3).unwrap();
        assert!((k - 1.0).abs() < 1e-5, "{k}");
        // hyperbolic plane in the upper half plane: K = −1
        let upper = |_x: f64, y: f64| Ok([1.0 / (y * y), 0.0, 1.0 / (y * y)]);
        let k = gaussian_curvature_fd(upper, 0.2, 1.3, 1e-3).unwrap();
        assert!((k + 1.0).abs() < 1e-5, "{k}");
        // de Sitter slice: −dt² + cosh²t dx², K = +1
        let ds = |t: f64, _x: f64| Ok([-1.0, 0.0, t.cosh().powi(2)]);
        let k = gaussian_curvature_fd(ds, 0.4, 0.0, 1e-3).unwrap();
        assert!((k - 1.0).abs() < 1e-5, "{k}");
    }

    #[test]
    fn oracle_agrees_with_the_ambient_gauss_equation() {
        // K = (<II_tt, II_ss> − <II_ts, II_ts>) / det g summed over the
        // normal frame with signs ε_i
        for kind in KINDS {
            let srf = curved(kind);
            let (t, s) = (0.45, 0.55);
            let h = 1e-4;
            let (pt, ps) = srf.partials(t, s).unwrap();
            let g = srf.induced_metric(t, s).unwrap();
            let det = g[0] * g[2] - g[1] * g[1];
            let (e3, e4) = srf.normal_frame(t, s).unwrap();
            let c = 1.0 / (2.0 * h);
            let stt = (srf.partials(t + h, s).unwrap().0 - srf.partials(t - h, s).unwrap().0).scale(c);
            let sts = (srf.partials(t, s + h).unwrap().0 - srf.partials(t, s - h).unwrap().0).scale(c);
            let sss = (srf.partials(t, s + h).unwrap().1 - srf.partials(t, s - h).unwrap().1).scale(c);
            let mut k = 0.0;
            for e in [e3, e4] {
                let eps = inner(e, e);
                k += eps * (inner(stt, e) * inner(sss, e) - inner(sts, e).powi(2));
            }
            k /= det;
            let oracle = srf.k_oracle(t, s, 1e-3).unwrap();
            assert!((k - oracle).abs() < 1e-5, "{kind}: gauss {k} vs oracle {oracle}");
            // the frame spans the normal plane: e3, e4, ∂t, ∂s are independent
            assert!(inner(cross(pt, ps, e3), e4).abs() > 1e-6);
        }
    }

    #[test]
    fn oracles_converge_at_second_order() {
        for kind in KINDS {
            let srf = curved(kind);
            let (t, s) = (0.5, 0.5);
            let hs = [0.02, 0.01, 0.005];
            let k: Vec<f64> = hs.iter().map(|&h| srf.k_oracle(t, s, h).unwrap()).collect();
            let order = ((k[0] - k[1]) / (k[1] - k[2])).abs().log2();
            assert!(order >= 1.8, "{kind}: K order {order}");
            let hv: Vec<Vector4> = hs.iter().map(|&h| srf.h_oracle(t, s, h).unwrap()).collect();
            let order = ((hv[0] - hv[1]).max_abs() / (hv[1] - hv[2]).max_abs()).log2();
            assert!(order >= 1.8, "{kind}: H order {order}");
            let a = srf.k_oracle(t, s, 1e-4).unwrap();
            let b = srf.k_oracle(t, s, 5e-5).unwrap();
            assert!((a - b).abs() <= 1e-6);
        }
    }

    #[test]
    fn mean_curvature_is_normal() {
        for kind in KINDS {
            let r = curved(kind).curvature_report(0.3, 0.7, None).unwrap();
            assert!(r.normal_residual <= 1e-8, "{kind}: {}", r.normal_residual);
            let rebuilt = r.e3.scale(r.h3) + r.e4.scale(r.h4);
            assert!((rebuilt - r.h_formula).max_abs() <= 1e-12);
        }
    }

    proptest! {
        #[test]
        fn random_frames(kind in 0usize..3, c1 in 0.5f64..3.0, c2 in -1.0f64..1.0, c3 in 0.5f64..3.0,
                         c4 in -2.0f64..2.0, w1 in -2.0f64..2.0, w2 in -2.0f64..2.0,
                         t in 0.0f64..1.0, s in 0.0f64..1.0) {
            let kind = KINDS[kind];
            let fa = format!("{c1} + {c2}*t + t^2/5");
            let fb = format!("{c3} + {c4}*t");
            let fam = SurfaceFamily::from_text(kind, Variant::A, &fa, &fb, (0.0, 1.0)).unwrap();
            let srf = DoubleRotationSurface::from_text(fam, &format!("{w1}*t"), &format!("{w2}*t + t^2"), (0.0, 1.0)).unwrap();
            prop_assume!(srf.normal_frame(t, s).is_ok());
            metric_check(&srf, t, s);
        }
    }
}
