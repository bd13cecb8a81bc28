//! C ABI over `clairaut-core`.
//!
//! Every fallible function returns a [`ClairautStatus`]; on failure the
//! message is available from [`clairaut_last_error`] on the same thread.
//! Surfaces and trajectories are opaque handles released with their `_free`
//! function. Vectors are passed as `double[4]`, geodesic states as
//! `double[6]` in the order `u, v, t, du, dv, dt`.

// `!(x < y)` is used on purpose so that NaN fails the check
#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use clairaut_core::geodesic::{self, Method, Termination, Trajectory};
use clairaut_core::isometry::{self, KillingParams, RotationGenerator};
use clairaut_core::pseudometric::{self, CausalCharacter, Vector4};
use clairaut_core::surface::{FamilyKind, GeodesicState, SurfaceFamily, Variant};
use clairaut_core::Error;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClairautStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    ParseError = 3,
    OutsideDomain = 4,
    DegenerateMetric = 5,
    NotTimelike = 6,
    Numerical = 7,
    Unsupported = 8,
    Panic = 9,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClairautFamily {
    Hyperbolic14 = 0,
    Hyperbolic23 = 1,
    Elliptic56 = 2,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClairautVariant {
    A = 0,
    B = 1,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClairautCausal {
    Spacelike = 0,
    Timelike = 1,
    Null = 2,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClairautTermination {
    Completed = 0,
    DomainExit = 1,
    Degenerate = 2,
    NonFinite = 3,
}

/// Conserved quantities and angle decomposition at one state.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct ClairautReport {
    pub lagrangian: f64,
    pub p_u: f64,
    pub p_v: f64,
    pub invariant1: f64,
    pub invariant2: f64,
    pub phi: f64,
    pub theta: f64,
    pub residual: f64,
    pub angles_defined: bool,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct ClairautSample {
    pub s: f64,
    pub state: [f64; 6],
    pub lagrangian: f64,
    pub p_u: f64,
    pub p_v: f64,
    pub invariant1: f64,
    pub invariant2: f64,
}

/// Opaque rotational surface.
pub struct ClairautSurface {
    family: SurfaceFamily,
}

/// Opaque integrated trajectory.
pub struct ClairautTrajectory {
    inner: Trajectory,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn ok() -> ClairautStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    ClairautStatus::Ok
}

fn fail(status: ClairautStatus, msg: impl Into<String>) -> ClairautStatus {
    set_error(msg.into());
    status
}

fn status_of(e: &Error) -> ClairautStatus {
    match e {
        Error::Expr(_) => ClairautStatus::ParseError,
        Error::OutsideDomain { .. } => ClairautStatus::OutsideDomain,
        Error::DegenerateMetric { .. } => ClairautStatus::DegenerateMetric,
        Error::NotTimelike(_) => ClairautStatus::NotTimelike,
        Error::InvalidRadius(_) | Error::Precondition(_) => ClairautStatus::InvalidArgument,
        Error::MeridianUndefined | Error::FrameDegenerate(..) | Error::NonFinite(_) => ClairautStatus::Numerical,
        Error::Unsupported(_) => ClairautStatus::Unsupported,
    }
}

/// Runs `f`, turning core errors and panics into status codes.
fn guard(f: impl FnOnce() -> Result<(), Error>) -> ClairautStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => ok(),
        Ok(Err(e)) => fail(status_of(&e), e.to_string()),
        Err(_) => fail(ClairautStatus::Panic, "internal panic"),
    }
}

macro_rules! non_null {
    ($($p:ident),+) => {
        $(if $p.is_null() {
            return fail(ClairautStatus::NullPointer, concat!("`", stringify!($p), "` is null"));
        })+
    };
}

unsafe fn vec4(p: *const f64) -> Vector4 {
    Vector4(*(p as *const [f64; 4]))
}

unsafe fn state6(p: *const f64) -> GeodesicState {
    GeodesicState::from_array(*(p as *const [f64; 6]))
}

/// Message of the last failed call on this thread, or NULL if the most
/// recent status-returning call succeeded. The pointer stays valid until the next call into the
/// library on the same thread.
#[no_mangle]
pub extern "C" fn clairaut_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Index-2 inner product of two `double[4]`.
///
/// # Safety
/// `v` and `w` must point to 4 readable doubles.
#[no_mangle]
pub unsafe extern "C" fn clairaut_inner(v: *const f64, w: *const f64) -> f64 {
    if v.is_null() || w.is_null() {
        return f64::NAN;
    }
    pseudometric::inner(vec4(v), vec4(w))
}

/// # Safety
/// `v` must point to 4 readable doubles and `out` to a writable enum.
#[no_mangle]
pub unsafe extern "C" fn clairaut_classify(v: *const f64, tol: f64, out: *mut ClairautCausal) -> ClairautStatus {
    non_null!(v, out);
    if !(tol >= 0.0) {
        return fail(ClairautStatus::InvalidArgument, format!("tolerance must be >= 0, got {tol}"));
    }
    *out = match pseudometric::classify(vec4(v), tol) {
        CausalCharacter::Spacelike => ClairautCausal::Spacelike,
        CausalCharacter::Timelike => ClairautCausal::Timelike,
        CausalCharacter::Null => ClairautCausal::Null,
    };
    ok()
}

/// Triple cross product of three `double[4]` into `out`.
///
/// # Safety
/// `x`, `y`, `z` must point to 4 readable doubles and `out` to 4 writable ones.
#[no_mangle]
pub unsafe extern "C" fn clairaut_cross(x: *const f64, y: *const f64, z: *const f64, out: *mut f64) -> ClairautStatus {
    non_null!(x, y, z, out);
    let r = pseudometric::cross(vec4(x), vec4(y), vec4(z));
    ptr::copy_nonoverlapping(r.0.as_ptr(), out, 4);
    ok()
}

/// Largest entry of the Lie-derivative residual of the Killing field with
/// coefficients `params = {a, b, c, d, e, f}`.
///
/// # Safety
/// `params` must point to 6 readable doubles and `out_max` to a writable double.
#[no_mangle]
pub unsafe extern "C" fn clairaut_killing_residual(params: *const f64, out_max: *mut f64) -> ClairautStatus {
    non_null!(params, out_max);
    let p = KillingParams::from_array(*(params as *const [f64; 6]));
    *out_max = isometry::max_abs(&isometry::lie_residual(&p.field()));
    ok()
}

/// Row-major 4×4 rotation of generator `generator` (1..=6) through `s`.
///
/// # Safety
/// `out` must point to 16 writable doubles.
#[no_mangle]
pub unsafe extern "C" fn clairaut_rotation_matrix(generator: u32, s: f64, out: *mut f64) -> ClairautStatus {
    non_null!(out);
    let Some(gen) = (generator as usize).checked_sub(1).and_then(|i| RotationGenerator::ALL.get(i)) else {
        return fail(ClairautStatus::InvalidArgument, format!("generator must be 1..=6, got {generator}"));
    };
    let m = isometry::rotation_matrix(*gen, s);
    for (r, row) in m.iter().enumerate() {
        ptr::copy_nonoverlapping(row.as_ptr(), out.add(4 * r), 4);
    }
    ok()
}

unsafe fn text<'a>(p: *const c_char, name: &str) -> Result<&'a str, Error> {
    CStr::from_ptr(p).to_str().map_err(|_| Error::Precondition(format!("`{name}` is not valid UTF-8")))
}

/// Parses the two profile expressions over `[t_min, t_max]` and returns a
/// new surface in `*out`. `family` and `variant` take the values of
/// [`ClairautFamily`] and [`ClairautVariant`].
///
/// # Safety
/// `fa` and `fb` must be NUL-terminated strings; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn clairaut_surface_new(
    family: u32,
    variant: u32,
    fa: *const c_char,
    fb: *const c_char,
    t_min: f64,
    t_max: f64,
    out: *mut *mut ClairautSurface,
) -> ClairautStatus {
    non_null!(fa, fb, out);
    *out = ptr::null_mut();
    guard(|| {
        let kind = match family {
            f if f == ClairautFamily::Hyperbolic14 as u32 => FamilyKind::Hyperbolic14,
            f if f == ClairautFamily::Hyperbolic23 as u32 => FamilyKind::Hyperbolic23,
            f if f == ClairautFamily::Elliptic56 as u32 => FamilyKind::Elliptic56,
            f => return Err(Error::Precondition(format!("unknown family {f}"))),
        };
        let variant = match variant {
            v if v == ClairautVariant::A as u32 => Variant::A,
            v if v == ClairautVariant::B as u32 => Variant::B,
            v => return Err(Error::Precondition(format!("unknown variant {v}"))),
        };
        if !(t_min < t_max) {
            return Err(Error::Precondition(format!("need t_min < t_max, got [{t_min}, {t_max}]")));
        }
        let fam = SurfaceFamily::from_text(kind, variant, text(fa, "fa")?, text(fb, "fb")?, (t_min, t_max))?;
        *out = Box::into_raw(Box::new(ClairautSurface { family: fam }));
        Ok(())
    })
}

/// # Safety
/// `surface` must come from [`clairaut_surface_new`] and not be used again.
#[no_mangle]
pub unsafe extern "C" fn clairaut_surface_free(surface: *mut ClairautSurface) {
    if !surface.is_null() {
        drop(Box::from_raw(surface));
    }
}

/// Metric coefficients `{E, G, N}` at `t`.
///
/// # Safety
/// `surface` must be a live handle and `out` must point to 3 writable doubles.
#[no_mangle]
pub unsafe extern "C" fn clairaut_surface_metric(
    surface: *const ClairautSurface,
    t: f64,
    out: *mut f64,
) -> ClairautStatus {
    non_null!(surface, out);
    let fam = &(*surface).family;
    guard(|| {
        let m = fam.metric_coefficients(t)?;
        ptr::copy_nonoverlapping([m.e, m.g, m.n].as_ptr(), out, 3);
        Ok(())
    })
}

/// Ambient point of `(u, v, t)`.
///
/// # Safety
/// `surface` must be a live handle and `out` must point to 4 writable doubles.
#[no_mangle]
pub unsafe extern "C" fn clairaut_surface_immerse(
    surface: *const ClairautSurface,
    u: f64,
    v: f64,
    t: f64,
    out: *mut f64,
) -> ClairautStatus {
    non_null!(surface, out);
    let fam = &(*surface).family;
    guard(|| {
        let p = fam.immerse(u, v, t)?;
        ptr::copy_nonoverlapping(p.0.as_ptr(), out, 4);
        Ok(())
    })
}

/// Right-hand side of the geodesic system at `state`.
///
/// # Safety
/// `surface` must be a live handle, `state` must point to 6 readable doubles
/// and `out` to 6 writable ones.
#[no_mangle]
pub unsafe extern "C" fn clairaut_geodesic_rhs(
    surface: *const ClairautSurface,
    state: *const f64,
    out: *mut f64,
) -> ClairautStatus {
    non_null!(surface, state, out);
    let (fam, st) = (&(*surface).family, state6(state));
    guard(|| {
        let r = geodesic::geodesic_rhs(fam, &st)?;
        ptr::copy_nonoverlapping(r.as_ptr(), out, 6);
        Ok(())
    })
}

/// Conjugate momenta `{p_u, p_v}` at `state`.
///
/// # Safety
/// As for [`clairaut_geodesic_rhs`], with `out` pointing to 2 doubles.
#[no_mangle]
pub unsafe extern "C" fn clairaut_momenta(
    surface: *const ClairautSurface,
    state: *const f64,
    out: *mut f64,
) -> ClairautStatus {
    non_null!(surface, state, out);
    let (fam, st) = (&(*surface).family, state6(state));
    guard(|| {
        let (pu, pv) = geodesic::momenta(fam, &st)?;
        ptr::copy_nonoverlapping([pu, pv].as_ptr(), out, 2);
        Ok(())
    })
}

/// Lagrangian, momenta, Clairaut invariants and angles at `state`.
///
/// # Safety
/// `surface` must be a live handle, `state` must point to 6 readable doubles
/// and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn clairaut_report(
    surface: *const ClairautSurface,
    state: *const f64,
    out: *mut ClairautReport,
) -> ClairautStatus {
    non_null!(surface, state, out);
    let (fam, st) = (&(*surface).family, state6(state));
    guard(|| {
        let r = geodesic::clairaut_report(fam, &st)?;
        *out = ClairautReport {
            lagrangian: r.l,
            p_u: r.p_u,
            p_v: r.p_v,
            invariant1: r.invariant1,
            invariant2: r.invariant2,
            phi: r.angles.phi,
            theta: r.angles.theta,
            residual: r.angles.residual,
            angles_defined: r.angles.defined,
        };
        Ok(())
    })
}

/// Integrates from `state` over arclength `length` with fixed step `step`
/// and returns the trajectory in `*out`. An early stop (domain exit,
/// degeneracy) still returns `CLAIRAUT_STATUS_OK`; inspect
/// [`clairaut_trajectory_termination`].
///
/// # Safety
/// `surface` must be a live handle, `state` must point to 6 readable doubles
/// and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn clairaut_integrate(
    surface: *const ClairautSurface,
    state: *const f64,
    length: f64,
    step: f64,
    out: *mut *mut ClairautTrajectory,
) -> ClairautStatus {
    non_null!(surface, state, out);
    *out = ptr::null_mut();
    let (fam, st) = (&(*surface).family, state6(state));
    guard(|| {
        let tr = geodesic::integrate(fam, &st, length, step, Method::Rk4)?;
        *out = Box::into_raw(Box::new(ClairautTrajectory { inner: tr }));
        Ok(())
    })
}

/// Number of samples, or 0 for a null handle.
///
/// # Safety
/// `traj` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn clairaut_trajectory_len(traj: *const ClairautTrajectory) -> usize {
    if traj.is_null() {
        return 0;
    }
    (*traj).inner.samples.len()
}

/// # Safety
/// `traj` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn clairaut_trajectory_termination(traj: *const ClairautTrajectory) -> ClairautTermination {
    match (*traj).inner.termination {
        Termination::Completed => ClairautTermination::Completed,
        Termination::DomainExit { .. } => ClairautTermination::DomainExit,
        Termination::Degenerate { .. } => ClairautTermination::Degenerate,
        Termination::NonFinite { .. } => ClairautTermination::NonFinite,
    }
}

/// Copies sample `index` into `*out`.
///
/// # Safety
/// `traj` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn clairaut_trajectory_sample(
    traj: *const ClairautTrajectory,
    index: usize,
    out: *mut ClairautSample,
) -> ClairautStatus {
    non_null!(traj, out);
    let samples = &(*traj).inner.samples;
    let Some(s) = samples.get(index) else {
        return fail(
            ClairautStatus::InvalidArgument,
            format!("sample index {index} out of range (len {})", samples.len()),
        );
    };
    *out = ClairautSample {
        s: s.s,
        state: s.state.to_array(),
        lagrangian: s.l,
        p_u: s.p_u,
        p_v: s.p_v,
        invariant1: s.inv1,
        invariant2: s.inv2,
    };
    ok()
}

/// # Safety
/// `traj` must come from [`clairaut_integrate`] and not be used again.
#[no_mangle]
pub unsafe extern "C" fn clairaut_trajectory_free(traj: *mut ClairautTrajectory) {
    if !traj.is_null() {
        drop(Box::from_raw(traj));
    }
}
