//! JSON run configuration.

use std::path::{Path, PathBuf};

use serde::Deserialize;
use thiserror::Error;

use crate::curvature::DoubleRotationSurface;
use crate::geodesic::{extract_angles, state_from_angles, DEFAULT_ANGLE_TOL, DEFAULT_LENGTH, DEFAULT_STEP};
use crate::surface::{FamilyKind, GeodesicState, SurfaceFamily, Variant};

/// Overrides the directory of every output file.
pub const OUT_DIR_ENV: &str = "CLAIRAUT_OUT_DIR";

#[derive(Debug, Clone, PartialEq, Error)]
#[error("{field}: {msg}")]
pub struct ConfigError {
    pub field: String,
    pub msg: String,
}

fn invalid(field: &str, msg: impl Into<String>) -> ConfigError {
    ConfigError { field: field.to_string(), msg: msg.into() }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub family: FamilyKind,
    #[serde(default = "default_variant")]
    pub variant: Variant,
    pub profiles: Profiles,
    pub domain: [f64; 2],
    pub geodesic: Option<GeodesicConfig>,
    pub curvature: Option<CurvatureConfig>,
    #[serde(default)]
    pub output: OutputConfig,
}

fn default_variant() -> Variant {
    Variant::A
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Profiles {
    pub fa: String,
    pub fb: String,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeodesicConfig {
    pub initial: InitialCondition,
    #[serde(default = "default_length")]
    pub length: f64,
    #[serde(default = "default_step")]
    pub step: f64,
    #[serde(default)]
    pub normalize: bool,
}

fn default_length() -> f64 {
    DEFAULT_LENGTH
}

fn default_step() -> f64 {
    DEFAULT_STEP
}

/// Either explicit velocities or the family's angle pair.
#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum InitialCondition {
    Velocities(Velocities),
    Angles(Angles),
}

#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Velocities {
    pub u: f64,
    pub v: f64,
    pub t: f64,
    pub du: f64,
    pub dv: f64,
    pub dt: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Angles {
    pub u: f64,
    pub v: f64,
    pub t: f64,
    pub phi: f64,
    pub theta: f64,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CurvatureConfig {
    #[serde(rename = "xAngle")]
    pub x_angle: String,
    #[serde(rename = "vAngle")]
    pub v_angle: String,
    pub grid: Grid,
    pub fd_step: Option<f64>,
    /// Range of the angle parameter; the profile parameter uses `domain`.
    #[serde(default = "default_t_range")]
    pub t_range: [f64; 2],
}

fn default_t_range() -> [f64; 2] {
    [0.0, 1.0]
}

#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Grid {
    pub nt: usize,
    pub ns: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    pub path: Option<PathBuf>,
    #[serde(default)]
    pub format: Format,
}

impl OutputConfig {
    /// Output path: `explicit` (a command-line override), else the configured
    /// path, else `default_name`. [`OUT_DIR_ENV`] replaces the directory and
    /// keeps only the file name.
    pub fn resolved_path(&self, explicit: Option<PathBuf>, default_name: &str) -> PathBuf {
        let path = explicit.or_else(|| self.path.clone()).unwrap_or_else(|| PathBuf::from(default_name));
        match std::env::var_os(OUT_DIR_ENV) {
            Some(dir) if !dir.is_empty() => {
                let name = path.file_name().map(PathBuf::from).unwrap_or_else(|| PathBuf::from(default_name));
                Path::new(&dir).join(name)
            }
            _ => path,
        }
    }
}

/// The initial state after angle conversion and optional normalization.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PreparedInitial {
    pub state: GeodesicState,
    /// Decomposition residual of an angle-style start, measured after
    /// normalization.
    pub decomposition_residual: Option<f64>,
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self, ConfigError> {
        let cfg: RunConfig = serde_json::from_str(text).map_err(|e| invalid("config", e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| invalid("config", format!("cannot read {}: {e}", path.display())))?;
        RunConfig::from_json(&text)
    }

    fn validate(&self) -> Result<(), ConfigError> {
        let [lo, hi] = self.domain;
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(invalid("domain", format!("need finite t_min < t_max, got [{lo}, {hi}]")));
        }
        self.family()?;
        if let Some(g) = &self.geodesic {
            if !(g.step > 0.0 && g.step.is_finite()) {
                return Err(invalid("geodesic.step", format!("must be > 0, got {}", g.step)));
            }
            if !(g.length > 0.0 && g.length.is_finite()) {
                return Err(invalid("geodesic.length", format!("must be > 0, got {}", g.length)));
            }
            if g.step > g.length {
                return Err(invalid("geodesic.step", format!("{} exceeds geodesic.length {}", g.step, g.length)));
            }
            let t = match g.initial {
                InitialCondition::Velocities(v) => v.t,
                InitialCondition::Angles(a) => a.t,
            };
            if !(t >= lo && t <= hi) {
                return Err(invalid("geodesic.initial.t", format!("{t} lies outside the domain [{lo}, {hi}]")));
            }
        }
        if let Some(c) = &self.curvature {
            if c.grid.nt == 0 || c.grid.ns == 0 {
                return Err(invalid("curvature.grid", "nt and ns must be at least 1"));
            }
            if let Some(h) = c.fd_step {
                if !(h > 0.0 && h.is_finite()) {
                    return Err(invalid("curvature.fd_step", format!("must be > 0, got {h}")));
                }
            }
            let [a, b] = c.t_range;
            if !(a.is_finite() && b.is_finite() && a < b) {
                return Err(invalid("curvature.t_range", format!("need finite t_min < t_max, got [{a}, {b}]")));
            }
            self.surface()?;
        }
        Ok(())
    }

    pub fn family(&self) -> Result<SurfaceFamily, ConfigError> {
        let d = (self.domain[0], self.domain[1]);
        let fa = crate::expr::ProfileFunction::parse(&self.profiles.fa, d)
            .map_err(|e| invalid("profiles.fa", e.to_string()))?;
        let fb = crate::expr::ProfileFunction::parse(&self.profiles.fb, d)
            .map_err(|e| invalid("profiles.fb", e.to_string()))?;
        SurfaceFamily::new(self.family, self.variant, fa, fb).map_err(|e| invalid("profiles", e.to_string()))
    }

    pub fn geodesic(&self) -> Result<&GeodesicConfig, ConfigError> {
        self.geodesic.as_ref().ok_or_else(|| invalid("geodesic", "section missing"))
    }

    pub fn surface(&self) -> Result<DoubleRotationSurface, ConfigError> {
        let c = self.curvature.as_ref().ok_or_else(|| invalid("curvature", "section missing"))?;
        let range = (c.t_range[0], c.t_range[1]);
        let u = crate::expr::ProfileFunction::parse(&c.x_angle, range)
            .map_err(|e| invalid("curvature.xAngle", e.to_string()))?;
        let v = crate::expr::ProfileFunction::parse(&c.v_angle, range)
            .map_err(|e| invalid("curvature.vAngle", e.to_string()))?;
        DoubleRotationSurface::new(self.family()?, u, v).map_err(|e| invalid("curvature", e.to_string()))
    }

    /// Builds the starting state. Failures here are configuration errors.
    pub fn initial_state(&self) -> Result<PreparedInitial, ConfigError> {
        let g = self.geodesic()?;
        let fam = self.family()?;
        let field = "geodesic.initial";
        let (state, from_angles) = match g.initial {
            InitialCondition::Velocities(v) => (GeodesicState::new(v.u, v.v, v.t, v.du, v.dv, v.dt), false),
            InitialCondition::Angles(a) => (
                state_from_angles(&fam, a.u, a.v, a.t, a.phi, a.theta).map_err(|e| invalid(field, e.to_string()))?,
                true,
            ),
        };
        let state = if g.normalize {
            fam.normalize_timelike(&state).map_err(|e| invalid(field, e.to_string()))?
        } else {
            state
        };
        let decomposition_residual = if from_angles {
            Some(extract_angles(&fam, &state, DEFAULT_ANGLE_TOL).map_err(|e| invalid(field, e.to_string()))?.residual)
        } else {
            None
        };
        Ok(PreparedInitial { state, decomposition_residual })
    }
}
