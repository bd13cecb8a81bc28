//! The `clairaut` command-line front end.
//!
//! Exit status: 0 on success, 1 for invalid input (configuration, flags,
//! expressions), 2 for numerical failure (degenerate metric, early domain
//! exit, non-finite state, degenerate frames everywhere).

use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use serde::Serialize;

use crate::config::{ConfigError, Format, RunConfig};
use crate::error::Error;
use crate::expr::{differentiate, parse};
use crate::geodesic::{integrate, isometry_check, Drift, Method, Termination, Trajectory};
use crate::isometry::{killing_field_eval, lie_residual, max_abs, KillingParams, RotationGenerator};
use crate::output::{self, CurvaturePoint};
use crate::pseudometric::Vector4;

#[derive(Debug, Parser)]
#[command(name = "clairaut", version, about = "Geodesics and Clairaut invariants on rotational surfaces in E(2,4)")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the metric coefficients on a 10-point grid and flag degeneracies.
    Info {
        #[arg(short, long)]
        config: PathBuf,
    },
    /// Integrate a geodesic and write the trajectory.
    Geodesic {
        #[arg(short, long)]
        config: PathBuf,
        /// Overrides `output.path`.
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Like `geodesic`, plus a drift summary next to the trajectory.
    Invariants {
        #[arg(short, long)]
        config: PathBuf,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Curvature report on the configured (t, s) grid.
    Curvature {
        #[arg(short, long)]
        config: PathBuf,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Lie-derivative residual of the Killing field with coefficients a..f.
    Killing {
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
        params: Vec<f64>,
    },
    /// Map a computed geodesic through a rotation and measure the residual.
    Isometry {
        #[arg(short, long)]
        config: PathBuf,
        #[arg(long, value_parser = parse_generator)]
        generator: RotationGenerator,
        #[arg(long, allow_hyphen_values = true)]
        angle: f64,
    },
    /// Print the parse tree and derivatives of expressions (or of the
    /// profiles in a config).
    ParseCheck {
        exprs: Vec<String>,
        #[arg(short, long)]
        config: Option<PathBuf>,
    },
}

fn parse_generator(s: &str) -> Result<RotationGenerator, String> {
    s.parse::<RotationGenerator>().map_err(|e| e.to_string())
}

#[derive(Debug)]
pub enum CliError {
    Invalid(String),
    Numerical(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Invalid(_) => 1,
            CliError::Numerical(_) => 2,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Invalid(m) | CliError::Numerical(m) => m,
        }
    }
}

impl From<ConfigError> for CliError {
    fn from(e: ConfigError) -> Self {
        CliError::Invalid(e.to_string())
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::Expr(_)
            | Error::InvalidRadius(_)
            | Error::Precondition(_)
            | Error::Unsupported(_)
            | Error::NotTimelike(_) => CliError::Invalid(e.to_string()),
            Error::OutsideDomain { .. }
            | Error::DegenerateMetric { .. }
            | Error::MeridianUndefined
            | Error::FrameDegenerate(..)
            | Error::NonFinite(_) => CliError::Numerical(e.to_string()),
        }
    }
}

/// Parses `args` and runs the command; returns the process exit status.
pub fn run_from_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    match run(cli.command) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {}", e.message());
            e.exit_code()
        }
    }
}

pub fn run(cmd: Command) -> Result<(), CliError> {
    match cmd {
        Command::Info { config } => info(&RunConfig::load(&config)?),
        Command::Geodesic { config, out } => geodesic(&RunConfig::load(&config)?, out, false),
        Command::Invariants { config, out } => geodesic(&RunConfig::load(&config)?, out, true),
        Command::Curvature { config, out } => curvature(&RunConfig::load(&config)?, out),
        Command::Killing { params } => killing(&params),
        Command::Isometry { config, generator, angle } => isometry(&RunConfig::load(&config)?, generator, angle),
        Command::ParseCheck { exprs, config } => parse_check(exprs, config.as_deref()),
    }
}

fn write(path: &Path, contents: &str) -> Result<(), CliError> {
    output::write_atomic(path, contents.as_bytes())
        .map_err(|e| CliError::Invalid(format!("cannot write {}: {e}", path.display())))
}

fn info(cfg: &RunConfig) -> Result<(), CliError> {
    let fam = cfg.family()?;
    println!("family   {}/{}", fam.kind, fam.variant);
    println!("fa       {}   fa' = {}   fa'' = {}", fam.fa.source, fam.fa.d1, fam.fa.d2);
    println!("fb       {}   fb' = {}   fb'' = {}", fam.fb.source, fam.fb.d1, fam.fb.d2);
    let (ga, gb) = fam.generators();
    println!("rotations u: {ga}, v: {gb}");
    println!("{:>24} {:>24} {:>24} {:>24}  flag", "t", "E", "G", "N");
    let [lo, hi] = cfg.domain;
    let mut degenerate = 0;
    for i in 0..10 {
        let t = lo + (hi - lo) * i as f64 / 9.0;
        let m = fam.metric_coefficients(t)?;
        let flag = if m.is_degenerate() {
            degenerate += 1;
            "degenerate"
        } else {
            ""
        };
        println!(
            "{:>24} {:>24} {:>24} {:>24}  {flag}",
            output::num(t),
            output::num(m.e),
            output::num(m.g),
            output::num(m.n)
        );
    }
    if degenerate > 0 {
        println!("{degenerate} of 10 grid points have a degenerate metric");
    }
    Ok(())
}

#[derive(Serialize)]
struct Summary {
    #[serde(flatten)]
    drift: Drift,
    decomposition_residual: Option<f64>,
    samples: usize,
    angles_defined_samples: usize,
    reached_length: f64,
    requested_length: f64,
    step: f64,
    termination: Termination,
}

fn run_geodesic(cfg: &RunConfig) -> Result<(Trajectory, Option<f64>), CliError> {
    let g = cfg.geodesic()?;
    let fam = cfg.family()?;
    let start = cfg.initial_state()?;
    let traj = integrate(&fam, &start.state, g.length, g.step, Method::Rk4)?;
    if !traj.termination.is_completed() {
        let reached = traj.reached_length();
        let msg = format!("integration stopped early at s = {reached}: {:?}", traj.termination);
        if reached < 0.1 * g.length {
            return Err(CliError::Numerical(msg));
        }
        eprintln!("warning: {msg}");
    }
    Ok((traj, start.decomposition_residual))
}

fn geodesic(cfg: &RunConfig, out: Option<PathBuf>, summary: bool) -> Result<(), CliError> {
    let (traj, residual) = run_geodesic(cfg)?;
    let path = cfg.output.resolved_path(out, "trajectory.csv");
    let text = match cfg.output.format {
        Format::Csv => output::trajectory_csv(&traj),
        Format::Json => output::trajectory_json(&traj),
    };
    write(&path, &text)?;
    println!("wrote {} samples to {}", traj.samples.len(), path.display());
    if summary {
        let drift = traj.drift();
        let s = Summary {
            drift,
            decomposition_residual: residual,
            samples: traj.samples.len(),
            angles_defined_samples: traj.samples.iter().filter(|s| s.angles_defined).count(),
            reached_length: traj.reached_length(),
            requested_length: traj.requested_length,
            step: cfg.geodesic()?.step,
            termination: traj.termination,
        };
        let mut text = serde_json::to_string_pretty(&s).expect("summary serializes");
        text.push('\n');
        let spath = summary_path(&path);
        write(&spath, &text)?;
        println!(
            "drift p_u {:.3e}  p_v {:.3e}  L {:.3e}  inv1 {:.3e}  inv2 {:.3e}",
            drift.p_u_drift, drift.p_v_drift, drift.l_drift, drift.inv1_drift, drift.inv2_drift
        );
        println!("wrote summary to {}", spath.display());
    }
    Ok(())
}

/// `trajectory.csv` → `trajectory.summary.json`.
pub fn summary_path(path: &Path) -> PathBuf {
    path.with_extension("summary.json")
}

fn grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    // cell midpoints keep difference stencils inside the ranges
    (0..n).map(|i| lo + (hi - lo) * (i as f64 + 0.5) / n as f64).collect()
}

fn curvature(cfg: &RunConfig, out: Option<PathBuf>) -> Result<(), CliError> {
    let srf = cfg.surface()?;
    let c = cfg.curvature.as_ref().expect("validated by surface()");
    let (tl, th) = srf.t_range();
    let (sl, sh) = srf.s_range();
    let mut points: Vec<CurvaturePoint> = Vec::new();
    for t in grid(tl, th, c.grid.nt) {
        for s in grid(sl, sh, c.grid.ns) {
            let r = srf.curvature_report(t, s, c.fd_step).map_err(|e| e.to_string());
            points.push((t, s, r));
        }
    }
    let failed = points.iter().filter(|p| p.2.is_err()).count();
    let path = cfg.output.resolved_path(out, "curvature.csv");
    let text = match cfg.output.format {
        Format::Csv => output::curvature_csv(&points),
        Format::Json => output::curvature_json(&points),
    };
    write(&path, &text)?;
    println!("wrote {} grid points to {}", points.len(), path.display());
    let ok: Vec<_> = points.iter().filter_map(|p| p.2.as_ref().ok()).collect();
    if ok.is_empty() {
        let first = points.iter().find_map(|p| p.2.as_ref().err()).cloned().unwrap_or_default();
        return Err(CliError::Numerical(format!("no admissible grid point ({first})")));
    }
    if failed > 0 {
        eprintln!("warning: {failed} grid points were not admissible and are written as NaN");
    }
    let max_k = ok.iter().map(|r| r.k_gap).fold(0.0, f64::max);
    let max_h = ok.iter().map(|r| r.h_gap).fold(0.0, f64::max);
    println!("max K_gap {max_k:.3e}  max H_gap {max_h:.3e}");
    Ok(())
}

fn killing(params: &[f64]) -> Result<(), CliError> {
    let arr: [f64; 6] = params
        .try_into()
        .map_err(|_| CliError::Invalid(format!("--params needs 6 values a,b,c,d,e,f, got {}", params.len())))?;
    if arr.iter().any(|x| !x.is_finite()) {
        return Err(CliError::Invalid("--params must be finite".into()));
    }
    let p = KillingParams::from_array(arr);
    let field = p.field();
    let res = lie_residual(&field);
    println!("field matrix:");
    for r in field.0 {
        println!("  {}", r.map(output::num).join(" "));
    }
    println!("residual:");
    for r in res {
        println!("  {}", r.map(output::num).join(" "));
    }
    let sample = killing_field_eval(&p, Vector4::new(1.0, 2.0, 3.0, 4.0));
    println!("W(1,2,3,4) = {sample}");
    println!("max |residual| = {}", output::num(max_abs(&res)));
    Ok(())
}

#[derive(Serialize)]
struct IsometryOutput {
    generator: String,
    angle: f64,
    max_residual: f64,
    max_shift_error: f64,
    max_chart_error: f64,
    samples: usize,
}

fn isometry(cfg: &RunConfig, gen: RotationGenerator, angle: f64) -> Result<(), CliError> {
    let fam = cfg.family()?;
    let (gu, gv) = fam.generators();
    if gen != gu && gen != gv {
        return Err(CliError::Invalid(format!(
            "--generator {gen} does not act on {}/{}; use {gu} or {gv}",
            fam.kind, fam.variant
        )));
    }
    let (traj, _) = run_geodesic(cfg)?;
    let chk = isometry_check(&fam, &traj, gen, angle)?;
    let out = IsometryOutput {
        generator: gen.to_string(),
        angle,
        max_residual: chk.max_residual,
        max_shift_error: chk.max_shift_error,
        max_chart_error: chk.max_chart_error,
        samples: traj.samples.len(),
    };
    println!("{}", serde_json::to_string_pretty(&out).expect("report serializes"));
    Ok(())
}

fn parse_check(exprs: Vec<String>, config: Option<&Path>) -> Result<(), CliError> {
    let mut items: Vec<(String, String)> = exprs.into_iter().map(|e| ("expr".to_string(), e)).collect();
    if let Some(path) = config {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Invalid(format!("cannot read {}: {e}", path.display())))?;
        // only the expressions are needed, so avoid full validation here
        let raw: serde_json::Value =
            serde_json::from_str(&text).map_err(|e| CliError::Invalid(format!("config: {e}")))?;
        for key in ["fa", "fb"] {
            if let Some(s) = raw["profiles"][key].as_str() {
                items.push((format!("profiles.{key}"), s.to_string()));
            }
        }
        for key in ["xAngle", "vAngle"] {
            if let Some(s) = raw["curvature"][key].as_str() {
                items.push((format!("curvature.{key}"), s.to_string()));
            }
        }
    }
    if items.is_empty() {
        return Err(CliError::Invalid("give at least one expression or --config".into()));
    }
    let mut failed = None;
    for (label, src) in &items {
        match parse(src) {
            Ok(e) => {
                let d1 = differentiate(&e);
                let d2 = differentiate(&d1);
                println!("{label}: {src}");
                println!("  tree      {}", e.to_sexpr());
                println!("  canonical {e}");
                println!("  d/dt      {d1}");
                println!("  d2/dt2    {d2}");
            }
            Err(err) => {
                println!("{label}: {src}");
                println!("  error     {err}");
                failed.get_or_insert(format!("{label}: {err}"));
            }
        }
    }
    match failed {
        Some(msg) => Err(CliError::Invalid(msg)),
        None => Ok(()),
    }
}
