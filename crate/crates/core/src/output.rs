//! Deterministic text artifacts and atomic file writes.

use std::fmt::Write as _;
use std::io::{self, Write};
use std::path::Path;

use crate::curvature::CurvatureReport;
use crate::geodesic::Trajectory;

pub const TRAJECTORY_HEADER: &str = "s,u,v,t,du,dv,dt,L,p_u,p_v,inv1,inv2";
pub const CURVATURE_HEADER: &str = "t,s,K_formula,K_oracle,K_gap,h3,h4,H_gap";

/// 17 significant digits, enough to round-trip any `f64`.
pub fn num(x: f64) -> String {
    format!("{x:.16e}")
}

fn row(out: &mut String, values: &[f64]) {
    for (i, v) in values.iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        out.push_str(&num(*v));
    }
    out.push('\n');
}

pub fn trajectory_csv(traj: &Trajectory) -> String {
    let mut out = String::with_capacity(256 * traj.samples.len());
    out.push_str(TRAJECTORY_HEADER);
    out.push('\n');
    for smp in &traj.samples {
        let st = smp.state;
        row(&mut out, &[smp.s, st.u, st.v, st.t, st.du, st.dv, st.dt, smp.l, smp.p_u, smp.p_v, smp.inv1, smp.inv2]);
    }
    out
}

/// One grid point of a curvature run; `Err` keeps the reason a point could
/// not be evaluated.
pub type CurvaturePoint = (f64, f64, Result<CurvatureReport, String>);

pub fn curvature_csv(points: &[CurvaturePoint]) -> String {
    let mut out = String::new();
    out.push_str(CURVATURE_HEADER);
    out.push('\n');
    for (t, s, r) in points {
        match r {
            Ok(r) => row(&mut out, &[*t, *s, r.k_formula, r.k_oracle, r.k_gap, r.h3, r.h4, r.h_gap]),
            Err(_) => {
                let nan = f64::NAN;
                row(&mut out, &[*t, *s, nan, nan, nan, nan, nan, nan])
            }
        }
    }
    out
}

pub fn curvature_json(points: &[CurvaturePoint]) -> String {
    let rows: Vec<serde_json::Value> = points
        .iter()
        .map(|(t, s, r)| match r {
            Ok(r) => serde_json::to_value(r).expect("report serializes"),
            Err(e) => serde_json::json!({ "t": t, "s": s, "error": e }),
        })
        .collect();
    let mut out = serde_json::to_string_pretty(&rows).expect("rows serialize");
    out.push('\n');
    out
}

pub fn trajectory_json(traj: &Trajectory) -> String {
    let mut out = serde_json::to_string_pretty(traj).expect("trajectory serializes");
    let _ = writeln!(out);
    out
}

/// Writes `contents` to a temporary file next to `path` and renames it into
/// place, so readers never observe a partial file.
pub fn write_atomic(path: &Path, contents: &[u8]) -> io::Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    std::fs::create_dir_all(dir)?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(contents)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}
