//! Serialization: CSV tables, the grid binary format, gnuplot data files,
//! and run manifests.
//!
//! Floats are written with the shortest representation that parses back to
//! the same value, so identical runs produce byte-identical files.
//!
//! Grid binary layout (little endian):
//!
//! ```text
//! offset  size  field
//! 0       8     magic "FLGRID01"
//! 8       4     N (u32), cells per side
//! 12      4     reserved (zero)
//! 16      8     h (f64), grid spacing
//! 24      8     R (f64), ball radius
//! 32      8N²   values, row major f64
//! ```

use crate::config::RunConfig;
use crate::error::{Error, Result};
use crate::experiments::{BumpDecayResult, CutoffResult, SurveyResult, SweepResult};
use crate::grid::GridFunction;
use crate::radial::RadialProfile;
use crate::solver::{MinimizationResult, TraceRow};
use std::io::{Read, Write};
use std::path::Path;

const GRID_MAGIC: &[u8; 8] = b"FLGRID01";

pub fn write_radial_csv(path: &Path, profile: &RadialProfile) -> Result<()> {
    let mut out = String::from("r,value\n");
    for (r, v) in profile.radii().iter().zip(profile.values()) {
        out.push_str(&format!("{r},{v}\n"));
    }
    std::fs::write(path, out)?;
    Ok(())
}

pub fn write_grid_csv(path: &Path, grid: &GridFunction) -> Result<()> {
    let n = grid.n_side();
    let mut out = String::from("x,y,value\n");
    for i in 0..n {
        for j in 0..n {
            let (x, y) = grid.coord(i, j);
            out.push_str(&format!("{x},{y},{}\n", grid.values()[grid.index(i, j)]));
        }
    }
    std::fs::write(path, out)?;
    Ok(())
}

pub fn write_grid_binary(path: &Path, grid: &GridFunction) -> Result<()> {
    let mut file = std::fs::File::create(path)?;
    file.write_all(GRID_MAGIC)?;
    file.write_all(&(grid.n_side() as u32).to_le_bytes())?;
    file.write_all(&[0u8; 4])?;
    file.write_all(&grid.spacing().to_le_bytes())?;
    file.write_all(&grid.ball_radius().to_le_bytes())?;
    for v in grid.values() {
        file.write_all(&v.to_le_bytes())?;
    }
    Ok(())
}

pub fn read_grid_binary(path: &Path) -> Result<GridFunction> {
    let mut file = std::fs::File::open(path)?;
    let mut header = [0u8; 32];
    file.read_exact(&mut header)?;
    if &header[0..8] != GRID_MAGIC {
        return Err(Error::Config(format!("{}: not a grid binary", path.display())));
    }
    let n = u32::from_le_bytes(header[8..12].try_into().unwrap()) as usize;
    let h = f64::from_le_bytes(header[16..24].try_into().unwrap());
    let radius = f64::from_le_bytes(header[24..32].try_into().unwrap());
    let mut buf = vec![0u8; n * n * 8];
    file.read_exact(&mut buf)?;
    let values: Vec<f64> = buf
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().unwrap()))
        .collect();
    let mut grid = GridFunction::zeros(n, h, radius)?;
    grid.set_values(&values)?;
    Ok(grid)
}

pub fn write_sweep_csv(path: &Path, sweep: &SweepResult) -> Result<()> {
    let mut out = String::from(
        "R,m,M,gap,rel_gap,nonradiality,m_converged,M_converged,M_interior_min\n",
    );
    for row in &sweep.rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{}\n",
            row.radius,
            row.radial_level,
            row.full_level,
            row.gap,
            row.relative_gap,
            row.nonradiality,
            row.radial_converged,
            row.full_converged,
            row.full_interior_min,
        ));
    }
    // Whole-space reference row.
    out.push_str(&format!(
        "inf,{},NaN,NaN,NaN,NaN,{},NaN,NaN\n",
        sweep.whole_space_level, sweep.whole_space_converged
    ));
    std::fs::write(path, out)?;
    Ok(())
}

pub fn write_bump_csv(path: &Path, result: &BumpDecayResult) -> Result<()> {
    let mut out = String::from("t,quotient,upper_bound\n");
    for row in &result.rows {
        out.push_str(&format!("{},{},{}\n", row.t, row.quotient, row.upper_bound));
    }
    std::fs::write(path, out)?;
    Ok(())
}

pub fn write_cutoff_csv(path: &Path, result: &CutoffResult) -> Result<()> {
    let mut out = String::from("R,error\n");
    for row in &result.rows {
        out.push_str(&format!("{},{}\n", row.radius, row.error));
    }
    std::fs::write(path, out)?;
    Ok(())
}

pub fn write_survey_csv(path: &Path, result: &SurveyResult) -> Result<()> {
    let mut out = String::from("member_id,ratio,seminorm,weighted_norm,ok\n");
    for row in &result.rows {
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            row.member, row.ratio, row.seminorm, row.weighted_norm, row.ok
        ));
    }
    std::fs::write(path, out)?;
    Ok(())
}

/// Single summary row for a minimization result.
pub fn write_solve_summary_csv(path: &Path, result: &MinimizationResult) -> Result<()> {
    let mut out = String::from(
        "level,multiplier,constraint_residual,nonradiality,iters,converged,truncation_suspect\n",
    );
    out.push_str(&format!(
        "{},{},{},{},{},{},{}\n",
        result.level,
        result.multiplier,
        result.constraint_residual,
        result.nonradiality.unwrap_or(f64::NAN),
        result.iters,
        result.converged,
        result.truncation_suspect,
    ));
    std::fs::write(path, out)?;
    Ok(())
}

pub fn write_trace_csv(path: &Path, trace: &[TraceRow]) -> Result<()> {
    let mut out = String::from("iter,level,grad_norm,step\n");
    for row in trace {
        out.push_str(&format!("{},{},{},{}\n", row.iter, row.level, row.grad_norm, row.step));
    }
    std::fs::write(path, out)?;
    Ok(())
}

/// Two-column gnuplot data file.
pub fn write_plot_data(path: &Path, points: &[(f64, f64)]) -> Result<()> {
    let mut out = String::new();
    for (x, y) in points {
        out.push_str(&format!("{x} {y}\n"));
    }
    std::fs::write(path, out)?;
    Ok(())
}

/// Run manifest: experiment name, wall-clock stamp, crate version, and the
/// effective configuration. The `config` block parses back through
/// [`RunConfig::parse_str`] to exactly the configuration that ran.
pub fn write_manifest(
    path: &Path,
    experiment: &str,
    config: &RunConfig,
    timestamp: u64,
) -> Result<()> {
    let mut cfg = serde_json::Map::new();
    for (key, value) in config.to_pairs() {
        // Numbers become JSON numbers when they parse as such (integers kept
        // integral so they re-parse exactly); lists and the rest stay strings.
        let jv = if let Ok(i) = value.parse::<i64>() {
            serde_json::Value::Number(serde_json::Number::from(i))
        } else if let (Ok(x), false) = (value.parse::<f64>(), value.contains(',')) {
            serde_json::Number::from_f64(x)
                .map(serde_json::Value::Number)
                .unwrap_or(serde_json::Value::String(value.clone()))
        } else {
            serde_json::Value::String(value.clone())
        };
        cfg.insert(key, jv);
    }
    let doc = serde_json::json!({
        "experiment": experiment,
        "timestamp": timestamp,
        "versions": { "fraclab": env!("CARGO_PKG_VERSION") },
        "config": cfg,
    });
    std::fs::write(path, serde_json::to_string_pretty(&doc).unwrap() + "\n")?;
    Ok(())
}
