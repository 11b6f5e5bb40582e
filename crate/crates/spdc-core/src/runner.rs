//! Run driver: builds the evaluation context from a config, computes the
//! requested observable, and writes the manifest plus data files. Output
//! bytes are deterministic for a fixed config and independent of the worker
//! count (grid cells are computed independently and assembled by index).

use std::path::{Path, PathBuf};

use serde::Serialize;
use thiserror::Error;

use crate::biphoton::JafContext;
use crate::config::{apply_sweep_value, serialize_config, Observable, RunConfig};
use crate::mathkit::MathError;
use crate::observables::{
    extract_widths, joint_spectrum, marginal_cut, marginal_spectrum, spacetime_map,
    spacetime_map_onto, AxisSpec, JointSpectrum, ObservableError,
};
use crate::output::{
    grid_to_binary, grid_to_text, heatmap_pgm, heatmap_pgm_complex, marginal_to_text,
    write_bytes, write_text, OutputError,
};

#[derive(Debug, Error)]
pub enum RunError {
    #[error(transparent)]
    Config(#[from] crate::config::ConfigError),

    #[error(transparent)]
    Biphoton(#[from] crate::biphoton::BiphotonError),

    #[error(transparent)]
    Observable(#[from] ObservableError),

    #[error(transparent)]
    Output(#[from] OutputError),

    #[error(transparent)]
    Math(#[from] MathError),
}

/// Non-config knobs from the command line.
#[derive(Debug, Clone, Default)]
pub struct RunOverrides {
    pub output_dir: Option<PathBuf>,
    pub no_heatmap: bool,
}

/// What a run produced.
#[derive(Debug)]
pub struct RunOutcome {
    pub directory: PathBuf,
    pub files: Vec<PathBuf>,
    pub warnings: Vec<String>,
}

#[derive(Debug, Serialize)]
struct Manifest {
    tool: ToolInfo,
    /// Full resolved configuration; parsing this TOML reproduces the run.
    config_echo: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    integration: Option<IntegrationInfo>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    warnings: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    widths: Option<WidthInfo>,
}

#[derive(Debug, Serialize)]
struct ToolInfo {
    name: &'static str,
    version: &'static str,
    grid_format: &'static str,
}

#[derive(Debug, Serialize)]
struct IntegrationInfo {
    inner_halfwidth_omega: f64,
    inner_halfwidth_k: f64,
    inner_clipped: bool,
    outer_clipped: bool,
}

#[derive(Debug, Serialize)]
struct WidthInfo {
    delta_x_um: f64,
    delta_t_fs: f64,
    zoomed: bool,
}

/// Execute a single (non-sweep) run into its output directory.
pub fn run(cfg: &RunConfig, overrides: &RunOverrides) -> Result<RunOutcome, RunError> {
    let dir = overrides
        .output_dir
        .clone()
        .unwrap_or_else(|| cfg.output_dir.clone());
    std::fs::create_dir_all(&dir).map_err(|e| OutputError::Io {
        path: dir.display().to_string(),
        source: e,
    })?;
    let heatmap = cfg.heatmap && !overrides.no_heatmap;

    let ctx = JafContext::new(cfg.pump, cfg.crystal.clone(), cfg.dispersion.clone())?;
    let mut files = Vec::new();
    let mut warnings = Vec::new();
    let mut integration = None;
    let mut widths = None;

    match cfg.observable {
        Observable::Pmf => {
            let (ws, wi) = cfg.pmf_axes;
            let map = ctx.pmf_map(
                axis(ws, "omega_s", "rad/fs")?,
                axis(wi, "omega_i", "rad/fs")?,
                cfg.unpoled,
            )?;
            files.push(write_grid(&dir, "pmf", &map, cfg.binary_grid)?);
            if heatmap {
                let path = dir.join("pmf.pgm");
                write_bytes(&path, &heatmap_pgm(&map))?;
                files.push(path);
            }
        }
        Observable::Joint => {
            let joint = compute_joint(&ctx, cfg, &mut warnings, &mut integration)?;
            files.push(write_grid(&dir, "joint", &joint.grid, cfg.binary_grid)?);
            if heatmap {
                let path = dir.join("joint.pgm");
                write_bytes(&path, &heatmap_pgm(&joint.grid))?;
                files.push(path);
            }
        }
        Observable::Marginal => {
            let joint = compute_joint(&ctx, cfg, &mut warnings, &mut integration)?;
            files.push(write_grid(&dir, "joint", &joint.grid, cfg.binary_grid)?);
            let s = marginal_spectrum(&joint.grid)?;
            let path = dir.join("marginal.dat");
            write_text(&path, &marginal_to_text(&s))?;
            files.push(path);
            if let Some(k_xs) = cfg.fixed_kxs {
                let cut = marginal_cut(&joint.grid, k_xs)?;
                let path = dir.join("marginal_cut.dat");
                write_text(&path, &marginal_to_text(&cut))?;
                files.push(path);
            }
        }
        Observable::Spacetime => {
            let joint = compute_joint(&ctx, cfg, &mut warnings, &mut integration)?;
            files.push(write_grid(&dir, "joint", &joint.grid, cfg.binary_grid)?);
            let map = match cfg.spacetime_axes {
                Some((x, t)) => spacetime_map_onto(&joint.grid, x, t)?,
                None => spacetime_map(&joint.grid),
            };
            files.push(write_grid(&dir, "spacetime", &map, cfg.binary_grid)?);
            if heatmap {
                let path = dir.join("spacetime.pgm");
                write_bytes(&path, &heatmap_pgm_complex(&map))?;
                files.push(path);
            }
            match resolve_widths(&joint, &map) {
                Ok(info) => widths = Some(info),
                Err(e) => warnings.push(format!("width extraction failed: {e}")),
            }
        }
    }

    let manifest = Manifest {
        tool: ToolInfo {
            name: "spdc",
            version: env!("CARGO_PKG_VERSION"),
            grid_format: "spdc grid format v1",
        },
        config_echo: serialize_config(cfg),
        integration,
        warnings: warnings.clone(),
        widths,
    };
    let path = dir.join("manifest.toml");
    write_text(
        &path,
        &toml::to_string_pretty(&manifest).expect("manifest serializes"),
    )?;
    files.push(path);

    Ok(RunOutcome {
        directory: dir,
        files,
        warnings,
    })
}

/// Fan a sweep out into zero-padded subdirectories, one full run each.
pub fn sweep(cfg: &RunConfig, overrides: &RunOverrides) -> Result<Vec<RunOutcome>, RunError> {
    let sweep = cfg
        .sweep
        .clone()
        .ok_or_else(|| crate::config::ConfigError::Invalid("config has no [sweep] section".into()))?;
    let base = overrides
        .output_dir
        .clone()
        .unwrap_or_else(|| cfg.output_dir.clone());
    let mut outcomes = Vec::new();
    for (idx, value) in sweep.values.iter().enumerate() {
        let sub = base.join(format!("sweep_{idx:03}"));
        let run_cfg = apply_sweep_value(cfg, *value)?;
        let sub_overrides = RunOverrides {
            output_dir: Some(sub),
            no_heatmap: overrides.no_heatmap,
        };
        outcomes.push(run(&run_cfg, &sub_overrides)?);
    }
    Ok(outcomes)
}

fn compute_joint(
    ctx: &JafContext,
    cfg: &RunConfig,
    warnings: &mut Vec<String>,
    integration: &mut Option<IntegrationInfo>,
) -> Result<JointSpectrum, RunError> {
    let joint = joint_spectrum(ctx, &cfg.request)?;
    if joint.inner_clipped {
        warnings.push(
            "inner integration window clips the integrand (boundary > 1e-3 of interior max)"
                .into(),
        );
    }
    if joint.outer_clipped {
        warnings.push("outer grid clips the spectrum (boundary > 1e-3 of max)".into());
    }
    *integration = Some(IntegrationInfo {
        inner_halfwidth_omega: joint.delta_halfwidth,
        inner_halfwidth_k: joint.kappa_halfwidth,
        inner_clipped: joint.inner_clipped,
        outer_clipped: joint.outer_clipped,
    });
    Ok(joint)
}

/// FWHM widths of |FJ|; when the peak is under-resolved on the natural axes
/// the transform is re-evaluated directly on a zoomed window.
fn resolve_widths(
    joint: &JointSpectrum,
    natural: &crate::mathkit::ComplexGrid2D,
) -> Result<WidthInfo, ObservableError> {
    let mag = natural.map(|v| v.norm());
    let mut zoomed = false;
    let mut result = extract_widths(&mag);
    let mut halfwidths = match &result {
        Ok((wx, wt)) => (*wx, *wt),
        Err(_) => (mag.axis1.step() * 4.0, mag.axis2.step() * 4.0),
    };
    for _ in 0..3 {
        let resolved_x = halfwidths.0 / mag.axis1.step() >= 8.0;
        let resolved_t = halfwidths.1 / mag.axis2.step() >= 8.0;
        if result.is_ok() && resolved_x && resolved_t && !result_needs_zoom(&result) {
            break;
        }
        zoomed = true;
        let x = AxisSpec::new(-4.0 * halfwidths.0, 4.0 * halfwidths.0, 257);
        let t = AxisSpec::new(-4.0 * halfwidths.1, 4.0 * halfwidths.1, 257);
        let zoom = spacetime_map_onto(&joint.grid, x, t)?;
        let zmag = zoom.map(|v| v.norm());
        result = extract_widths(&zmag);
        if let Ok((wx, wt)) = &result {
            halfwidths = (*wx, *wt);
        } else {
            // widen and retry
            halfwidths = (halfwidths.0 * 8.0, halfwidths.1 * 8.0);
        }
    }
    let (wx, wt) = result?;
    Ok(WidthInfo {
        delta_x_um: wx,
        delta_t_fs: wt,
        zoomed,
    })
}

fn result_needs_zoom(result: &Result<(f64, f64), ObservableError>) -> bool {
    result.is_err()
}

fn axis(spec: AxisSpec, name: &str, unit: &str) -> Result<crate::mathkit::Axis, MathError> {
    crate::mathkit::Axis::new(name, unit, spec.min, spec.max, spec.count)
}

fn write_grid<T: crate::output::GridValue>(
    dir: &Path,
    stem: &str,
    grid: &crate::mathkit::Grid2D<T>,
    binary: bool,
) -> Result<PathBuf, OutputError> {
    if binary {
        let path = dir.join(format!("{stem}.gridbin"));
        write_bytes(&path, &grid_to_binary(grid))?;
        Ok(path)
    } else {
        let path = dir.join(format!("{stem}.grid"));
        write_text(&path, &grid_to_text(grid))?;
        Ok(path)
    }
}
