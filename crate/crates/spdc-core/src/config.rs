//! TOML run configuration: parsing, defaults, validation and serialization.
//!
//! Every field is optional except `observable`; defaults reproduce the
//! standard study configuration (L = 5000 um, Wx = Wy = 100 um,
//! lambda = 0.8 um, T = 25 C, r = 0.5, FWHM = 0.01 um). The resolved form
//! (all defaults applied) is what `serialize` emits and what the output
//! manifest echoes, so a run is fully reproducible from its manifest alone.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::crystal::{solve_central_period, CrystalConfig, CrystalError};
use crate::dispersion::{DispersionError, DispersionModel};
use crate::observables::{AxisSpec, ObservableRequest};
use crate::pump::{PumpConfig, PumpError};

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("config parse error: {0}")]
    Parse(String),

    #[error("{0}")]
    Conflicting(String),

    #[error("{0}")]
    Invalid(String),

    #[error(transparent)]
    Pump(#[from] PumpError),

    #[error(transparent)]
    Crystal(#[from] CrystalError),

    #[error(transparent)]
    Dispersion(#[from] DispersionError),
}

/// Which observable a run produces.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Observable {
    Pmf,
    Joint,
    Marginal,
    Spacetime,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AxisSection {
    pub min: f64,
    pub max: f64,
    pub count: usize,
}

impl From<AxisSection> for AxisSpec {
    fn from(a: AxisSection) -> AxisSpec {
        AxisSpec::new(a.min, a.max, a.count)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PumpSection {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda_um: Option<f64>,
    /// Spectral FWHM in um of wavelength. Exactly one of this and
    /// `sigma_omega` may be given.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fwhm_um: Option<f64>,
    /// Angular-frequency width (rad/fs), overriding the FWHM conversion.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sigma_omega: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub beta_fs2: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub waist_x_um: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub waist_y_um: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CrystalSection {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub length_um: Option<f64>,
    /// Linear chirp D in rad/um^2 (the literature prints the same numbers
    /// as um^-2).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub chirp_um2: Option<f64>,
    /// Reference position as a fraction of the length. Exactly one of this
    /// and `z0_um` may be given.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub r: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub z0_um: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub temperature_c: Option<f64>,
    /// Poling period; when absent it is solved from degenerate collinear
    /// quasi-phase matching at the design temperature.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub period_um: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub design_temperature_c: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub thermal_expansion: Option<bool>,
    /// Material coefficient file; default is the built-in LiNbO3 set.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub material_file: Option<PathBuf>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RequestSection {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub omega_i: Option<AxisSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k_xs: Option<AxisSection>,
    /// Signal-frequency axis for phase-matching maps.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub omega_s: Option<AxisSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub inner_count_omega: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub inner_count_k: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub inner_halfwidth_omega: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub inner_halfwidth_k: Option<f64>,
    /// Drop the poling grating entirely (homogeneous-crystal limit of the
    /// phase-matching map).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub unpoled: Option<bool>,
    /// Marginal cut position S(omega_i | k_xs).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fixed_kxs: Option<f64>,
    /// Rectangular omega_i passband applied before normalization.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub filter_omega_i: Option<[f64; 2]>,
    /// Explicit space-time output axes (default: natural conjugate axes).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub x: Option<AxisSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t: Option<AxisSection>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub directory: Option<PathBuf>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub heatmap: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub binary_grid: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSection {
    /// Dotted path of the swept field, e.g. `crystal.chirp_um2`.
    pub parameter: String,
    pub values: Vec<f64>,
}

/// The on-disk configuration document.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigDoc {
    pub observable: Option<Observable>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pump: Option<PumpSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub crystal: Option<CrystalSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub request: Option<RequestSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub output: Option<OutputSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepSection>,
}

/// A fully validated run: resolved document plus the constructed domain
/// objects.
#[derive(Debug, Clone)]
pub struct RunConfig {
    /// Resolved document with every default applied; serializing this and
    /// parsing it back reproduces the run exactly.
    pub doc: ConfigDoc,
    pub observable: Observable,
    pub pump: PumpConfig,
    pub crystal: CrystalConfig,
    pub dispersion: DispersionModel,
    pub request: ObservableRequest,
    /// (omega_s, omega_i) axes of a phase-matching map run.
    pub pmf_axes: (AxisSpec, AxisSpec),
    pub unpoled: bool,
    pub fixed_kxs: Option<f64>,
    pub spacetime_axes: Option<(AxisSpec, AxisSpec)>,
    pub output_dir: PathBuf,
    pub heatmap: bool,
    pub binary_grid: bool,
    pub sweep: Option<SweepSection>,
}

const DEFAULT_OMEGA_AXIS: AxisSection = AxisSection { min: 0.45, max: 1.9, count: 256 };
const DEFAULT_KXS_AXIS: AxisSection = AxisSection { min: -0.6, max: 0.6, count: 256 };

/// Parse a config document and apply all defaults. Unknown keys, missing
/// required fields and unit violations are reported with the line/column
/// the TOML parser provides.
pub fn parse_config(text: &str) -> Result<RunConfig, ConfigError> {
    let doc: ConfigDoc =
        toml::from_str(text).map_err(|e| ConfigError::Parse(e.to_string()))?;
    resolve(doc)
}

pub fn parse_config_file(path: &Path) -> Result<RunConfig, ConfigError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| ConfigError::Parse(format!("cannot read {}: {e}", path.display())))?;
    parse_config(&text)
}

/// Serialize the resolved document.
pub fn serialize_config(cfg: &RunConfig) -> String {
    toml::to_string_pretty(&cfg.doc).expect("resolved config serializes")
}

fn resolve(doc: ConfigDoc) -> Result<RunConfig, ConfigError> {
    let observable = doc
        .observable
        .ok_or_else(|| ConfigError::Invalid("missing required key `observable`".into()))?;

    // -- pump --
    let p = doc.pump.clone().unwrap_or_default();
    if p.fwhm_um.is_some() && p.sigma_omega.is_some() {
        return Err(ConfigError::Conflicting(
            "give exactly one of pump.fwhm_um and pump.sigma_omega, not both".into(),
        ));
    }
    let lambda_um = p.lambda_um.unwrap_or(0.8);
    let beta_fs2 = p.beta_fs2.unwrap_or(0.0);
    let waist_x = p.waist_x_um.unwrap_or(100.0);
    let waist_y = p.waist_y_um.unwrap_or(100.0);
    let pump = match (p.fwhm_um, p.sigma_omega) {
        (None, Some(sigma)) => {
            PumpConfig::from_sigma_omega(lambda_um, sigma, beta_fs2, waist_x, waist_y)?
        }
        (fwhm, None) => PumpConfig::from_fwhm_lambda(
            lambda_um,
            fwhm.unwrap_or(0.01),
            beta_fs2,
            waist_x,
            waist_y,
        )?,
        _ => unreachable!(),
    };

    // -- crystal + material --
    let c = doc.crystal.clone().unwrap_or_default();
    if c.r.is_some() && c.z0_um.is_some() {
        return Err(ConfigError::Conflicting(
            "give exactly one of crystal.r and crystal.z0_um, not both".into(),
        ));
    }
    let dispersion = match &c.material_file {
        Some(path) => DispersionModel::from_material_file(path)?,
        None => DispersionModel::builtin_linbo3_e(),
    };
    let length_um = c.length_um.unwrap_or(5000.0);
    let chirp = c.chirp_um2.unwrap_or(0.0);
    let z0_um = match (c.r, c.z0_um) {
        (_, Some(z0)) => z0,
        (r, None) => r.unwrap_or(0.5) * length_um,
    };
    let temperature_c = c.temperature_c.unwrap_or(25.0);
    let design_temp = c.design_temperature_c.unwrap_or(25.0);
    let period_um = match c.period_um {
        Some(v) => v,
        None => solve_central_period(&dispersion, lambda_um, design_temp)?,
    };
    let thermal_expansion = c.thermal_expansion.unwrap_or(false);
    let crystal = CrystalConfig::new(
        length_um,
        chirp,
        z0_um,
        period_um,
        temperature_c,
        thermal_expansion,
    )?;

    // -- request --
    let r = doc.request.clone().unwrap_or_default();
    let omega_i = r.omega_i.unwrap_or(DEFAULT_OMEGA_AXIS);
    let k_xs = r.k_xs.unwrap_or(DEFAULT_KXS_AXIS);
    let omega_s = r.omega_s.unwrap_or(omega_i);
    let mut request = ObservableRequest::new(k_xs.into(), omega_i.into());
    request.inner_count_omega = r.inner_count_omega.unwrap_or(128);
    request.inner_count_k = r.inner_count_k.unwrap_or(128);
    request.inner_halfwidths = match (r.inner_halfwidth_omega, r.inner_halfwidth_k) {
        (Some(a), Some(b)) => Some((a, b)),
        (None, None) => None,
        _ => {
            return Err(ConfigError::Invalid(
                "inner_halfwidth_omega and inner_halfwidth_k must be given together".into(),
            ))
        }
    };
    request.filter_omega_i = r.filter_omega_i.map(|[lo, hi]| (lo, hi));
    if let Some([lo, hi]) = r.filter_omega_i {
        if !(lo < hi) {
            return Err(ConfigError::Invalid(format!(
                "filter_omega_i needs lo < hi, got [{lo}, {hi}]"
            )));
        }
    }
    for (name, ax) in [("omega_i", &omega_i), ("k_xs", &k_xs), ("omega_s", &omega_s)] {
        if !(ax.min < ax.max) || !ax.min.is_finite() || !ax.max.is_finite() {
            return Err(ConfigError::Invalid(format!(
                "request.{name} needs finite min < max"
            )));
        }
    }
    let spacetime_axes = match (r.x, r.t) {
        (Some(x), Some(t)) => Some((x.into(), t.into())),
        (None, None) => None,
        _ => {
            return Err(ConfigError::Invalid(
                "request.x and request.t must be given together".into(),
            ))
        }
    };

    // -- output --
    let o = doc.output.clone().unwrap_or_default();
    let output_dir = o.directory.clone().unwrap_or_else(|| PathBuf::from("out"));
    let heatmap = o.heatmap.unwrap_or(true);
    let binary_grid = o.binary_grid.unwrap_or(false);

    // -- sweep --
    if let Some(sweep) = &doc.sweep {
        if sweep.values.is_empty() {
            return Err(ConfigError::Invalid("sweep.values must not be empty".into()));
        }
        if sweep.values.iter().any(|v| !v.is_finite()) {
            return Err(ConfigError::Invalid("sweep.values must be finite".into()));
        }
        sweep_target(&sweep.parameter)?;
    }

    // resolved document echoes every applied default
    let resolved = ConfigDoc {
        observable: Some(observable),
        pump: Some(PumpSection {
            lambda_um: Some(lambda_um),
            fwhm_um: p.fwhm_um.or(if p.sigma_omega.is_none() { Some(0.01) } else { None }),
            sigma_omega: p.sigma_omega,
            beta_fs2: Some(beta_fs2),
            waist_x_um: Some(waist_x),
            waist_y_um: Some(waist_y),
        }),
        crystal: Some(CrystalSection {
            length_um: Some(length_um),
            chirp_um2: Some(chirp),
            r: if c.z0_um.is_some() { None } else { Some(z0_um / length_um) },
            z0_um: c.z0_um,
            temperature_c: Some(temperature_c),
            period_um: Some(period_um),
            design_temperature_c: Some(design_temp),
            thermal_expansion: Some(thermal_expansion),
            material_file: c.material_file.clone(),
        }),
        request: Some(RequestSection {
            omega_i: Some(omega_i),
            k_xs: Some(k_xs),
            omega_s: Some(omega_s),
            inner_count_omega: Some(request.inner_count_omega),
            inner_count_k: Some(request.inner_count_k),
            inner_halfwidth_omega: r.inner_halfwidth_omega,
            inner_halfwidth_k: r.inner_halfwidth_k,
            unpoled: Some(r.unpoled.unwrap_or(false)),
            fixed_kxs: r.fixed_kxs,
            filter_omega_i: r.filter_omega_i,
            x: r.x,
            t: r.t,
        }),
        output: Some(OutputSection {
            directory: Some(output_dir.clone()),
            heatmap: Some(heatmap),
            binary_grid: Some(binary_grid),
        }),
        sweep: doc.sweep.clone(),
    };

    Ok(RunConfig {
        doc: resolved,
        observable,
        pump,
        crystal,
        dispersion,
        request,
        pmf_axes: (omega_s.into(), omega_i.into()),
        unpoled: r.unpoled.unwrap_or(false),
        fixed_kxs: r.fixed_kxs,
        spacetime_axes,
        output_dir,
        heatmap,
        binary_grid,
        sweep: doc.sweep,
    })
}

/// The sweepable dotted paths. Patching goes through the serialized document
/// so any listed field stays in sync with parsing.
fn sweep_target(path: &str) -> Result<(), ConfigError> {
    const KNOWN: &[&str] = &[
        "pump.lambda_um",
        "pump.fwhm_um",
        "pump.sigma_omega",
        "pump.beta_fs2",
        "pump.waist_x_um",
        "pump.waist_y_um",
        "crystal.length_um",
        "crystal.chirp_um2",
        "crystal.r",
        "crystal.z0_um",
        "crystal.temperature_c",
        "crystal.period_um",
    ];
    if KNOWN.contains(&path) {
        Ok(())
    } else {
        Err(ConfigError::Invalid(format!(
            "unknown sweep parameter {path:?}; supported: {}",
            KNOWN.join(", ")
        )))
    }
}

/// One run configuration of a sweep: the swept field replaced by `value`,
/// the sweep section removed.
pub fn apply_sweep_value(cfg: &RunConfig, value: f64) -> Result<RunConfig, ConfigError> {
    let sweep = cfg
        .sweep
        .as_ref()
        .ok_or_else(|| ConfigError::Invalid("config has no [sweep] section".into()))?;
    let mut doc = cfg.doc.clone();
    doc.sweep = None;
    let (section, field) = sweep
        .parameter
        .split_once('.')
        .ok_or_else(|| ConfigError::Invalid("sweep parameter needs a dotted path".into()))?;
    match section {
        "pump" => {
            let p = doc.pump.as_mut().expect("resolved");
            match field {
                "lambda_um" => p.lambda_um = Some(value),
                "fwhm_um" => {
                    p.fwhm_um = Some(value);
                    p.sigma_omega = None;
                }
                "sigma_omega" => {
                    p.sigma_omega = Some(value);
                    p.fwhm_um = None;
                }
                "beta_fs2" => p.beta_fs2 = Some(value),
                "waist_x_um" => p.waist_x_um = Some(value),
                "waist_y_um" => p.waist_y_um = Some(value),
                _ => unreachable!("validated sweep path"),
            }
        }
        "crystal" => {
            let c = doc.crystal.as_mut().expect("resolved");
            match field {
                "length_um" => c.length_um = Some(value),
                "chirp_um2" => c.chirp_um2 = Some(value),
                "r" => {
                    c.r = Some(value);
                    c.z0_um = None;
                }
                "z0_um" => {
                    c.z0_um = Some(value);
                    c.r = None;
                }
                "temperature_c" => c.temperature_c = Some(value),
                "period_um" => c.period_um = Some(value),
                _ => unreachable!("validated sweep path"),
            }
        }
        _ => unreachable!("validated sweep path"),
    }
    resolve(doc)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_config_applies_defaults() {
        let cfg = parse_config("observable = \"joint\"\n").unwrap();
        assert_eq!(cfg.observable, Observable::Joint);
        assert_eq!(cfg.crystal.length_um(), 5000.0);
        assert_eq!(cfg.crystal.temperature_c(), 25.0);
        assert!((cfg.crystal.r() - 0.5).abs() < 1e-12);
        assert_eq!(cfg.pump.lambda_pc_um(), 0.8);
        assert_eq!(cfg.pump.waist_x_um(), 100.0);
        // period solved from degenerate QPM at the design temperature
        assert!((cfg.crystal.period_um() - 20.334562860910281544).abs() < 1e-9);
        assert_eq!(cfg.request.inner_count_omega, 128);
    }

    #[test]
    fn fwhm_and_sigma_are_mutually_exclusive() {
        let err = parse_config(
            "observable = \"joint\"\n[pump]\nfwhm_um = 0.01\nsigma_omega = 0.0125\n",
        )
        .unwrap_err();
        assert!(matches!(err, ConfigError::Conflicting(_)));
    }

    #[test]
    fn unknown_keys_are_parse_errors_with_location() {
        let err = parse_config("observable = \"joint\"\n[pump]\nwaists = 100.0\n").unwrap_err();
        let msg = format!("{err}");
        assert!(msg.contains("waists"), "{msg}");
        assert!(msg.contains("line 3"), "{msg}");
    }

    #[test]
    fn missing_observable_is_an_error() {
        let err = parse_config("[pump]\nfwhm_um = 0.01\n").unwrap_err();
        assert!(format!("{err}").contains("observable"));
    }

    #[test]
    fn study_panel_config_resolves() {
        // D = 2e-6 um^-2, L = 5000 um, FWHM = 0.01 um
        let cfg = parse_config(
            "observable = \"joint\"\n\
             [pump]\nfwhm_um = 0.01\n\
             [crystal]\nchirp_um2 = 2e-6\nlength_um = 5000.0\n",
        )
        .unwrap();
        assert!((cfg.crystal.chirp_strength() - 50.0).abs() < 1e-9);
        assert!((cfg.pump.sigma_omega() - 0.0125).abs() < 1e-4);
    }

    #[test]
    fn round_trip_preserves_the_resolved_document() {
        let cfg = parse_config(
            "observable = \"spacetime\"\n\
             [pump]\nfwhm_um = 0.001\nbeta_fs2 = 1e5\n\
             [crystal]\nchirp_um2 = -5e-6\ntemperature_c = 230.0\n\
             [request]\nomega_i = { min = 0.8, max = 1.6, count = 64 }\n\
             [output]\nheatmap = false\n",
        )
        .unwrap();
        let text = serialize_config(&cfg);
        let back = parse_config(&text).unwrap();
        assert_eq!(cfg.doc, back.doc);
    }

    #[test]
    fn sweep_paths_are_validated() {
        let err = parse_config(
            "observable = \"joint\"\n[sweep]\nparameter = \"crystal.bogus\"\nvalues = [1.0]\n",
        )
        .unwrap_err();
        assert!(format!("{err}").contains("unknown sweep parameter"));
        let cfg = parse_config(
            "observable = \"joint\"\n[sweep]\nparameter = \"crystal.chirp_um2\"\nvalues = [0.0, 2e-6]\n",
        )
        .unwrap();
        let first = apply_sweep_value(&cfg, 2e-6).unwrap();
        assert!((first.crystal.chirp_strength() - 50.0).abs() < 1e-9);
        assert!(first.sweep.is_none());
    }

    #[test]
    fn exclusive_r_and_z0() {
        let err = parse_config("observable = \"joint\"\n[crystal]\nr = 0.5\nz0_um = 2500.0\n")
            .unwrap_err();
        assert!(matches!(err, ConfigError::Conflicting(_)));
    }
}
