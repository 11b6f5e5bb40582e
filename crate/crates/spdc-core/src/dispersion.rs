//! Temperature-dependent extraordinary refractive index and the wavevector
//! kinematics built on it.
//!
//! The index follows a Sellmeier form with an auxiliary quadratic temperature
//! function,
//!
//! ```text
//! n_e^2 = a1 + b1 f + (a2 + b2 f)/(l^2 - (a3 + b3 f)^2)
//!       + (a4 + b4 f)/(l^2 - a5^2) - a6 l^2,      f = (T - t0)(T + t1)
//! ```
//!
//! with `l` the vacuum wavelength in um and `T` in deg C. Coefficients are
//! data, not code: they are read from a material file (see `data/linbo3_e.mat`
//! for the congruent LiNbO3 set shipped with the crate), so other extraordinary
//! axes can be swapped in without touching the engine.

use thiserror::Error;

use crate::units::{lambda_from_omega, C_UM_PER_FS};

/// Errors from dispersion evaluation and material-file parsing.
#[derive(Debug, Error)]
pub enum DispersionError {
    #[error("wavelength {lambda_um} um is outside the material validity range [{min}, {max}] um")]
    WavelengthOutOfRange { lambda_um: f64, min: f64, max: f64 },

    #[error("temperature {temp_c} C is outside the material validity range [{min}, {max}] C")]
    TemperatureOutOfRange { temp_c: f64, min: f64, max: f64 },

    #[error("mode with omega {omega} rad/fs, |k_t| {kt} rad/um is evanescent (|k| = {k} rad/um)")]
    Evanescent { omega: f64, kt: f64, k: f64 },

    #[error("photon mode must have positive frequency, got {omega} rad/fs")]
    NonPositiveFrequency { omega: f64 },

    #[error("material file line {line}: {message}")]
    MaterialFile { line: usize, message: String },
}

/// One down-converted photon: angular frequency (rad/fs) and transverse
/// momentum components (rad/um).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhotonMode {
    pub omega: f64,
    pub kx: f64,
    pub ky: f64,
}

impl PhotonMode {
    pub fn new(omega: f64, kx: f64, ky: f64) -> Result<Self, DispersionError> {
        if !(omega > 0.0) {
            return Err(DispersionError::NonPositiveFrequency { omega });
        }
        Ok(Self { omega, kx, ky })
    }

    /// Collinear mode (no transverse momentum).
    pub fn collinear(omega: f64) -> Result<Self, DispersionError> {
        Self::new(omega, 0.0, 0.0)
    }
}

/// Sellmeier coefficient set with temperature map and validity ranges.
#[derive(Debug, Clone, PartialEq)]
pub struct DispersionModel {
    pub name: String,
    a: [f64; 6],
    b: [f64; 4],
    t0: f64,
    t1: f64,
    pub lambda_range_um: (f64, f64),
    pub temp_range_c: (f64, f64),
}

const BUILTIN_LINBO3_E: &str = include_str!("../data/linbo3_e.mat");

impl DispersionModel {
    /// The congruent LiNbO3 extraordinary-index set shipped with the crate.
    pub fn builtin_linbo3_e() -> Self {
        Self::from_material_str(BUILTIN_LINBO3_E)
            .expect("built-in material file must parse")
    }

    /// Parse a material coefficient file (`key = value` lines, `#` comments).
    pub fn from_material_str(text: &str) -> Result<Self, DispersionError> {
        let mut name = String::new();
        let mut vals = std::collections::HashMap::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let body = raw.split('#').next().unwrap_or("").trim();
            if body.is_empty() {
                continue;
            }
            let (key, value) = body.split_once('=').ok_or(DispersionError::MaterialFile {
                line,
                message: format!("expected `key = value`, got {body:?}"),
            })?;
            let key = key.trim();
            let value = value.trim();
            if key == "name" {
                name = value.to_string();
                continue;
            }
            let parsed: f64 = value.parse().map_err(|e| DispersionError::MaterialFile {
                line,
                message: format!("bad number {value:?} for key {key:?}: {e}"),
            })?;
            if vals.insert(key.to_string(), parsed).is_some() {
                return Err(DispersionError::MaterialFile {
                    line,
                    message: format!("duplicate key {key:?}"),
                });
            }
        }
        let mut get = |k: &str| {
            vals.remove(k).ok_or(DispersionError::MaterialFile {
                line: 0,
                message: format!("missing key {k:?}"),
            })
        };
        let model = Self {
            name,
            a: [
                get("a1")?, get("a2")?, get("a3")?, get("a4")?, get("a5")?, get("a6")?,
            ],
            b: [get("b1")?, get("b2")?, get("b3")?, get("b4")?],
            t0: get("t0")?,
            t1: get("t1")?,
            lambda_range_um: (get("lambda_min_um")?, get("lambda_max_um")?),
            temp_range_c: (get("temp_min_c")?, get("temp_max_c")?),
        };
        if let Some(k) = vals.keys().next() {
            return Err(DispersionError::MaterialFile {
                line: 0,
                message: format!("unknown key {k:?}"),
            });
        }
        Ok(model)
    }

    pub fn from_material_file(path: &std::path::Path) -> Result<Self, DispersionError> {
        let text = std::fs::read_to_string(path).map_err(|e| DispersionError::MaterialFile {
            line: 0,
            message: format!("cannot read {}: {e}", path.display()),
        })?;
        Self::from_material_str(&text)
    }

    fn check_range(&self, lambda_um: f64, temp_c: f64) -> Result<(), DispersionError> {
        let (lmin, lmax) = self.lambda_range_um;
        if !(lambda_um >= lmin && lambda_um <= lmax) {
            return Err(DispersionError::WavelengthOutOfRange {
                lambda_um,
                min: lmin,
                max: lmax,
            });
        }
        let (tmin, tmax) = self.temp_range_c;
        if !(temp_c >= tmin && temp_c <= tmax) {
            return Err(DispersionError::TemperatureOutOfRange {
                temp_c,
                min: tmin,
                max: tmax,
            });
        }
        Ok(())
    }

    /// Extraordinary refractive index n_e(lambda, T). Pure; deterministic.
    pub fn refractive_index(&self, lambda_um: f64, temp_c: f64) -> Result<f64, DispersionError> {
        self.check_range(lambda_um, temp_c)?;
        Ok(self.index_unchecked(lambda_um, temp_c))
    }

    #[inline]
    pub(crate) fn index_unchecked(&self, lambda_um: f64, temp_c: f64) -> f64 {
        let [a1, a2, a3, a4, a5, a6] = self.a;
        let [b1, b2, b3, b4] = self.b;
        let f = (temp_c - self.t0) * (temp_c + self.t1);
        let l2 = lambda_um * lambda_um;
        let pole1 = a3 + b3 * f;
        let n2 = a1 + b1 * f + (a2 + b2 * f) / (l2 - pole1 * pole1) + (a4 + b4 * f) / (l2 - a5 * a5)
            - a6 * l2;
        n2.sqrt()
    }

    /// Wavevector magnitude |k| = n_e(lambda, T) omega / c in rad/um.
    pub fn wavevector_magnitude(&self, omega: f64, temp_c: f64) -> Result<f64, DispersionError> {
        let lambda = lambda_from_omega(omega);
        Ok(self.refractive_index(lambda, temp_c)? * omega / C_UM_PER_FS)
    }

    /// Forward longitudinal component sqrt(|k|^2 - kx^2 - ky^2) of a
    /// propagating mode. Evanescent modes (negative radicand) are an error;
    /// amplitude-level callers treat them as forbidden kinematics instead.
    pub fn longitudinal_k(&self, mode: &PhotonMode, temp_c: f64) -> Result<f64, DispersionError> {
        let k = self.wavevector_magnitude(mode.omega, temp_c)?;
        let kt2 = mode.kx * mode.kx + mode.ky * mode.ky;
        let rad = k * k - kt2;
        if rad <= 0.0 {
            return Err(DispersionError::Evanescent {
                omega: mode.omega,
                kt: kt2.sqrt(),
                k,
            });
        }
        Ok(rad.sqrt())
    }
}
