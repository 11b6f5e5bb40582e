//! Pulsed Gaussian pump model.
//!
//! The spectral amplitude is Gaussian in the two-photon detuning
//! `dw = w_s + w_i - w_pc` with an optional quadratic phase (pump chirp):
//! `exp(-dw^2 / sigma^2) exp(i beta dw^2)`. The transverse profile is a
//! Gaussian beam with waists `W_x`, `W_y`, which enters the joint amplitude
//! through `exp(-(kx^2 Wx^2 + ky^2 Wy^2) / 4)` in the summed transverse
//! momenta of the pair.

use num_complex::Complex64;
use thiserror::Error;

use crate::units::{omega_from_lambda, C_UM_PER_FS};

#[derive(Debug, Error)]
pub enum PumpError {
    #[error("{name} must be positive, got {value}")]
    NonPositive { name: &'static str, value: f64 },
}

/// Pump configuration. The spectral width is stored as the angular-frequency
/// sigma appearing in the envelope exponent.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PumpConfig {
    lambda_pc_um: f64,
    sigma_omega: f64,
    beta_fs2: f64,
    waist_x_um: f64,
    waist_y_um: f64,
}

impl PumpConfig {
    /// Build from a spectral FWHM quoted in um of wavelength. The width is
    /// converted with FWHM = 2 sqrt(2 ln 2) sigma and the first-order
    /// dispersion of omega(lambda) about the carrier:
    /// `sigma_omega = (2 pi c / lambda_pc^2) * FWHM / (2 sqrt(2 ln 2))`.
    pub fn from_fwhm_lambda(
        lambda_pc_um: f64,
        fwhm_um: f64,
        beta_fs2: f64,
        waist_x_um: f64,
        waist_y_um: f64,
    ) -> Result<Self, PumpError> {
        check_positive("fwhm_um", fwhm_um)?;
        let sigma_lambda = fwhm_um / (2.0 * (2.0 * std::f64::consts::LN_2).sqrt());
        let dw_dl = 2.0 * std::f64::consts::PI * C_UM_PER_FS / (lambda_pc_um * lambda_pc_um);
        Self::from_sigma_omega(lambda_pc_um, dw_dl * sigma_lambda, beta_fs2, waist_x_um, waist_y_um)
    }

    /// Build directly from the angular-frequency width (rad/fs).
    pub fn from_sigma_omega(
        lambda_pc_um: f64,
        sigma_omega: f64,
        beta_fs2: f64,
        waist_x_um: f64,
        waist_y_um: f64,
    ) -> Result<Self, PumpError> {
        check_positive("lambda_pc_um", lambda_pc_um)?;
        check_positive("sigma_omega", sigma_omega)?;
        check_positive("waist_x_um", waist_x_um)?;
        check_positive("waist_y_um", waist_y_um)?;
        Ok(Self {
            lambda_pc_um,
            sigma_omega,
            beta_fs2,
            waist_x_um,
            waist_y_um,
        })
    }

    pub fn lambda_pc_um(&self) -> f64 {
        self.lambda_pc_um
    }

    /// Carrier angular frequency omega_pc, rad/fs.
    pub fn omega_pc(&self) -> f64 {
        omega_from_lambda(self.lambda_pc_um)
    }

    pub fn sigma_omega(&self) -> f64 {
        self.sigma_omega
    }

    pub fn beta_fs2(&self) -> f64 {
        self.beta_fs2
    }

    pub fn waist_x_um(&self) -> f64 {
        self.waist_x_um
    }

    pub fn waist_y_um(&self) -> f64 {
        self.waist_y_um
    }

    /// Spectral envelope exp(-dw^2/sigma^2) exp(i beta dw^2) at the pair
    /// frequencies. |envelope| <= 1 with equality iff w_s + w_i = w_pc.
    pub fn envelope(&self, omega_s: f64, omega_i: f64) -> Complex64 {
        let dw = omega_s + omega_i - self.omega_pc();
        let dw2 = dw * dw;
        let mag = (-dw2 / (self.sigma_omega * self.sigma_omega)).exp();
        mag * Complex64::cis(self.beta_fs2 * dw2)
    }

    /// Transverse factor exp(-(kx^2 Wx^2 + ky^2 Wy^2)/4) where kx, ky are the
    /// summed signal+idler transverse components.
    pub fn spatial_factor(&self, kx_sum: f64, ky_sum: f64) -> f64 {
        let wx = kx_sum * self.waist_x_um;
        let wy = ky_sum * self.waist_y_um;
        (-(wx * wx + wy * wy) / 4.0).exp()
    }
}

fn check_positive(name: &'static str, value: f64) -> Result<(), PumpError> {
    if value > 0.0 {
        Ok(())
    } else {
        Err(PumpError::NonPositive { name, value })
    }
}
