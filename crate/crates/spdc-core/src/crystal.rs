//! Linearly chirped quasi-phase-matched grating model.
//!
//! The poling grating has local spatial frequency
//!
//! ```text
//! K(z) = K0 + D (z0 + z),        K0 = 2 pi / Lambda_c
//! ```
//!
//! over the crystal span `[-L, 0]`. Only the lowest Fourier order of the
//! domain-reversal pattern is kept; the chirp is quantified by the
//! dimensionless strength `xi = D L^2`. `D` is interpreted in rad/um^2 (the
//! literature often prints the same numbers as um^-2).

use thiserror::Error;

use crate::dispersion::{DispersionError, DispersionModel};
use crate::units::omega_from_lambda;

/// Linear thermal expansion of the poling period along the grating axis,
/// per deg C, applied as `Lambda(T) = Lambda_c (1 + alpha (T - 25))` when
/// the optional expansion correction is enabled.
pub const POLING_EXPANSION_PER_C: f64 = 1.54e-5;

#[derive(Debug, Error)]
pub enum CrystalError {
    #[error("crystal length must be positive, got {0} um")]
    NonPositiveLength(f64),

    #[error("poling period must be positive, got {0} um")]
    NonPositivePeriod(f64),

    #[error("local spatial frequency becomes non-positive at z = {z} um (K = {k} rad/um)")]
    NonPositiveGrating { z: f64, k: f64 },

    #[error("position {z} um is outside the crystal [{a}, {b}] um")]
    OutsideCrystal { z: f64, a: f64, b: f64 },

    #[error("quasi-phase matching infeasible: collinear degenerate mismatch {mismatch} rad/um is not positive")]
    Infeasible { mismatch: f64 },

    #[error(transparent)]
    Dispersion(#[from] DispersionError),
}

/// Chirped-grating configuration. Immutable once constructed; the crystal
/// occupies `[-L, 0]`.
#[derive(Debug, Clone, PartialEq)]
pub struct CrystalConfig {
    length_um: f64,
    chirp_rad_um2: f64,
    z0_um: f64,
    period_um: f64,
    temperature_c: f64,
    thermal_expansion: bool,
}

impl CrystalConfig {
    pub fn new(
        length_um: f64,
        chirp_rad_um2: f64,
        z0_um: f64,
        period_um: f64,
        temperature_c: f64,
        thermal_expansion: bool,
    ) -> Result<Self, CrystalError> {
        if !(length_um > 0.0) {
            return Err(CrystalError::NonPositiveLength(length_um));
        }
        if !(period_um > 0.0) {
            return Err(CrystalError::NonPositivePeriod(period_um));
        }
        let cfg = Self {
            length_um,
            chirp_rad_um2,
            z0_um,
            period_um,
            temperature_c,
            thermal_expansion,
        };
        // K(z) is affine in z, so checking both ends covers the interior.
        for z in [cfg.boundary_a(), 0.0] {
            let k = cfg.k0() + chirp_rad_um2 * (z0_um + z);
            if !(k > 0.0) {
                return Err(CrystalError::NonPositiveGrating { z, k });
            }
        }
        Ok(cfg)
    }

    pub fn length_um(&self) -> f64 {
        self.length_um
    }

    pub fn chirp_rad_um2(&self) -> f64 {
        self.chirp_rad_um2
    }

    pub fn z0_um(&self) -> f64 {
        self.z0_um
    }

    /// z0 as a fraction of the crystal length.
    pub fn r(&self) -> f64 {
        self.z0_um / self.length_um
    }

    pub fn temperature_c(&self) -> f64 {
        self.temperature_c
    }

    pub fn thermal_expansion(&self) -> bool {
        self.thermal_expansion
    }

    /// Nominal poling period at the design temperature.
    pub fn period_um(&self) -> f64 {
        self.period_um
    }

    /// Poling period at the operating temperature (linear expansion applied
    /// only when the correction is enabled).
    pub fn effective_period_um(&self) -> f64 {
        if self.thermal_expansion {
            self.period_um * (1.0 + POLING_EXPANSION_PER_C * (self.temperature_c - 25.0))
        } else {
            self.period_um
        }
    }

    /// Upstream crystal boundary A; the crystal spans [A, A + L] = [-L, 0].
    pub fn boundary_a(&self) -> f64 {
        -self.length_um
    }

    /// Central grating frequency K0 = 2 pi / Lambda_c, rad/um.
    pub fn k0(&self) -> f64 {
        2.0 * std::f64::consts::PI / self.effective_period_um()
    }

    /// Local grating frequency K(z) = K0 + D (z0 + z) for z inside the
    /// crystal.
    pub fn local_spatial_frequency(&self, z_um: f64) -> Result<f64, CrystalError> {
        let a = self.boundary_a();
        if !(z_um >= a && z_um <= a + self.length_um) {
            return Err(CrystalError::OutsideCrystal {
                z: z_um,
                a,
                b: a + self.length_um,
            });
        }
        Ok(self.k0() + self.chirp_rad_um2 * (self.z0_um + z_um))
    }

    /// Dimensionless chirp strength xi = D L^2.
    pub fn chirp_strength(&self) -> f64 {
        self.chirp_rad_um2 * self.length_um * self.length_um
    }
}

/// Poling period that zeroes the collinear degenerate type-0 mismatch at
/// first poling order: Lambda_c = 2 pi / (k_p(w_p) - 2 k(w_p / 2)).
pub fn solve_central_period(
    dispersion: &DispersionModel,
    pump_lambda_um: f64,
    temp_c: f64,
) -> Result<f64, CrystalError> {
    let omega_p = omega_from_lambda(pump_lambda_um);
    let k_p = dispersion.wavevector_magnitude(omega_p, temp_c)?;
    let k_half = dispersion.wavevector_magnitude(omega_p / 2.0, temp_c)?;
    let mismatch = k_p - 2.0 * k_half;
    if !(mismatch > 0.0) {
        return Err(CrystalError::Infeasible { mismatch });
    }
    Ok(2.0 * std::f64::consts::PI / mismatch)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(d: f64) -> CrystalConfig {
        CrystalConfig::new(5000.0, d, 2500.0, 20.33, 25.0, false).unwrap()
    }

    #[test]
    fn grating_frequency_at_minus_z0_is_k0() {
        let c = cfg(2e-6);
        let k = c.local_spatial_frequency(-2500.0).unwrap();
        assert_eq!(k, c.k0());
    }

    #[test]
    fn unchirped_grating_is_constant() {
        let c = cfg(0.0);
        for z in [-5000.0, -3200.0, -1.0, 0.0] {
            assert_eq!(c.local_spatial_frequency(z).unwrap(), c.k0());
        }
    }

    #[test]
    fn grating_frequency_matches_hand_value() {
        // K0 + D z0 = 2 pi / 20.33 + 2e-6 * 2500, frozen independently
        let c = cfg(2e-6);
        let k = c.local_spatial_frequency(0.0).unwrap();
        assert!((k - 0.31405977900539038253).abs() < 1e-14);
    }

    #[test]
    fn positions_outside_crystal_are_rejected() {
        let c = cfg(2e-6);
        assert!(matches!(
            c.local_spatial_frequency(1.0),
            Err(CrystalError::OutsideCrystal { .. })
        ));
        assert!(matches!(
            c.local_spatial_frequency(-5001.0),
            Err(CrystalError::OutsideCrystal { .. })
        ));
    }

    #[test]
    fn grating_frequency_is_affine() {
        use rand::{Rng, SeedableRng};
        let c = cfg(-5e-6);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for _ in 0..200 {
            let z1 = rng.gen_range(-5000.0..0.0);
            let z2 = rng.gen_range(-5000.0..0.0);
            let lhs = c.local_spatial_frequency(z1).unwrap() + c.local_spatial_frequency(z2).unwrap();
            let rhs = 2.0 * c.local_spatial_frequency(0.5 * (z1 + z2)).unwrap();
            assert!((lhs - rhs).abs() <= 1e-12 * rhs.abs());
        }
    }

    #[test]
    fn chirp_strength_examples() {
        assert_eq!(cfg(0.0).chirp_strength(), 0.0);
        assert!((cfg(2e-6).chirp_strength() - 50.0).abs() < 1e-9);
        assert!((cfg(-5e-6).chirp_strength() + 125.0).abs() < 1e-9);
    }

    #[test]
    fn negative_local_period_is_rejected() {
        // Strong negative chirp drives K(z) through zero inside the crystal:
        // K(0) = 2 pi / 20.33 - 2e-4 * 2500 < 0.
        assert!(matches!(
            CrystalConfig::new(5000.0, -2e-4, 2500.0, 20.33, 25.0, false),
            Err(CrystalError::NonPositiveGrating { .. })
        ));
    }

    #[test]
    fn central_period_at_room_temperature() {
        // Frozen from an independent evaluation of the shipped coefficients.
        let disp = DispersionModel::builtin_linbo3_e();
        let lc = solve_central_period(&disp, 0.8, 25.0).unwrap();
        assert!((lc - 20.334562860910281544).abs() < 1e-9);
    }

    #[test]
    fn central_period_at_oven_temperature() {
        let disp = DispersionModel::builtin_linbo3_e();
        let lc = solve_central_period(&disp, 0.8, 230.0).unwrap();
        assert!((lc - 19.469807670222502001).abs() < 1e-9);
    }

    #[test]
    fn solved_period_zeroes_the_mismatch() {
        let disp = DispersionModel::builtin_linbo3_e();
        let lc = solve_central_period(&disp, 0.8, 25.0).unwrap();
        let omega_p = omega_from_lambda(0.8);
        let dk = disp.wavevector_magnitude(omega_p, 25.0).unwrap()
            - 2.0 * disp.wavevector_magnitude(omega_p / 2.0, 25.0).unwrap()
            - 2.0 * std::f64::consts::PI / lc;
        assert!(dk.abs() < 1e-10);
    }

    #[test]
    fn dispersionless_medium_cannot_phase_match() {
        let text = "name = stub\na1 = 4.0\na2 = 0.0\na3 = 0.5\na4 = 0.0\na5 = 11.0\na6 = 0.0\n\
                    b1 = 0.0\nb2 = 0.0\nb3 = 0.0\nb4 = 0.0\nt0 = 24.5\nt1 = 570.82\n\
                    lambda_min_um = 0.1\nlambda_max_um = 10.0\ntemp_min_c = 0.0\ntemp_max_c = 300.0\n";
        let disp = DispersionModel::from_material_str(text).unwrap();
        assert!(matches!(
            solve_central_period(&disp, 0.8, 25.0),
            Err(CrystalError::Infeasible { .. })
        ));
    }

    #[test]
    fn thermal_expansion_correction_is_optional() {
        let base = CrystalConfig::new(5000.0, 0.0, 2500.0, 20.33, 230.0, false).unwrap();
        assert_eq!(base.effective_period_um(), 20.33);
        let expanded = CrystalConfig::new(5000.0, 0.0, 2500.0, 20.33, 230.0, true).unwrap();
        let want = 20.33 * (1.0 + POLING_EXPANSION_PER_C * 205.0);
        assert!((expanded.effective_period_um() - want).abs() < 1e-12);
    }
}
