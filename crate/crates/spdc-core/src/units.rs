//! Unit conventions used throughout the crate.
//!
//! Lengths are micrometres, times femtoseconds, angular frequencies rad/fs,
//! wavevectors rad/um, temperatures degrees Celsius. With these choices every
//! quantity of interest is O(1)..O(10^4) and the speed of light is below.

use std::f64::consts::PI;

/// Speed of light in vacuum, um/fs.
pub const C_UM_PER_FS: f64 = 0.299792458;

/// Angular frequency (rad/fs) of a vacuum wavelength (um).
pub fn omega_from_lambda(lambda_um: f64) -> f64 {
    2.0 * PI * C_UM_PER_FS / lambda_um
}

/// Vacuum wavelength (um) of an angular frequency (rad/fs).
pub fn lambda_from_omega(omega: f64) -> f64 {
    2.0 * PI * C_UM_PER_FS / omega
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lambda_omega_inverse() {
        let lam = 0.8;
        assert!((lambda_from_omega(omega_from_lambda(lam)) - lam).abs() < 1e-15);
    }

    #[test]
    fn pump_omega_matches_hand_value() {
        // 2 pi c / 0.8, evaluated independently
        assert!((omega_from_lambda(0.8) - 2.3545644591360665967).abs() < 1e-12);
    }
}
