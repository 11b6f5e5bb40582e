//! Closed-form two-photon joint amplitude of a chirped quasi-phase-matched
//! crystal, plus the brute-force longitudinal integral it must agree with.
//!
//! With the crystal on `[-L, 0]`, the longitudinal response of the m = 1
//! poling order is
//!
//! ```text
//! I = int_{-L}^{0} dz exp(i [ (dk - D z0) z - D z^2 ]),    dk = x_t / L
//! ```
//!
//! which evaluates in closed form to an error-function difference. In the
//! dimensionless variables `xi = D L^2`, `r = z0 / L`, `rho = -x_t + r xi`
//! and with `w = sqrt(i xi)` (principal branch),
//!
//! ```text
//! Q(x_t) = e^{i pi/4} / (2 w) * exp(i rho^2 / (4 xi))
//!          * ( erf(w rho / (2 xi)) - erf(w (rho - 2 xi) / (2 xi)) )
//!        = e^{i pi/4} I / (sqrt(pi) L)
//! ```
//!
//! For positive chirp `w = e^{i pi/4} sqrt(xi)` and this is literally the
//! printed closed form with principal roots; expressing both occurrences of
//! `sqrt(xi)` through `w` keeps the expression equal to the integral for
//! negative chirp as well (the principal roots taken independently would flip
//! its global sign there, which the squared modulus never sees). As the chirp
//! vanishes the response reduces to the unchirped grating,
//! `Q -> e^{i pi/4} / sqrt(pi) * e^{-i x_t / 2} sinc(x_t / 2)`, which is used
//! below `|xi| = 1e-6` where the erf difference becomes 0/0.
//!
//! The full amplitude is `f = A Q(x_t) envelope(w_s, w_i) spatial(kx, ky)`
//! where `A` absorbs every fixed prefactor; observables normalize it away.

use num_complex::Complex64;
use thiserror::Error;

use crate::crystal::CrystalConfig;
use crate::dispersion::{DispersionError, DispersionModel, PhotonMode};
use crate::mathkit::{cerf_unbounded, Axis, Grid2D, MathError, RealGrid2D};
use crate::pump::PumpConfig;
use crate::units::lambda_from_omega;

/// Below this |xi| the grating response switches to the analytic unchirped
/// (sinc) form; the erf difference is a removable 0/0 there.
pub const XI_SWITCH: f64 = 1e-6;

const SQRT_PI: f64 = 1.772_453_850_905_516;

#[derive(Debug, Error)]
pub enum BiphotonError {
    #[error("forbidden kinematics: {0}")]
    Forbidden(DispersionError),

    #[error(transparent)]
    Dispersion(#[from] DispersionError),

    #[error(transparent)]
    Math(#[from] MathError),
}

/// Immutable evaluation context: pump, crystal, dispersion and the complex
/// constant absorbing all fixed prefactors of the amplitude.
#[derive(Debug, Clone)]
pub struct JafContext {
    pub pump: PumpConfig,
    pub crystal: CrystalConfig,
    pub dispersion: DispersionModel,
    pub amplitude_scale: Complex64,
}

impl JafContext {
    /// Build a context with the default amplitude scale
    /// `(-1)^{3/4} (2i/pi) pi^{3/2} Wx Wy L` (unit field amplitude). The pump
    /// carrier and its degenerate half-frequency must lie inside the
    /// dispersion validity range at the crystal temperature.
    pub fn new(
        pump: PumpConfig,
        crystal: CrystalConfig,
        dispersion: DispersionModel,
    ) -> Result<Self, BiphotonError> {
        let temp = crystal.temperature_c();
        dispersion.refractive_index(pump.lambda_pc_um(), temp)?;
        dispersion.refractive_index(2.0 * pump.lambda_pc_um(), temp)?;
        let scale = Complex64::from_polar(1.0, 3.0 * std::f64::consts::FRAC_PI_4)
            * Complex64::new(0.0, 2.0 / std::f64::consts::PI)
            * std::f64::consts::PI.powf(1.5)
            * pump.waist_x_um()
            * pump.waist_y_um()
            * crystal.length_um();
        Ok(Self {
            pump,
            crystal,
            dispersion,
            amplitude_scale: scale,
        })
    }

    pub fn with_amplitude_scale(mut self, scale: Complex64) -> Self {
        self.amplitude_scale = scale;
        self
    }

    /// Dimensionless chirp strength xi = D L^2 of the configured crystal.
    pub fn xi(&self) -> f64 {
        self.crystal.chirp_strength()
    }

    /// Dimensionless transverse-corrected phase mismatch
    /// `x_t = L (k_p - k_zs - k_zi - 2 pi / Lambda_c - k_t^2 / (2 k_p))`,
    /// with the pump wavevector taken at the frequency sum.
    pub fn phase_mismatch_xt(
        &self,
        signal: &PhotonMode,
        idler: &PhotonMode,
    ) -> Result<f64, BiphotonError> {
        let temp = self.crystal.temperature_c();
        let omega_p = signal.omega + idler.omega;
        let k_p = self
            .dispersion
            .wavevector_magnitude(omega_p, temp)
            .map_err(BiphotonError::Dispersion)?;
        let k_zs = self
            .dispersion
            .longitudinal_k(signal, temp)
            .map_err(forbidden_if_evanescent)?;
        let k_zi = self
            .dispersion
            .longitudinal_k(idler, temp)
            .map_err(forbidden_if_evanescent)?;
        let ktx = signal.kx + idler.kx;
        let kty = signal.ky + idler.ky;
        let kt2 = ktx * ktx + kty * kty;
        // the photon terms are grouped first so the expression is bit-exactly
        // symmetric under signal/idler exchange
        let dk = k_p - (k_zs + k_zi) - self.crystal.k0() - kt2 / (2.0 * k_p);
        Ok(self.crystal.length_um() * dk)
    }

    /// Longitudinal grating response Q(x_t) (see the module header). Shared
    /// by the closed-form amplitude and the phase-matching maps.
    pub fn grating_response(&self, x_t: f64) -> Complex64 {
        let xi = self.xi();
        if xi.abs() < XI_SWITCH {
            return sinc_response(x_t);
        }
        let r = self.crystal.r();
        let rho = -x_t + r * xi;
        let w = Complex64::new(0.0, xi).sqrt();
        let z1 = w * (rho / (2.0 * xi));
        let z2 = w * ((rho - 2.0 * xi) / (2.0 * xi));
        let erf_diff = cerf_unbounded(z1) - cerf_unbounded(z2);
        let prefactor = Complex64::from_polar(1.0, std::f64::consts::FRAC_PI_4) / (2.0 * w);
        let phase = Complex64::cis(rho * rho / (4.0 * xi));
        prefactor * phase * erf_diff
    }

    /// Joint amplitude f(signal, idler). Evanescent kinematics return exactly
    /// zero so wide momentum grids evaluate cleanly.
    pub fn jaf(&self, signal: &PhotonMode, idler: &PhotonMode) -> Complex64 {
        let x_t = match self.phase_mismatch_xt(signal, idler) {
            Ok(v) => v,
            Err(BiphotonError::Forbidden(_)) => return Complex64::new(0.0, 0.0),
            Err(_) => return Complex64::new(0.0, 0.0),
        };
        let envelope = self.pump.envelope(signal.omega, idler.omega);
        let spatial = self
            .pump
            .spatial_factor(signal.kx + idler.kx, signal.ky + idler.ky);
        self.amplitude_scale * self.grating_response(x_t) * envelope * spatial
    }

    /// Brute-force evaluation of the longitudinal integral by composite
    /// Simpson quadrature with Richardson extrapolation (`n` and `2n`
    /// intervals). Ground truth for `jaf` at any chirp; `n` is clamped to at
    /// least 10^4 z-samples.
    pub fn jaf_by_quadrature(
        &self,
        signal: &PhotonMode,
        idler: &PhotonMode,
        n: usize,
    ) -> Complex64 {
        let x_t = match self.phase_mismatch_xt(signal, idler) {
            Ok(v) => v,
            Err(_) => return Complex64::new(0.0, 0.0),
        };
        let length = self.crystal.length_um();
        let d = self.crystal.chirp_rad_um2();
        let z0 = self.crystal.z0_um();
        let dk = x_t / length;
        // phase(z) = (dk - D z0) z - D z^2 on z in [-L, 0]
        let phase = |z: f64| (dk - d * z0) * z - d * z * z;
        let n = n.max(10_000) & !1; // even interval count
        let coarse = simpson_cis(phase, -length, 0.0, n);
        let fine = simpson_cis(phase, -length, 0.0, 2 * n);
        let integral = fine + (fine - coarse) / 15.0;

        let envelope = self.pump.envelope(signal.omega, idler.omega);
        let spatial = self
            .pump
            .spatial_factor(signal.kx + idler.kx, signal.ky + idler.ky);
        let q = Complex64::from_polar(1.0, std::f64::consts::FRAC_PI_4) / (SQRT_PI * length)
            * integral;
        self.amplitude_scale * q * envelope * spatial
    }

    /// |PMF| over the (w_s, w_i) plane at collinear kinematics (envelope set
    /// to one). With `unpoled` the grating term is dropped entirely (K0 and
    /// chirp), giving the plain homogeneous-crystal sinc bands.
    pub fn pmf_map(
        &self,
        omega_s: Axis,
        omega_i: Axis,
        unpoled: bool,
    ) -> Result<RealGrid2D, BiphotonError> {
        let temp = self.crystal.temperature_c();
        // validate the corners: each axis and the frequency sum must stay
        // inside dispersion validity
        for ax in [&omega_s, &omega_i] {
            for w in [ax.min(), ax.max()] {
                self.dispersion
                    .refractive_index(lambda_from_omega(w), temp)?;
            }
        }
        self.dispersion
            .refractive_index(lambda_from_omega(omega_s.max() + omega_i.max()), temp)?;

        let n2 = omega_i.count();
        let mut k_i = Vec::with_capacity(n2);
        for w in omega_i.values() {
            k_i.push(self.dispersion.wavevector_magnitude(w, temp)?);
        }
        let length = self.crystal.length_um();
        let k0 = self.crystal.k0();
        let mut grid = Grid2D::filled(omega_s, omega_i, 0.0);
        for i in 0..grid.axis1.count() {
            let ws = grid.axis1.value(i);
            let ks = self.dispersion.wavevector_magnitude(ws, temp)?;
            for j in 0..n2 {
                let wi = grid.axis2.value(j);
                let k_p = self
                    .dispersion
                    .wavevector_magnitude(ws + wi, temp)?;
                let mismatch = k_p - (ks + k_i[j]);
                let value = if unpoled {
                    sinc_response(length * mismatch).norm()
                } else {
                    self.grating_response(length * (mismatch - k0)).norm()
                };
                grid.set(i, j, value);
            }
        }
        Ok(grid)
    }
}

fn forbidden_if_evanescent(e: DispersionError) -> BiphotonError {
    match e {
        DispersionError::Evanescent { .. } => BiphotonError::Forbidden(e),
        other => BiphotonError::Dispersion(other),
    }
}

/// Unchirped response `e^{i pi/4}/sqrt(pi) e^{-i x/2} sinc(x/2)`.
fn sinc_response(x_t: f64) -> Complex64 {
    let half = 0.5 * x_t;
    let sinc = if half.abs() < 1e-8 {
        1.0 - half * half / 6.0
    } else {
        half.sin() / half
    };
    Complex64::from_polar(1.0, std::f64::consts::FRAC_PI_4 - half) * (sinc / SQRT_PI)
}

fn simpson_cis(phase: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> Complex64 {
    let h = (b - a) / n as f64;
    // fixed-order accumulation; pairwise refinement is unnecessary at the
    // sample counts used here but the order must stay deterministic
    let mut acc = Complex64::cis(phase(a)) + Complex64::cis(phase(b));
    let mut odd = Complex64::new(0.0, 0.0);
    let mut even = Complex64::new(0.0, 0.0);
    for k in 1..n {
        let v = Complex64::cis(phase(a + h * k as f64));
        if k % 2 == 1 {
            odd += v;
        } else {
            even += v;
        }
    }
    acc += 4.0 * odd + 2.0 * even;
    acc * (h / 3.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::crystal::solve_central_period;
    use crate::units::omega_from_lambda;

    fn context(d: f64, temp_c: f64, fwhm_um: f64) -> JafContext {
        let dispersion = DispersionModel::builtin_linbo3_e();
        let period = solve_central_period(&dispersion, 0.8, 25.0).unwrap();
        let crystal = CrystalConfig::new(5000.0, d, 2500.0, period, temp_c, false).unwrap();
        let pump = PumpConfig::from_fwhm_lambda(0.8, fwhm_um, 0.0, 100.0, 100.0).unwrap();
        JafContext::new(pump, crystal, dispersion).unwrap()
    }

    fn degenerate_modes() -> (PhotonMode, PhotonMode) {
        let w = omega_from_lambda(0.8) / 2.0;
        (
            PhotonMode::collinear(w).unwrap(),
            PhotonMode::collinear(w).unwrap(),
        )
    }

    #[test]
    fn collinear_degenerate_mismatch_vanishes_with_solved_period() {
        let ctx = context(0.0, 25.0, 0.01);
        let (s, i) = degenerate_modes();
        let x_t = ctx.phase_mismatch_xt(&s, &i).unwrap();
        assert!(x_t.abs() < 1e-9, "x_t = {x_t}");
    }

    #[test]
    fn mismatch_depends_on_transverse_momenta_through_sums_and_kz() {
        // structure check with a constant-index stub: moving transverse
        // momentum between the photons changes x_t exactly by the k_z change
        let text = "name = stub\na1 = 4.8\na2 = 0.0\na3 = 0.5\na4 = 0.0\na5 = 11.0\na6 = 0.0\n\
                    b1 = 0.0\nb2 = 0.0\nb3 = 0.0\nb4 = 0.0\nt0 = 24.5\nt1 = 570.82\n\
                    lambda_min_um = 0.1\nlambda_max_um = 10.0\ntemp_min_c = 0.0\ntemp_max_c = 300.0\n";
        let dispersion = DispersionModel::from_material_str(text).unwrap();
        let crystal = CrystalConfig::new(5000.0, 2e-6, 2500.0, 20.33, 25.0, false).unwrap();
        let pump = PumpConfig::from_fwhm_lambda(0.8, 0.01, 0.0, 100.0, 100.0).unwrap();
        let ctx = JafContext::new(pump, crystal, dispersion.clone()).unwrap();

        let w = omega_from_lambda(0.8) / 2.0;
        let delta = 0.07;
        let s1 = PhotonMode::new(w, 0.10, 0.0).unwrap();
        let i1 = PhotonMode::new(w, -0.02, 0.0).unwrap();
        let s2 = PhotonMode::new(w, 0.10 + delta, 0.0).unwrap();
        let i2 = PhotonMode::new(w, -0.02 - delta, 0.0).unwrap();

        let x1 = ctx.phase_mismatch_xt(&s1, &i1).unwrap();
        let x2 = ctx.phase_mismatch_xt(&s2, &i2).unwrap();
        let kz = |m: &PhotonMode| dispersion.longitudinal_k(m, 25.0).unwrap();
        let expected = 5000.0 * (kz(&s1) + kz(&i1) - kz(&s2) - kz(&i2));
        assert!(((x2 - x1) - expected).abs() < 1e-9);
    }

    #[test]
    fn evanescent_modes_give_exactly_zero_amplitude() {
        let ctx = context(2e-6, 25.0, 0.01);
        let w = omega_from_lambda(1.6);
        let k = ctx.dispersion.wavevector_magnitude(w, 25.0).unwrap();
        let s = PhotonMode::new(w, 1.2 * k, 0.0).unwrap();
        let i = PhotonMode::collinear(w).unwrap();
        assert_eq!(ctx.jaf(&s, &i), Complex64::new(0.0, 0.0));
        assert!(matches!(
            ctx.phase_mismatch_xt(&s, &i),
            Err(BiphotonError::Forbidden(_))
        ));
    }

    #[test]
    fn far_detuned_pairs_are_suppressed() {
        let ctx = context(0.0, 25.0, 0.01);
        let (s, i) = degenerate_modes();
        let at_center = ctx.jaf(&s, &i).norm();
        let sigma = ctx.pump.sigma_omega();
        let s_detuned = PhotonMode::collinear(s.omega + 10.0 * sigma).unwrap();
        let detuned = ctx.jaf(&s_detuned, &i).norm();
        assert!(detuned < 1e-40 * at_center, "ratio {}", detuned / at_center);
    }

    #[test]
    fn closed_form_approaches_quadrature_as_chirp_vanishes() {
        // xi = 1e-1, 1e-2, 1e-3: agree with the z-integral at matching xi and
        // approach the xi -> 0 sinc limit monotonically
        let w = omega_from_lambda(0.8) / 2.0;
        let s = PhotonMode::new(1.02 * w, 0.05, 0.0).unwrap();
        let i = PhotonMode::new(0.98 * w, -0.03, 0.0).unwrap();
        let sinc_limit = context(0.0, 25.0, 0.01).jaf(&s, &i);
        let mut previous_gap = f64::INFINITY;
        for xi in [1e-1, 1e-2, 1e-3] {
            let ctx = context(xi / (5000.0f64 * 5000.0), 25.0, 0.01);
            let closed = ctx.jaf(&s, &i);
            let integral = ctx.jaf_by_quadrature(&s, &i, 20_000);
            let rel = (closed - integral).norm() / integral.norm();
            assert!(rel < 1e-6, "xi {xi}: rel {rel}");
            let gap = (closed - sinc_limit).norm() / sinc_limit.norm();
            assert!(gap < previous_gap, "gap did not shrink at xi {xi}");
            previous_gap = gap;
        }
    }

    #[test]
    fn closed_form_matches_quadrature_at_strong_chirp() {
        let w = omega_from_lambda(0.8) / 2.0;
        let s = PhotonMode::new(1.05 * w, 0.12, 0.0).unwrap();
        let i = PhotonMode::new(0.95 * w, -0.08, 0.0).unwrap();
        for d in [2e-6, -2e-6, 5e-6, -5e-6] {
            let ctx = context(d, 25.0, 0.01);
            let closed = ctx.jaf(&s, &i);
            let integral = ctx.jaf_by_quadrature(&s, &i, 40_000);
            let rel = (closed - integral).norm() / integral.norm();
            assert!(rel < 1e-6, "D = {d}: rel {rel}");
        }
    }

    #[test]
    fn quadrature_is_converged_in_step_size() {
        let ctx = context(2e-6, 25.0, 0.01);
        let w = omega_from_lambda(0.8) / 2.0;
        let s = PhotonMode::new(1.03 * w, 0.1, 0.0).unwrap();
        let i = PhotonMode::new(0.97 * w, -0.05, 0.0).unwrap();
        let a = ctx.jaf_by_quadrature(&s, &i, 20_000);
        let b = ctx.jaf_by_quadrature(&s, &i, 40_000);
        assert!((a - b).norm() < 1e-9 * b.norm());
    }

    #[test]
    fn unchirped_closed_form_is_the_analytic_sinc() {
        let ctx = context(0.0, 25.0, 0.01);
        let w = omega_from_lambda(0.8) / 2.0;
        let s = PhotonMode::new(1.01 * w, 0.06, 0.0).unwrap();
        let i = PhotonMode::new(0.99 * w, -0.02, 0.0).unwrap();
        let x_t = ctx.phase_mismatch_xt(&s, &i).unwrap();
        let envelope = ctx.pump.envelope(s.omega, i.omega);
        let spatial = ctx.pump.spatial_factor(s.kx + i.kx, 0.0);
        let half = 0.5 * x_t;
        let want = ctx.amplitude_scale
            * Complex64::from_polar(1.0, std::f64::consts::FRAC_PI_4 - half)
            * (half.sin() / half / SQRT_PI)
            * envelope
            * spatial;
        let got = ctx.jaf(&s, &i);
        assert!((got - want).norm() < 1e-12 * want.norm());
    }

    #[test]
    fn exchange_symmetry_of_the_amplitude_magnitude() {
        use rand::{Rng, SeedableRng};
        let ctx = context(2e-6, 25.0, 0.01);
        let w0 = omega_from_lambda(0.8) / 2.0;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..200 {
            let s = PhotonMode::new(
                w0 * rng.gen_range(0.8..1.2),
                rng.gen_range(-0.3..0.3),
                rng.gen_range(-0.1..0.1),
            )
            .unwrap();
            let i = PhotonMode::new(
                w0 * rng.gen_range(0.8..1.2),
                rng.gen_range(-0.3..0.3),
                rng.gen_range(-0.1..0.1),
            )
            .unwrap();
            let a = ctx.jaf(&s, &i).norm();
            let b = ctx.jaf(&i, &s).norm();
            assert!((a - b).abs() <= 1e-12 * (a.abs() + 1e-300));
        }
    }

    #[test]
    fn pump_chirp_never_changes_the_magnitude() {
        use rand::{Rng, SeedableRng};
        let flat = context(2e-6, 25.0, 0.01);
        let chirped = JafContext::new(
            PumpConfig::from_fwhm_lambda(0.8, 0.01, 1e5, 100.0, 100.0).unwrap(),
            flat.crystal.clone(),
            flat.dispersion.clone(),
        )
        .unwrap();
        let w0 = omega_from_lambda(0.8) / 2.0;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(23);
        for _ in 0..200 {
            let s = PhotonMode::new(w0 * rng.gen_range(0.9..1.1), rng.gen_range(-0.2..0.2), 0.0)
                .unwrap();
            let i = PhotonMode::new(w0 * rng.gen_range(0.9..1.1), rng.gen_range(-0.2..0.2), 0.0)
                .unwrap();
            let a = flat.jaf(&s, &i).norm();
            let b = chirped.jaf(&s, &i).norm();
            assert!((a - b).abs() <= 1e-12 * (a + 1e-300));
        }
    }

    #[test]
    fn response_is_continuous_across_the_small_chirp_switch() {
        // evaluate just above and below the switch at a benign mismatch
        let l = 5000.0f64;
        for sign in [1.0, -1.0] {
            let xi_hi = sign * XI_SWITCH * 1.001;
            let xi_lo = sign * XI_SWITCH * 0.999;
            let above = context(xi_hi / (l * l), 25.0, 0.01).grating_response(1.3);
            let below = context(xi_lo / (l * l), 25.0, 0.01).grating_response(1.3);
            let rel = (above - below).norm() / below.norm();
            assert!(rel < 1e-5, "sign {sign}: rel {rel}");
        }
    }

    #[test]
    fn pmf_maximum_sits_on_the_energy_diagonal() {
        let ctx = context(0.0, 25.0, 0.01);
        let w0 = omega_from_lambda(0.8) / 2.0;
        let ax = || Axis::new("omega", "rad/fs", 0.9 * w0, 1.1 * w0, 161).unwrap();
        let map = ctx.pmf_map(ax(), ax(), false).unwrap();
        let (_, i, j) = map.argmax();
        // on a square grid the w_s + w_i = w_p anti-diagonal is i + j = n - 1
        let n = map.axis1.count();
        assert!(
            (i + j) as isize - (n as isize - 1) == 0,
            "max at ({i}, {j}) off the diagonal"
        );
    }

    #[test]
    fn pmf_map_is_symmetric_under_axis_swap() {
        let ctx = context(3e-6, 25.0, 0.01);
        let w0 = omega_from_lambda(0.8) / 2.0;
        let ax = || Axis::new("omega", "rad/fs", 0.85 * w0, 1.15 * w0, 96).unwrap();
        let map = ctx.pmf_map(ax(), ax(), false).unwrap();
        for i in 0..96 {
            for j in 0..96 {
                assert_eq!(map.get(i, j), map.get(j, i));
            }
        }
    }

    #[test]
    fn chirp_broadens_the_pmf_antidiagonal_support() {
        // half-max support along the anti-diagonal more than doubles
        let w0 = omega_from_lambda(0.8) / 2.0;
        let ax = || Axis::new("omega", "rad/fs", 0.8 * w0, 1.2 * w0, 257).unwrap();
        let widths: Vec<f64> = [0.0, 3e-6]
            .iter()
            .map(|&d| {
                let map = context(d, 25.0, 0.01).pmf_map(ax(), ax(), false).unwrap();
                let n = map.axis1.count();
                let cut: Vec<f64> = (0..n).map(|i| map.get(i, n - 1 - i)).collect();
                let max = cut.iter().cloned().fold(f64::MIN, f64::max);
                let count = cut.iter().filter(|&&v| v >= 0.5 * max).count();
                count as f64
            })
            .collect();
        assert!(
            widths[1] > 2.0 * widths[0],
            "support {} vs {}",
            widths[1],
            widths[0]
        );
    }

    #[test]
    fn unpoled_map_differs_from_poled() {
        let ctx = context(0.0, 25.0, 0.01);
        let w0 = omega_from_lambda(0.8) / 2.0;
        let ax = || Axis::new("omega", "rad/fs", 0.9 * w0, 1.1 * w0, 64).unwrap();
        let poled = ctx.pmf_map(ax(), ax(), false).unwrap();
        let unpoled = ctx.pmf_map(ax(), ax(), true).unwrap();
        // the poled map phase-matches at the degenerate point, the unpoled
        // map carries the full material mismatch there
        let n = poled.axis1.count();
        let c = n / 2;
        assert!(poled.get(c, n - 1 - c) > 10.0 * unpoled.get(c, n - 1 - c));
    }
}
