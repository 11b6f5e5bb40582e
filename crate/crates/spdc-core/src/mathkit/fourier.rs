//! Discrete approximation of the continuous Fourier transform
//!
//! ```text
//! F(x, t) = (2 pi)^-2 \int dk dw V(k, w) exp(-i (k x + w t))
//! ```
//!
//! including the sample measure `dk dw` and explicit phase factors for the
//! non-zero axis origins. `dft2` evaluates onto the natural conjugate grid
//! implied by the input sampling (via an FFT of any length); `dft2_onto`
//! evaluates the same sum directly onto caller-chosen output axes, which is
//! what width extraction uses to zoom into under-resolved peaks.

use num_complex::Complex64;
use rustfft::FftPlanner;

use super::{Axis, ComplexGrid2D, Grid2D};

fn conjugate_axis(input: &Axis) -> Axis {
    let m = input.count();
    let step = std::f64::consts::TAU / (m as f64 * input.step());
    let half = (m / 2) as isize;
    let min = -(half as f64) * step;
    let max = (m as isize - 1 - half) as f64 * step;
    let unit = match input.unit.as_str() {
        "rad/um" => "um",
        "rad/fs" => "fs",
        other => other,
    };
    Axis::new(format!("conj_{}", input.name), unit, min, max, m)
        .expect("conjugate axis of a valid axis is valid")
}

/// Forward transform onto the natural (fftshifted, origin-centred) conjugate
/// axes. Sign convention: `exp(-i (k x + w t))`.
pub fn dft2(grid: &ComplexGrid2D) -> ComplexGrid2D {
    let (m, n) = (grid.axis1.count(), grid.axis2.count());
    let mut data: Vec<Complex64> = grid.values().to_vec();

    let mut planner = FftPlanner::new();
    let fft_rows = planner.plan_fft_forward(n);
    for row in data.chunks_exact_mut(n) {
        fft_rows.process(row);
    }
    let fft_cols = planner.plan_fft_forward(m);
    let mut col = vec![Complex64::new(0.0, 0.0); m];
    for j in 0..n {
        for i in 0..m {
            col[i] = data[i * n + j];
        }
        fft_cols.process(&mut col);
        for i in 0..m {
            data[i * n + j] = col[i];
        }
    }

    let out1 = conjugate_axis(&grid.axis1);
    let out2 = conjugate_axis(&grid.axis2);
    let measure = grid.axis1.step() * grid.axis2.step()
        / (std::f64::consts::TAU * std::f64::consts::TAU);
    let (o1, o2) = (grid.axis1.min(), grid.axis2.min());
    let (h1, h2) = (m / 2, n / 2);

    let mut out = Grid2D::filled(out1, out2, Complex64::new(0.0, 0.0));
    for mi in 0..m {
        // signed output index and the DFT bin it wraps to
        let mp = mi as isize - h1 as isize;
        let src_i = mp.rem_euclid(m as isize) as usize;
        let x = out.axis1.value(mi);
        for ni in 0..n {
            let np = ni as isize - h2 as isize;
            let src_j = np.rem_euclid(n as isize) as usize;
            let t = out.axis2.value(ni);
            let phase = Complex64::cis(-(o1 * x + o2 * t));
            out.set(mi, ni, data[src_i * n + src_j] * phase * measure);
        }
    }
    out
}

/// Direct evaluation of the same transform onto explicit output axes.
pub fn dft2_onto(grid: &ComplexGrid2D, out1: Axis, out2: Axis) -> ComplexGrid2D {
    let (m, n) = (grid.axis1.count(), grid.axis2.count());
    let (p, q) = (out1.count(), out2.count());
    let measure = grid.axis1.step() * grid.axis2.step()
        / (std::f64::consts::TAU * std::f64::consts::TAU);

    // stage 1: transform along axis1 for every output x
    let mut stage = vec![Complex64::new(0.0, 0.0); p * n];
    for pi in 0..p {
        let x = out1.value(pi);
        let row = &mut stage[pi * n..(pi + 1) * n];
        for j in 0..m {
            let phase = Complex64::cis(-grid.axis1.value(j) * x);
            let src = &grid.values()[j * n..(j + 1) * n];
            for (acc, v) in row.iter_mut().zip(src) {
                *acc += phase * v;
            }
        }
    }

    // stage 2: transform along axis2 for every output t
    let mut out = Grid2D::filled(out1, out2, Complex64::new(0.0, 0.0));
    for pi in 0..p {
        let row = &stage[pi * n..(pi + 1) * n];
        for qi in 0..q {
            let t = out.axis2.value(qi);
            let mut acc = Complex64::new(0.0, 0.0);
            for (l, v) in row.iter().enumerate() {
                acc += Complex64::cis(-grid.axis2.value(l) * t) * v;
            }
            out.set(pi, qi, acc * measure);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mathkit::Axis;

    fn complex_grid(
        n1: usize,
        n2: usize,
        range1: (f64, f64),
        range2: (f64, f64),
        f: impl FnMut(f64, f64) -> Complex64,
    ) -> ComplexGrid2D {
        let a1 = Axis::new("k", "rad/um", range1.0, range1.1, n1).unwrap();
        let a2 = Axis::new("w", "rad/fs", range2.0, range2.1, n2).unwrap();
        Grid2D::from_fn(a1, a2, f)
    }

    #[test]
    fn impulse_has_constant_magnitude() {
        let mut g = complex_grid(16, 12, (-1.0, 1.0), (-2.0, 2.0), |_, _| {
            Complex64::new(0.0, 0.0)
        });
        g.set(5, 7, Complex64::new(1.0, 0.0));
        let out = dft2(&g);
        let want = g.axis1.step() * g.axis2.step()
            / (std::f64::consts::TAU * std::f64::consts::TAU);
        for v in out.values() {
            assert!((v.norm() - want).abs() < 1e-12 * want);
        }
    }

    #[test]
    fn gaussian_transforms_to_reciprocal_gaussian() {
        // V = exp(-k^2/(2a^2) - w^2/(2b^2))  ->
        // F = (a b / 2 pi) exp(-a^2 x^2 / 2 - b^2 t^2 / 2)
        let (a, b) = (0.8, 1.3);
        let g = complex_grid(128, 96, (-8.0, 8.0), (-13.0, 13.0), |k, w| {
            Complex64::new((-k * k / (2.0 * a * a) - w * w / (2.0 * b * b)).exp(), 0.0)
        });
        let out = dft2(&g);
        for i in (0..out.axis1.count()).step_by(7) {
            for j in (0..out.axis2.count()).step_by(5) {
                let (x, t) = (out.axis1.value(i), out.axis2.value(j));
                let want = a * b / std::f64::consts::TAU
                    * (-a * a * x * x / 2.0 - b * b * t * t / 2.0).exp();
                let got = out.get(i, j);
                assert!(
                    (got.re - want).abs() < 1e-9 && got.im.abs() < 1e-9,
                    "at ({x}, {t}): {got} vs {want}"
                );
            }
        }
    }

    #[test]
    fn parseval_holds_to_1e9() {
        let g = complex_grid(64, 48, (-3.0, 3.0), (-5.0, 5.0), |k, w| {
            Complex64::new((-(k * k) - 0.5 * w * w).exp(), 0.3 * (k * w).sin())
        });
        let out = dft2(&g);
        let in_norm: f64 =
            g.values().iter().map(|v| v.norm_sqr()).sum::<f64>() * g.axis1.step() * g.axis2.step();
        let out_norm: f64 = out.values().iter().map(|v| v.norm_sqr()).sum::<f64>()
            * out.axis1.step()
            * out.axis2.step()
            * std::f64::consts::TAU
            * std::f64::consts::TAU;
        assert!((in_norm - out_norm).abs() <= 1e-9 * in_norm);
    }

    #[test]
    fn real_input_gives_hermitian_output() {
        let g = complex_grid(32, 32, (-2.0, 2.0), (-2.0, 2.0), |k, w| {
            Complex64::new((-(k - 0.3) * (k - 0.3) - w * w).exp(), 0.0)
        });
        let out = dft2(&g);
        let m = out.axis1.count();
        // even-length fftshifted axes: index m/2 is 0; mirror of i is m - i
        for i in 1..m {
            for j in 1..m {
                let a = out.get(i, j);
                let b = out.get(m - i, m - j).conj();
                assert!((a - b).norm() < 1e-12, "Hermitian symmetry broke at ({i},{j})");
            }
        }
    }

    #[test]
    fn direct_evaluation_matches_fft_path() {
        let g = complex_grid(24, 20, (-1.5, 1.5), (-2.5, 2.5), |k, w| {
            Complex64::new((k + 0.2 * w).cos(), (0.5 * k * w).sin())
        });
        let via_fft = dft2(&g);
        let direct = dft2_onto(&g, via_fft.axis1.clone(), via_fft.axis2.clone());
        for (a, b) in via_fft.values().iter().zip(direct.values()) {
            assert!((a - b).norm() < 1e-10);
        }
    }
}
