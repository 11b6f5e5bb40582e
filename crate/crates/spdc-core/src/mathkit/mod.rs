//! Special functions and numeric engines: complex error function, labelled
//! uniform grids, tensor-grid trapezoid quadrature and discrete approximations
//! of the continuous Fourier transform.

mod cerf;
mod dd;
mod fourier;
mod grid;
mod quad;

pub use cerf::{cerf, cerf_unbounded, CERF_WORKING_RANGE};
pub use fourier::{dft2, dft2_onto};
pub use grid::{Axis, ComplexGrid2D, Grid2D, RealGrid2D};
pub use quad::{pairwise_sum, trapezoid_1d, trapezoid_2d};

use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum MathError {
    #[error("cerf argument {z} is outside the working square |Re|,|Im| <= {limit}; accuracy is not guaranteed there")]
    CerfOutOfRange { z: Complex64, limit: f64 },

    #[error("axis {name:?} needs at least 2 samples, got {count}")]
    TooFewSamples { name: String, count: usize },

    #[error("axis {name:?} needs min < max, got [{min}, {max}]")]
    EmptyAxisRange { name: String, min: f64, max: f64 },
}
