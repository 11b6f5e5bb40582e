//! Fixed tensor-grid trapezoid quadrature with a deterministic reduction
//! order. Pairwise summation keeps the rounding error O(log n) and makes the
//! result independent of how callers parallelize around it.

use super::{MathError, RealGrid2D};

/// Sum with a fixed pairwise (blocked recursive) order.
pub fn pairwise_sum(v: &[f64]) -> f64 {
    if v.len() <= 32 {
        let mut s = 0.0;
        for x in v {
            s += x;
        }
        return s;
    }
    let mid = v.len() / 2;
    pairwise_sum(&v[..mid]) + pairwise_sum(&v[mid..])
}

/// Composite trapezoid on a uniformly sampled 1D function.
pub fn trapezoid_1d(values: &[f64], step: f64) -> Result<f64, MathError> {
    if values.len() < 2 {
        return Err(MathError::TooFewSamples {
            name: "1d".into(),
            count: values.len(),
        });
    }
    let interior = pairwise_sum(&values[1..values.len() - 1]);
    Ok(step * (interior + 0.5 * (values[0] + values[values.len() - 1])))
}

/// Composite trapezoid on a uniform 2D grid (edge weights 1/2, corners 1/4).
pub fn trapezoid_2d(grid: &RealGrid2D) -> Result<f64, MathError> {
    let (n1, n2) = (grid.axis1.count(), grid.axis2.count());
    let mut weighted = Vec::with_capacity(n1 * n2);
    for i in 0..n1 {
        let w1 = if i == 0 || i == n1 - 1 { 0.5 } else { 1.0 };
        for j in 0..n2 {
            let w2 = if j == 0 || j == n2 - 1 { 0.5 } else { 1.0 };
            weighted.push(grid.get(i, j) * w1 * w2);
        }
    }
    Ok(pairwise_sum(&weighted) * grid.axis1.step() * grid.axis2.step())
}
