//! Labelled uniform grids.

use num_complex::Complex64;

use super::MathError;

/// One labelled, uniformly sampled axis. Samples are derived from
/// (min, max, count), so uniformity is exact by construction.
#[derive(Debug, Clone, PartialEq)]
pub struct Axis {
    pub name: String,
    pub unit: String,
    min: f64,
    max: f64,
    count: usize,
}

impl Axis {
    pub fn new(
        name: impl Into<String>,
        unit: impl Into<String>,
        min: f64,
        max: f64,
        count: usize,
    ) -> Result<Self, MathError> {
        let name = name.into();
        if count < 2 {
            return Err(MathError::TooFewSamples { name, count });
        }
        if !(min < max) {
            return Err(MathError::EmptyAxisRange { name, min, max });
        }
        Ok(Self {
            name,
            unit: unit.into(),
            min,
            max,
            count,
        })
    }

    pub fn min(&self) -> f64 {
        self.min
    }

    pub fn max(&self) -> f64 {
        self.max
    }

    pub fn count(&self) -> usize {
        self.count
    }

    pub fn step(&self) -> f64 {
        (self.max - self.min) / (self.count - 1) as f64
    }

    pub fn value(&self, i: usize) -> f64 {
        self.min + self.step() * i as f64
    }

    pub fn values(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.count).map(|i| self.value(i))
    }

    /// Index of the sample closest to `x`.
    pub fn nearest(&self, x: f64) -> usize {
        let i = ((x - self.min) / self.step()).round();
        (i.max(0.0) as usize).min(self.count - 1)
    }
}

/// Row-major 2D field over two labelled axes; axis1 varies slowest.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid2D<T> {
    pub axis1: Axis,
    pub axis2: Axis,
    values: Vec<T>,
}

pub type RealGrid2D = Grid2D<f64>;
pub type ComplexGrid2D = Grid2D<Complex64>;

impl<T: Copy> Grid2D<T> {
    pub fn filled(axis1: Axis, axis2: Axis, value: T) -> Self {
        let n = axis1.count() * axis2.count();
        Self {
            axis1,
            axis2,
            values: vec![value; n],
        }
    }

    pub fn from_fn(axis1: Axis, axis2: Axis, mut f: impl FnMut(f64, f64) -> T) -> Self {
        let mut values = Vec::with_capacity(axis1.count() * axis2.count());
        for i in 0..axis1.count() {
            let x1 = axis1.value(i);
            for j in 0..axis2.count() {
                values.push(f(x1, axis2.value(j)));
            }
        }
        Self { axis1, axis2, values }
    }

    /// Rebuild from raw row-major values; length must match the axes.
    pub fn from_values(axis1: Axis, axis2: Axis, values: Vec<T>) -> Self {
        assert_eq!(values.len(), axis1.count() * axis2.count());
        Self { axis1, axis2, values }
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> T {
        self.values[i * self.axis2.count() + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: T) {
        let n2 = self.axis2.count();
        self.values[i * n2 + j] = v;
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [T] {
        &mut self.values
    }

    pub fn map<U: Copy>(&self, f: impl Fn(T) -> U) -> Grid2D<U> {
        Grid2D {
            axis1: self.axis1.clone(),
            axis2: self.axis2.clone(),
            values: self.values.iter().map(|&v| f(v)).collect(),
        }
    }
}

impl RealGrid2D {
    /// Global maximum value and its indices. Ties are broken toward the
    /// smallest (|axis1|, |axis2|) coordinates, in that order.
    pub fn argmax(&self) -> (f64, usize, usize) {
        let mut best = f64::NEG_INFINITY;
        let (mut bi, mut bj) = (0usize, 0usize);
        for i in 0..self.axis1.count() {
            for j in 0..self.axis2.count() {
                let v = self.get(i, j);
                let better = v > best
                    || (v == best && {
                        let key = (self.axis1.value(i).abs(), self.axis2.value(j).abs());
                        let cur = (self.axis1.value(bi).abs(), self.axis2.value(bj).abs());
                        key < cur
                    });
                if better {
                    best = v;
                    bi = i;
                    bj = j;
                }
            }
        }
        (best, bi, bj)
    }
}
