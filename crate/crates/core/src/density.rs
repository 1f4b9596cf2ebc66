//! Sampled densities on the circle.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use serde::Serialize;

use crate::angle::{angular_difference, normalize};
use crate::error::{Error, Result};

/// Cyclically ordered `(angle, density)` samples, possibly nonuniform.
///
/// Angles are strictly increasing in `[-π, π)`; the last sample wraps to the
/// first when `cyclic` is set.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DensityGrid {
    angles: Vec<f64>,
    values: Vec<f64>,
    cyclic: bool,
}

impl DensityGrid {
    pub fn new(angles: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if angles.len() != values.len() {
            return Err(Error::InvalidGrid(format!(
                "{} angles but {} values",
                angles.len(),
                values.len()
            )));
        }
        if angles.len() < 2 {
            return Err(Error::InvalidGrid("need at least two samples".into()));
        }
        for (i, (&a, &v)) in angles.iter().zip(&values).enumerate() {
            if !a.is_finite() || !(-PI..PI).contains(&a) {
                return Err(Error::InvalidGrid(format!("angle[{i}] = {a} is outside [-π, π)")));
            }
            if !v.is_finite() || v < 0.0 {
                return Err(Error::InvalidGrid(format!("value[{i}] = {v} is not a nonnegative number")));
            }
        }
        if angles.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidGrid("angles must be strictly increasing".into()));
        }
        Ok(DensityGrid {
            angles,
            values,
            cyclic: true,
        })
    }

    /// Samples on the uniform grid `-π + 2πk/N`.
    pub fn uniform(values: Vec<f64>) -> Result<Self> {
        let n = values.len();
        Self::new(uniform_angles(n), values)
    }

    /// Sort arbitrary `(angle, value)` pairs into a grid, normalizing angles
    /// and dropping samples that coincide with their predecessor.
    pub fn from_unsorted(mut samples: Vec<(f64, f64)>) -> Result<Self> {
        for s in &mut samples {
            s.0 = normalize(s.0);
        }
        samples.sort_by(|a, b| a.0.total_cmp(&b.0));
        samples.dedup_by(|b, a| b.0 - a.0 <= 1e-15);
        let (angles, values) = samples.into_iter().unzip();
        Self::new(angles, values)
    }

    pub fn angles(&self) -> &[f64] {
        &self.angles
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn is_cyclic(&self) -> bool {
        self.cyclic
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// True when the angles are `-π + 2πk/N` to within `1e-12`.
    pub fn is_uniform(&self) -> bool {
        let h = TAU / self.len() as f64;
        self.angles
            .iter()
            .enumerate()
            .all(|(k, &a)| (a - (-PI + k as f64 * h)).abs() < 1e-12)
    }

    /// Width of the cyclic step from sample `k` to `k + 1`.
    pub fn step(&self, k: usize) -> f64 {
        let n = self.len();
        if k + 1 < n {
            self.angles[k + 1] - self.angles[k]
        } else {
            self.angles[0] + TAU - self.angles[n - 1]
        }
    }

    /// Cyclic trapezoidal integral of the density.
    pub fn mass(&self) -> f64 {
        let n = self.len();
        (0..n)
            .map(|k| 0.5 * (self.values[k] + self.values[(k + 1) % n]) * self.step(k))
            .sum()
    }

    /// Cyclic trapezoidal approximation of `∫ e^{inθ} p(θ) dθ`.
    pub fn moment(&self, n: i32) -> Complex64 {
        let len = self.len();
        let term = |k: usize| Complex64::from_polar(self.values[k], n as f64 * self.angles[k]);
        (0..len)
            .map(|k| (term(k) + term((k + 1) % len)) * (0.5 * self.step(k)))
            .sum()
    }

    /// Linear interpolation with wraparound.
    pub fn interpolate(&self, theta: f64) -> f64 {
        let x = normalize(theta);
        let n = self.len();
        let idx = self.angles.partition_point(|&a| a <= x);
        let (i, j) = if idx == 0 || idx == n { (n - 1, 0) } else { (idx - 1, idx) };
        let span = self.step(i);
        let offset = normalize_offset(x - self.angles[i]);
        let w = if span > 0.0 { offset / span } else { 0.0 };
        self.values[i] * (1.0 - w) + self.values[j] * w
    }

    /// Linear resampling onto the uniform `n`-grid.
    pub fn resample_uniform(&self, n: usize) -> Result<DensityGrid> {
        let angles = uniform_angles(n);
        let values = angles.iter().map(|&a| self.interpolate(a)).collect();
        DensityGrid::new(angles, values)
    }

    /// Rotate every sample by `delta`.
    pub fn rotate(&self, delta: f64) -> Result<DensityGrid> {
        let samples = self
            .angles
            .iter()
            .zip(&self.values)
            .map(|(&a, &v)| (a + delta, v))
            .collect();
        DensityGrid::from_unsorted(samples)
    }

    /// Index of the sample nearest to `theta`.
    pub fn nearest_index(&self, theta: f64) -> usize {
        (0..self.len())
            .min_by(|&i, &j| {
                angular_difference(self.angles[i], theta)
                    .abs()
                    .total_cmp(&angular_difference(self.angles[j], theta).abs())
            })
            .unwrap_or(0)
    }
}

fn normalize_offset(x: f64) -> f64 {
    if x < 0.0 {
        x + TAU
    } else {
        x
    }
}

pub fn uniform_angles(n: usize) -> Vec<f64> {
    let h = TAU / n as f64;
    (0..n).map(|k| -PI + k as f64 * h).collect()
}
