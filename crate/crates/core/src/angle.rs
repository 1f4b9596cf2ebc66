//! Angles on the circle, represented by their canonical value in `[-π, π)`.

use std::f64::consts::{PI, TAU};
use std::fmt;
use std::ops::{Add, Neg, Sub};

use serde::{Deserialize, Serialize};

/// Reduce `x` to the representative in `[-π, π)`.
pub fn normalize(x: f64) -> f64 {
    if (-PI..PI).contains(&x) {
        return x;
    }
    let y = (x + PI).rem_euclid(TAU) - PI;
    // rem_euclid may round up to TAU for inputs just below a multiple of 2π
    if y >= PI {
        -PI
    } else {
        y
    }
}

/// Reduce `x` to `[0, 2π)`.
pub fn normalize_positive(x: f64) -> f64 {
    let y = x.rem_euclid(TAU);
    if y >= TAU {
        0.0
    } else {
        y
    }
}

/// Signed shortest distance from `b` to `a` on the circle, in `[-π, π)`.
pub fn angular_difference(a: f64, b: f64) -> f64 {
    normalize(a - b)
}

/// A point of the unit circle, stored as an angle in `[-π, π)`.
#[derive(Clone, Copy, Debug, Default, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(from = "f64", into = "f64")]
pub struct Angle(f64);

impl Angle {
    pub const ZERO: Angle = Angle(0.0);
    pub const MINUS_PI: Angle = Angle(-PI);

    pub fn new(radians: f64) -> Self {
        Angle(normalize(radians))
    }

    pub fn radians(self) -> f64 {
        self.0
    }

    /// Distance along the circle, in `[0, π]`.
    pub fn distance(self, other: Angle) -> f64 {
        angular_difference(self.0, other.0).abs()
    }
}

impl From<f64> for Angle {
    fn from(x: f64) -> Self {
        Angle::new(x)
    }
}

impl From<Angle> for f64 {
    fn from(a: Angle) -> f64 {
        a.0
    }
}

impl Add for Angle {
    type Output = Angle;
    fn add(self, rhs: Angle) -> Angle {
        Angle::new(self.0 + rhs.0)
    }
}

impl Sub for Angle {
    type Output = Angle;
    fn sub(self, rhs: Angle) -> Angle {
        Angle::new(self.0 - rhs.0)
    }
}

impl Neg for Angle {
    type Output = Angle;
    fn neg(self) -> Angle {
        Angle::new(-self.0)
    }
}

impl fmt::Display for Angle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A closed counterclockwise arc `[start, start + length]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Arc {
    pub start: f64,
    pub length: f64,
}

impl Arc {
    pub fn new(start: f64, length: f64) -> Self {
        Arc {
            start: normalize(start),
            length: length.clamp(0.0, TAU),
        }
    }

    pub fn full() -> Self {
        Arc {
            start: -PI,
            length: TAU,
        }
    }

    pub fn is_full(&self) -> bool {
        self.length >= TAU - 1e-12
    }

    pub fn end(&self) -> f64 {
        normalize(self.start + self.length)
    }

    pub fn midpoint(&self) -> f64 {
        normalize(self.start + 0.5 * self.length)
    }

    pub fn contains(&self, x: f64) -> bool {
        self.is_full() || normalize_positive(x - self.start) <= self.length
    }
}
