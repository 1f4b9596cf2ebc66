//! Poisson-kernel primitives shared by the measure, classical and free modules.

use std::f64::consts::{PI, TAU};

use crate::angle::normalize;

/// A radius `r ∈ [0, 1]` carried together with `1 - r`, so that kernels near
/// the boundary keep full relative precision.
#[derive(Clone, Copy, Debug, PartialEq)]
pub(crate) struct Radius {
    pub r: f64,
    pub gap: f64,
}

impl Radius {
    pub fn new(r: f64) -> Self {
        Radius { r, gap: 1.0 - r }
    }

    /// Radius `e^u` for `u ≤ 0`.
    pub fn from_log(u: f64) -> Self {
        Radius {
            r: u.exp(),
            gap: -u.exp_m1(),
        }
    }

    /// `1 - r²`.
    pub fn one_minus_sq(self) -> f64 {
        self.gap * (1.0 + self.r)
    }

    /// `|1 - r e^{iy}|²`, written as `(1-r)² + 4r sin²(y/2)`.
    pub fn denom(self, y: f64) -> f64 {
        let s = (0.5 * y).sin();
        self.gap * self.gap + 4.0 * self.r * s * s
    }
}

/// Mass of the arc `[start, start + len]` under the Poisson kernel centred at 0.
pub(crate) fn arc_mass(rad: Radius, start: f64, len: f64) -> f64 {
    if len <= 0.0 {
        return 0.0;
    }
    if len >= TAU {
        return 1.0;
    }
    let s = normalize(start);
    let e = s + len;
    if e <= PI {
        arc_mass_unwrapped(rad, s, e)
    } else {
        arc_mass_unwrapped(rad, s, PI) + arc_mass_unwrapped(rad, -PI, e - TAU)
    }
}

/// Mass of `[s, e]` with `-π ≤ s ≤ e ≤ π`.
///
/// Difference of the antiderivative `atan(k tan(θ/2))/π`, `k = (1+r)/(1-r)`,
/// folded into one `atan2` so that short arcs lose no digits.
fn arc_mass_unwrapped(rad: Radius, s: f64, e: f64) -> f64 {
    let k = (1.0 + rad.r) / rad.gap;
    let (ss, cs) = (0.5 * s).sin_cos();
    let (se, ce) = (0.5 * e).sin_cos();
    let num = (0.5 * (e - s)).sin();
    let den = ce * cs / k + k * se * ss;
    num.atan2(den) / PI
}

/// Integral of `|1 - e^{iy}|^{-2}` over `[start, start + len]`, `+∞` when the
/// closed arc contains a multiple of 2π.
pub(crate) fn boundary_arc_integral(start: f64, len: f64) -> f64 {
    if len <= 0.0 {
        return 0.0;
    }
    let y0 = start.rem_euclid(TAU);
    let y1 = y0 + len;
    if y0 < 1e-15 || y1 > TAU - 1e-15 {
        return f64::INFINITY;
    }
    // antiderivative -cot(y/2)/2
    (0.5 * len).sin() / (2.0 * (0.5 * y0).sin() * (0.5 * y1).sin())
}
