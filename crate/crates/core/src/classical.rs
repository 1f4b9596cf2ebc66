//! Poisson kernels, classical multiplicative convolution and the `μ_a`
//! construction showing that Poisson kernels close to the boundary are not
//! strongly unimodal.

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::FftPlanner;
use serde::Serialize;

use crate::angle::normalize_positive;
use crate::density::{uniform_angles, DensityGrid};
use crate::error::{Error, Result};
use crate::kernel::{arc_mass, Radius};
use crate::measure::CircleMeasure;

/// Radius from which grid sampling enforces the resolution rule.
pub const HIGH_RADIUS: f64 = 0.999;

fn check_radius(r: f64) -> Result<Radius> {
    if !(0.0..1.0).contains(&r) {
        return Err(Error::Domain(format!("Poisson radius must be in [0, 1), got {r}")));
    }
    Ok(Radius::new(r))
}

/// `PK_{r,ψ}(θ) = (1 - r²) / (2π |1 - r e^{i(θ-ψ)}|²)`.
pub fn pk_density(r: f64, psi: f64, theta: f64) -> Result<f64> {
    let rad = check_radius(r)?;
    Ok(pk_at(rad, theta - psi))
}

fn pk_at(rad: Radius, y: f64) -> f64 {
    rad.one_minus_sq() / (TAU * rad.denom(y))
}

/// Mass of the counterclockwise arc from `theta1` to `theta2` under `PK_{r,ψ}`.
///
/// A literal difference `theta2 - theta1` in `(0, 2π]` is taken as the arc
/// length; anything else is reduced mod 2π.
pub fn pk_arc_mass(r: f64, psi: f64, theta1: f64, theta2: f64) -> Result<f64> {
    let rad = check_radius(r)?;
    Ok(arc_mass(rad, theta1 - psi, arc_length(theta1, theta2)))
}

fn arc_length(from: f64, to: f64) -> f64 {
    let d = to - from;
    if d > 0.0 && d <= TAU {
        d
    } else {
        normalize_positive(d)
    }
}

fn check_resolution(r: f64, n: usize) -> Result<()> {
    if n < 8 {
        return Err(Error::InvalidGrid(format!("grid size {n} is below the minimum of 8")));
    }
    if r >= HIGH_RADIUS && (n as f64) < 8.0 / (1.0 - r) {
        return Err(Error::InvalidGrid(format!(
            "grid size {n} does not resolve a Poisson kernel of radius {r}; need at least {}",
            (8.0 / (1.0 - r)).ceil()
        )));
    }
    Ok(())
}

/// `PK_{r,ψ}` sampled on the uniform `n`-grid.
pub fn pk_grid(r: f64, psi: f64, n: usize) -> Result<DensityGrid> {
    convolve_pk(&CircleMeasure::dirac(0.0), r, psi, n)
}

/// Density of `PK_{r,ψ} ⊛ μ` on the uniform `n`-grid.
pub fn convolve_pk(mu: &CircleMeasure, r: f64, psi: f64, n: usize) -> Result<DensityGrid> {
    let rad = check_radius(r)?;
    check_resolution(r, n)?;
    let angles = uniform_angles(n);
    let values = angles
        .par_iter()
        .map(|&theta| convolve_pk_at(mu, rad, psi, theta))
        .collect();
    DensityGrid::new(angles, values)
}

fn convolve_pk_at(mu: &CircleMeasure, rad: Radius, psi: f64, theta: f64) -> f64 {
    let atoms: f64 = mu
        .atoms()
        .iter()
        .map(|a| a.weight * pk_at(rad, theta - psi - a.angle.radians()))
        .sum();
    let pieces: f64 = mu
        .pieces()
        .iter()
        .map(|p| p.height * arc_mass(rad, theta - psi - p.start - p.length, p.length))
        .sum();
    atoms + pieces
}

/// Cyclic convolution `h(φ) = ∫ f(θ) g(φ - θ) dθ` of two uniform grids of the
/// same power-of-two size, by FFT.
pub fn convolve_grids(f: &DensityGrid, g: &DensityGrid) -> Result<DensityGrid> {
    let n = f.len();
    if g.len() != n {
        return Err(Error::InvalidGrid(format!("grid sizes differ: {n} and {}", g.len())));
    }
    if !n.is_power_of_two() {
        return Err(Error::InvalidGrid(format!("grid size {n} is not a power of two")));
    }
    if !f.is_uniform() || !g.is_uniform() {
        return Err(Error::InvalidGrid("convolution needs uniform grids starting at -π".into()));
    }
    let mut planner = FftPlanner::<f64>::new();
    let forward = planner.plan_fft_forward(n);
    let inverse = planner.plan_fft_inverse(n);
    let mut a: Vec<Complex64> = f.values().iter().map(|&v| Complex64::new(v, 0.0)).collect();
    let mut b: Vec<Complex64> = g.values().iter().map(|&v| Complex64::new(v, 0.0)).collect();
    forward.process(&mut a);
    forward.process(&mut b);
    for (x, y) in a.iter_mut().zip(&b) {
        *x *= y;
    }
    inverse.process(&mut a);
    // both grids start at -π, so the cyclic sum is offset by half a period
    let scale = TAU / (n as f64 * n as f64);
    let values = (0..n)
        .map(|m| (a[(m + n / 2) % n].re * scale).max(0.0))
        .collect();
    DensityGrid::uniform(values)
}

/// `L_r(θ, x) = {(1+r²)² + 4r²(1 - sin(θ-x) sin(θ+x))} cos x - 4r(1+r²) cos θ`.
pub fn l_function(r: f64, theta: f64, x: f64) -> f64 {
    let r2 = r * r;
    let bracket = (1.0 + r2).powi(2) + 4.0 * r2 * (1.0 - (theta - x).sin() * (theta + x).sin());
    bracket * x.cos() - 4.0 * r * (1.0 + r2) * theta.cos()
}

/// Scan step for the zeros of `g_r`.
pub const CRITICAL_SCAN_STEP: f64 = PI / 4096.0;
/// Bisection tolerance for zeros and crossings.
pub const ROOT_TOL: f64 = 1e-10;
/// Samples per period when locating witness crossings.
pub const WITNESS_SCAN: usize = 1 << 14;

/// The measure `a δ_0 + b 1_(0,π) dθ`, `b = (1 - a)/π`, and its Poisson smoothings.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct MuA {
    pub a: f64,
    pub b: f64,
}

/// A level met at least three times by the density of `PK_{r,0} ⊛ μ_a`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ClassicalWitness {
    pub a: f64,
    pub r: f64,
    pub gamma: f64,
    pub alpha: f64,
    pub beta: f64,
    pub f_gamma: f64,
    pub f_alpha: f64,
    pub f_beta: f64,
    pub level: f64,
    pub crossings: Vec<f64>,
}

impl MuA {
    pub fn new(a: f64) -> Result<Self> {
        if !(a > 0.0 && a < 1.0) {
            return Err(Error::Domain(format!("mu_a weight must be in (0, 1), got {a}")));
        }
        Ok(MuA { a, b: (1.0 - a) / PI })
    }

    pub fn measure(&self) -> CircleMeasure {
        CircleMeasure::mu_a(self.a).expect("weight validated on construction")
    }

    /// `f_r(θ) = a p_r(θ) + b ∫_{θ-π}^{θ} p_r`.
    pub fn density(&self, r: f64, theta: f64) -> Result<f64> {
        let rad = check_radius(r)?;
        Ok(self.density_at(rad, theta))
    }

    fn density_at(&self, rad: Radius, theta: f64) -> f64 {
        self.a * pk_at(rad, theta) + self.b * arc_mass(rad, theta - PI, PI)
    }

    /// Numerator of `f_r'`: `f_r' = (1-r²)/(2π) · g_r / (D₋² D₊)` with
    /// `D± = 1 + r² ± 2r cos θ`. Valid for `r ∈ (0, 1]`.
    pub fn g(&self, r: f64, theta: f64) -> f64 {
        let (s, c) = theta.sin_cos();
        let q = 1.0 + r * r;
        let dp = q + 2.0 * r * c;
        let dm = q - 2.0 * r * c;
        -2.0 * r * self.a * s * dp + self.b * dm * dp - self.b * dm * dm
    }

    /// Sign changes of `g_r` in `(-0.1, π/2 + 0.1)`, in increasing order.
    pub fn critical_points(&self, r: f64) -> Vec<f64> {
        let (lo, hi) = (-0.1, FRAC_PI_2 + 0.1);
        let steps = ((hi - lo) / CRITICAL_SCAN_STEP).ceil() as usize;
        let g = |x: f64| self.g(r, x);
        let mut roots = Vec::new();
        let mut x0 = lo;
        let mut g0 = g(x0);
        for k in 1..=steps {
            let x1 = (lo + k as f64 * CRITICAL_SCAN_STEP).min(hi);
            let g1 = g(x1);
            if g0 == 0.0 {
                roots.push(x0);
            } else if g0 * g1 < 0.0 {
                roots.push(bisect(&g, x0, x1, ROOT_TOL));
            }
            x0 = x1;
            g0 = g1;
        }
        roots
    }

    /// Level `h(r) = max{½[f(α)+f(β)], f(β) - (1-r)}` and its crossings.
    pub fn strong_unimodality_witness(&self, r: f64) -> Result<ClassicalWitness> {
        let rad = check_radius(r)?;
        let none = |why: &str| Error::NoWitness(format!("a = {}, r = {r}: {why}", self.a));
        let zeros = self.critical_points(r);
        let [gamma, alpha, beta] = zeros[..] else {
            return Err(none(&format!("g_r has {} zeros, need three", zeros.len())));
        };
        let f = |x: f64| self.density_at(rad, x);
        let (f_gamma, f_alpha, f_beta) = (f(gamma), f(alpha), f(beta));
        if f_gamma <= f_beta {
            return Err(none("f(γ) does not exceed f(β)"));
        }
        let level = (0.5 * (f_alpha + f_beta)).max(f_beta - (1.0 - r));
        let crossings = closed_form_crossings(&f, level);
        if crossings.len() < 3 {
            return Err(none(&format!("level {level} is met only {} times", crossings.len())));
        }
        Ok(ClassicalWitness {
            a: self.a,
            r,
            gamma,
            alpha,
            beta,
            f_gamma,
            f_alpha,
            f_beta,
            level,
            crossings,
        })
    }

    /// `f_r` on the uniform `n`-grid.
    pub fn grid(&self, r: f64, n: usize) -> Result<DensityGrid> {
        convolve_pk(&self.measure(), r, 0.0, n)
    }
}

/// Transversal solutions of `f = level` on `[-π, π)`: sign changes on a dense
/// scan, refined by bisection on `f` itself.
fn closed_form_crossings(f: &impl Fn(f64) -> f64, level: f64) -> Vec<f64> {
    let angles = uniform_angles(WITNESS_SCAN);
    let d: Vec<f64> = angles.iter().map(|&x| f(x) - level).collect();
    let n = angles.len();
    let mut out = Vec::new();
    for k in 0..n {
        let j = (k + 1) % n;
        if d[k] * d[j] < 0.0 {
            let x0 = angles[k];
            let x1 = if j == 0 { PI } else { angles[j] };
            let root = bisect(&|x| f(x) - level, x0, x1, ROOT_TOL);
            out.push(crate::angle::normalize(root));
        }
    }
    out.sort_by(f64::total_cmp);
    out
}

fn bisect(f: &impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, tol: f64) -> f64 {
    let flo = f(lo);
    for _ in 0..200 {
        if hi - lo <= tol {
            break;
        }
        let mid = 0.5 * (lo + hi);
        let fm = f(mid);
        if fm == 0.0 {
            return mid;
        }
        if (fm < 0.0) == (flo < 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Grid size used for figure reproduction.
pub const FIGURE_GRID: usize = 8192;

/// `(r, a)` of the three reference figures `PK_{r,0} ⊛ μ_a`.
pub fn figure_parameters(figure: u8) -> Result<(f64, f64)> {
    match figure {
        1 => Ok((0.99, 0.01)),
        2 => Ok((0.9, 0.01)),
        3 => Ok((0.9, 0.2)),
        _ => Err(Error::Domain(format!("figure must be 1, 2 or 3, got {figure}"))),
    }
}

/// Density of figure `figure` on the [`FIGURE_GRID`]-point grid.
pub fn figure_grid(figure: u8) -> Result<DensityGrid> {
    let (r, a) = figure_parameters(figure)?;
    MuA::new(a)?.grid(r, FIGURE_GRID)
}
