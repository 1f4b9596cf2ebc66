//! Density of `μ ⊠ λ_t`, the free multiplicative convolution with the free
//! normal law, through the boundary function `v_{t,μ}` and the boundary
//! homeomorphism `Ψ_{t,μ}`.
//!
//! For `θ` in `U = {θ : ∫|1-e^{i(θ+x)}|^{-2} dμ > 1/t}`, `v(θ)` is the unique
//! `r ∈ (0,1)` with `(1-r²)/(-2 log r) · ∫|1-re^{i(θ+x)}|^{-2} dμ = 1/t`, and
//! `v = 1` off `U`. The density at `-arg Ψ(θ)` is `-log v(θ) / (πt)`.

use std::f64::consts::{PI, TAU};

use rayon::prelude::*;
use serde::Serialize;

use crate::angle::{normalize, Arc};
use crate::density::{uniform_angles, DensityGrid};
use crate::error::{Error, Result};
use crate::kernel::Radius;
use crate::measure::CircleMeasure;
use crate::unimodality::{is_unimodal, Verdict, Witness, DEFAULT_EPS};

/// Relative margin below which a finite boundary integral counts as `1/t`.
pub const U_BOUNDARY_TOL: f64 = 1e-12;
/// Smallest grid accepted by [`free_density`].
pub const MIN_GRID: usize = 256;
/// Grid used by [`support_arcs`] before endpoint refinement.
pub const SUPPORT_SCAN: usize = 4096;

fn check_time(t: f64) -> Result<()> {
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::Domain(format!("time must be positive and finite, got {t}")));
    }
    Ok(())
}

/// Whether `θ` lies in `U_{t,μ}`.
pub fn in_u(t: f64, mu: &CircleMeasure, theta: f64) -> Result<bool> {
    check_time(t)?;
    Ok(in_u_unchecked(t, mu, theta))
}

fn in_u_unchecked(t: f64, mu: &CircleMeasure, theta: f64) -> bool {
    let c = mu.cauchy_boundary_integral(theta);
    c.is_infinite() || c > (1.0 + U_BOUNDARY_TOL) / t
}

/// `(1 - r²) / (-2 log r)` for `r = e^u`.
fn log_ratio(u: f64) -> f64 {
    (2.0 * u).exp_m1() / (2.0 * u)
}

/// `v_{t,μ}(θ)` as a radius carrying its own gap `1 - v`.
fn solve_radius(t: f64, mu: &CircleMeasure, theta: f64) -> Result<Option<Radius>> {
    if !in_u_unchecked(t, mu, theta) {
        return Ok(None);
    }
    let target = 1.0 / t;
    let f = |u: f64| log_ratio(u) * mu.poisson_integral_at(Radius::from_log(u), theta) - target;
    let (mut lo, mut hi) = (-(t + 40.0), -1e-15);
    if f(lo) >= 0.0 {
        return Err(Error::Numerical(format!("v bracket failed at θ = {theta}, t = {t}")));
    }
    if f(hi) <= 0.0 {
        return Ok(None);
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if f(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(Some(Radius::from_log(0.5 * (lo + hi))))
}

/// `v_{t,μ}(θ) ∈ (0, 1]`.
pub fn solve_v(t: f64, mu: &CircleMeasure, theta: f64) -> Result<f64> {
    check_time(t)?;
    Ok(solve_radius(t, mu, theta)?.map_or(1.0, |rad| rad.r))
}

/// `R(θ, r) = (1-r²)/(-2 log r) · ∫|1-re^{i(θ+x)}|^{-2} dμ - 1/t`.
pub fn implicit_residual(t: f64, mu: &CircleMeasure, theta: f64, r: f64) -> Result<f64> {
    check_time(t)?;
    if !(r > 0.0 && r < 1.0) {
        return Err(Error::Domain(format!("radius must be in (0, 1), got {r}")));
    }
    let u = r.ln();
    Ok(log_ratio(u) * mu.poisson_integral_at(Radius::new(r), theta) - 1.0 / t)
}

/// Lifted `arg Ψ_{t,μ}(e^{iθ}) = θ + t ∫ v sin(θ+x) / |1 - v e^{i(θ+x)}|² dμ(x)`.
pub fn arg_psi(t: f64, mu: &CircleMeasure, theta: f64, v: f64) -> f64 {
    arg_psi_at(t, mu, theta, Radius::new(v))
}

fn arg_psi_at(t: f64, mu: &CircleMeasure, theta: f64, rad: Radius) -> f64 {
    let atoms: f64 = mu
        .atoms()
        .iter()
        .map(|a| {
            let y = theta + a.angle.radians();
            a.weight * rad.r * y.sin() / rad.denom(y)
        })
        .sum();
    // v sin y / |1 - v e^{iy}|² = ½ d/dy log|1 - v e^{iy}|²
    let pieces: f64 = mu
        .pieces()
        .iter()
        .map(|p| {
            let y0 = theta + p.start;
            p.height * 0.5 * (rad.denom(y0 + p.length).ln() - rad.denom(y0).ln())
        })
        .sum();
    theta + t * (atoms + pieces)
}

/// Per-angle record of `v`, `U`-membership and the lifted `arg Ψ`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VProfile {
    pub t: f64,
    pub theta: Vec<f64>,
    pub in_u: Vec<bool>,
    pub v: Vec<f64>,
    pub arg_psi: Vec<f64>,
}

impl VProfile {
    /// Profile on the uniform `n`-grid.
    pub fn compute(t: f64, mu: &CircleMeasure, n: usize) -> Result<Self> {
        check_time(t)?;
        if n < 2 {
            return Err(Error::InvalidGrid(format!("profile needs at least two angles, got {n}")));
        }
        let theta = uniform_angles(n);
        let rows: Vec<(bool, f64, f64)> = theta
            .par_iter()
            .map(|&th| {
                let rad = solve_radius(t, mu, th)?;
                let row = match rad {
                    Some(rad) => (true, rad.r, arg_psi_at(t, mu, th, rad)),
                    None => (in_u_unchecked(t, mu, th), 1.0, arg_psi_at(t, mu, th, Radius::new(1.0))),
                };
                Ok(row)
            })
            .collect::<Result<_>>()?;
        let mut in_u = Vec::with_capacity(n);
        let mut v = Vec::with_capacity(n);
        let mut arg = Vec::with_capacity(n);
        for (a, b, c) in rows {
            in_u.push(a);
            v.push(b);
            arg.push(c);
        }
        Ok(VProfile {
            t,
            theta,
            in_u,
            v,
            arg_psi: arg,
        })
    }

    /// `-log v / (πt)` at the conjugate points `-arg Ψ(θ_k)`, sorted cyclically.
    pub fn density_grid(&self) -> Result<DensityGrid> {
        let samples = self
            .arg_psi
            .iter()
            .zip(&self.v)
            .map(|(&a, &v)| (-a, (-v.ln() / (PI * self.t)).max(0.0)))
            .collect();
        DensityGrid::from_unsorted(samples)
    }
}

/// Density of `μ ⊠ λ_t`, sampled at the images of `n` uniform angles.
pub fn free_density(t: f64, mu: &CircleMeasure, n: usize) -> Result<DensityGrid> {
    if n < MIN_GRID {
        return Err(Error::InvalidGrid(format!("free density needs at least {MIN_GRID} angles, got {n}")));
    }
    VProfile::compute(t, mu, n)?.density_grid()
}

/// Components of `U_{t,μ}` as arcs in the `θ` variable, endpoints refined by bisection.
pub fn u_arcs(t: f64, mu: &CircleMeasure, n: usize) -> Result<Vec<Arc>> {
    check_time(t)?;
    let theta = uniform_angles(n);
    let flags: Vec<bool> = theta.par_iter().map(|&th| in_u_unchecked(t, mu, th)).collect();
    if flags.iter().all(|&f| f) {
        return Ok(vec![Arc::full()]);
    }
    let h = TAU / n as f64;
    let edge = |k: usize| {
        // boundary between sample k and k + 1
        let (mut lo, mut hi) = (theta[k], theta[k] + h);
        let inside_lo = flags[k];
        for _ in 0..60 {
            let mid = 0.5 * (lo + hi);
            if in_u_unchecked(t, mu, mid) == inside_lo {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    };
    let mut starts = Vec::new();
    let mut ends = Vec::new();
    for k in 0..n {
        let j = (k + 1) % n;
        if !flags[k] && flags[j] {
            starts.push(edge(k));
        } else if flags[k] && !flags[j] {
            ends.push(edge(k));
        }
    }
    let mut arcs = Vec::with_capacity(starts.len());
    for &s in &starts {
        let e = ends
            .iter()
            .copied()
            .min_by(|a, b| (a - s).rem_euclid(TAU).total_cmp(&(b - s).rem_euclid(TAU)))
            .ok_or_else(|| Error::Numerical("unbalanced U boundary".into()))?;
        arcs.push(Arc::new(s, (e - s).rem_euclid(TAU)));
    }
    arcs.sort_by(|a, b| a.start.total_cmp(&b.start));
    Ok(arcs)
}

/// Closed support of `μ ⊠ λ_t`: images of the closed components of `U`
/// under `θ ↦ -arg Ψ(θ)`.
pub fn support_arcs(t: f64, mu: &CircleMeasure) -> Result<Vec<Arc>> {
    let arcs = u_arcs(t, mu, SUPPORT_SCAN)?;
    if arcs.len() == 1 && arcs[0].is_full() {
        return Ok(arcs);
    }
    let mut out: Vec<Arc> = arcs
        .iter()
        .map(|a| {
            let one = Radius::new(1.0);
            let lo = arg_psi_at(t, mu, a.start, one);
            let hi = arg_psi_at(t, mu, a.start + a.length, one);
            // the map reverses orientation
            Arc::new(-hi, hi - lo)
        })
        .collect();
    out.sort_by(|a, b| a.start.total_cmp(&b.start));
    Ok(out)
}

/// `{θ : |sin θ| < √(t/2)}`, the set `U` of the Bernoulli measure.
pub fn ber_u_closed_form(t: f64) -> Result<Vec<Arc>> {
    check_time(t)?;
    if t >= 2.0 {
        return Ok(vec![Arc::full()]);
    }
    let w = (t / 2.0).sqrt().asin();
    Ok(vec![Arc::new(-w, 2.0 * w), Arc::new(PI - w, 2.0 * w)])
}

/// `Γ_{θ,r}(x) = sin y / |1 - r e^{iy}|⁴` with `y = θ + x`.
pub fn gamma_kernel(r: f64, y: f64) -> f64 {
    let d = Radius::new(r).denom(y);
    y.sin() / (d * d)
}

/// `Ξ_{θ,r}(x)` with `y = θ + x`; negative for every `r ∈ (0, 1)`.
pub fn xi_kernel(r: f64, y: f64) -> f64 {
    xi_at(Radius::new(r), y)
}

/// `(1 - r²) + (1 + r²) log r`, by its Taylor expansion in `g = 1 - r` near 1.
fn xi_slope(rad: Radius) -> f64 {
    let g = rad.gap;
    if g < 0.05 {
        const C: [f64; 9] = [
            -2.0 / 3.0,
            -1.0 / 3.0,
            -7.0 / 30.0,
            -11.0 / 60.0,
            -16.0 / 105.0,
            -11.0 / 84.0,
            -29.0 / 252.0,
            -37.0 / 360.0,
            -46.0 / 495.0,
        ];
        let poly = C.iter().rev().fold(0.0, |acc, &c| acc * g + c);
        poly * g * g * g
    } else {
        let r = rad.r;
        rad.one_minus_sq() + (1.0 + r * r) * (-g).ln_1p()
    }
}

fn xi_at(rad: Radius, y: f64) -> f64 {
    let r = rad.r;
    let log_r = (-rad.gap).ln_1p();
    let s = (0.5 * y).sin();
    // numerator rewritten around cos y = 1 - 2 sin²(y/2)
    let base = -rad.gap * rad.gap * (rad.one_minus_sq() - 2.0 * r * log_r);
    let num = base - 4.0 * r * xi_slope(rad) * s * s;
    let d = rad.denom(y);
    num / (d * d)
}

/// `∫ Γ_{θ,r} dμ`, exact per piece: `∫ sin y / D² = (cos y₀ - cos y₁) / (D₀ D₁)`.
fn gamma_integral(mu: &CircleMeasure, rad: Radius, theta: f64) -> f64 {
    let atoms: f64 = mu
        .atoms()
        .iter()
        .map(|a| {
            let y = theta + a.angle.radians();
            let d = rad.denom(y);
            a.weight * y.sin() / (d * d)
        })
        .sum();
    let pieces: f64 = mu
        .pieces()
        .iter()
        .map(|p| {
            let y0 = theta + p.start;
            let y1 = y0 + p.length;
            let dcos = 2.0 * (0.5 * (y0 + y1)).sin() * (0.5 * p.length).sin();
            p.height * dcos / (rad.denom(y0) * rad.denom(y1))
        })
        .sum();
    atoms + pieces
}

fn xi_integral(mu: &CircleMeasure, rad: Radius, theta: f64) -> f64 {
    mu.integrate_shifted(theta, |y| xi_at(rad, y))
}

/// `dv/dθ = 2v²(1-v²) log v · ∫Γ / ∫Ξ` inside `U`.
pub fn v_derivative(t: f64, mu: &CircleMeasure, theta: f64) -> Result<f64> {
    check_time(t)?;
    let rad = solve_radius(t, mu, theta)?
        .ok_or_else(|| Error::Domain(format!("θ = {theta} is not in U for t = {t}")))?;
    let v = rad.r;
    let log_v = (-rad.gap).ln_1p();
    let num = 2.0 * v * v * rad.one_minus_sq() * log_v * gamma_integral(mu, rad, theta);
    Ok(num / xi_integral(mu, rad, theta))
}

/// The `r_t ∈ (0,1)` solving `(1+r)/(1-r) · (-2 log r) = t`, for `t > 4`.
pub fn r_t_bound(t: f64) -> Result<f64> {
    if !(t > 4.0 && t.is_finite()) {
        return Err(Error::Domain(format!("r_t exists only for t > 4, got {t}")));
    }
    let f = |u: f64| {
        let rad = Radius::from_log(u);
        (1.0 + rad.r) / rad.gap * (-2.0 * u) - t
    };
    // f decreases from +∞ at u = -∞ to 4 - t at u = 0
    let (mut lo, mut hi) = (-t, -1e-15);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if f(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok((0.5 * (lo + hi)).exp())
}

/// `(r_φ, t_φ)` with `r_φ = cos φ / 4` and `t_φ = 2(1+r_φ)/(1-r_φ) · log(1/r_φ)`.
pub fn eventual_threshold(phi: f64) -> Result<(f64, f64)> {
    if !(phi > 0.0 && phi < PI / 2.0) {
        return Err(Error::Domain(format!("φ must be in (0, π/2), got {phi}")));
    }
    let r = phi.cos() / 4.0;
    Ok((r, 2.0 * (1.0 + r) / (1.0 - r) * (1.0 / r).ln()))
}

/// Sign changes of `θ ↦ R(θ, r)` on the uniform `n`-grid, located by bisection.
pub fn level_solutions(t: f64, mu: &CircleMeasure, r: f64, n: usize) -> Result<Vec<f64>> {
    check_time(t)?;
    if !(r > 0.0 && r < 1.0) {
        return Err(Error::Domain(format!("radius must be in (0, 1), got {r}")));
    }
    let rad = Radius::new(r);
    let ratio = log_ratio(r.ln());
    let res = |th: f64| ratio * mu.poisson_integral_at(rad, th) - 1.0 / t;
    let theta = uniform_angles(n);
    let vals: Vec<f64> = theta.par_iter().map(|&th| res(th)).collect();
    let h = TAU / n as f64;
    let mut out = Vec::new();
    for k in 0..n {
        let j = (k + 1) % n;
        if vals[k] * vals[j] < 0.0 {
            let (mut lo, mut hi) = (theta[k], theta[k] + h);
            let neg_lo = vals[k] < 0.0;
            for _ in 0..60 {
                let mid = 0.5 * (lo + hi);
                if (res(mid) < 0.0) == neg_lo {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            out.push(normalize(0.5 * (lo + hi)));
        }
    }
    out.sort_by(f64::total_cmp);
    Ok(out)
}

/// A radius at which the level equation `R(·, r) = 0` has at least three
/// solutions, searched between consecutive turning values of `v` on the grid.
pub fn level_equation_witness(t: f64, mu: &CircleMeasure, n: usize) -> Result<Option<(f64, Vec<f64>)>> {
    let profile = VProfile::compute(t, mu, n)?;
    let v = &profile.v;
    let m = v.len();
    let mut turns = Vec::new();
    let mut last = 0i8;
    let sign = |k: usize| {
        let d = v[(k + 1) % m] - v[k];
        if d > 1e-12 {
            1
        } else if d < -1e-12 {
            -1
        } else {
            0
        }
    };
    if let Some(s) = (0..m).rev().map(sign).find(|&s| s != 0) {
        last = s;
    }
    for (k, &vk) in v.iter().enumerate().take(m) {
        let s = sign(k);
        if s != 0 {
            if s != last {
                turns.push(vk);
            }
            last = s;
        }
    }
    turns.sort_by(f64::total_cmp);
    turns.dedup();
    for w in turns.windows(2) {
        let r = 0.5 * (w[0] + w[1]);
        let sols = level_solutions(t, mu, r, n)?;
        if sols.len() >= 3 {
            return Ok(Some((r, sols)));
        }
    }
    Ok(None)
}

/// A time at which `μ_a ⊠ λ_t` fails to be unimodal, with the witness level.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FreeWitness {
    pub a: f64,
    pub t: f64,
    pub witness: Witness,
}

/// Scan `steps` log-spaced times strictly inside `(t_lo, t_hi)`, largest
/// first, for a non-unimodal `μ_a ⊠ λ_t` on an `n`-point grid.
pub fn free_strong_witness(a: f64, t_lo: f64, t_hi: f64, steps: usize, n: usize) -> Result<Option<FreeWitness>> {
    check_time(t_lo)?;
    check_time(t_hi)?;
    if t_hi <= t_lo || steps == 0 {
        return Err(Error::Domain(format!("bad time range ({t_lo}, {t_hi}) with {steps} steps")));
    }
    let mu = CircleMeasure::mu_a(a)?;
    for k in (1..=steps).rev() {
        let t = t_lo * (t_hi / t_lo).powf(k as f64 / (steps + 1) as f64);
        let report = is_unimodal(&free_density(t, &mu, n)?, DEFAULT_EPS)?;
        if report.verdict == Verdict::NotUnimodal {
            if let Some(witness) = report.witness {
                return Ok(Some(FreeWitness { a, t, witness }));
            }
        }
    }
    Ok(None)
}
