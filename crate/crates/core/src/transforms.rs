//! Moment-generating (ψ), η and Σ transforms evaluated pointwise in the disk.

use num_complex::Complex64;

use crate::density::DensityGrid;
use crate::error::{Error, Result};
use crate::measure::CircleMeasure;

/// A point of the complex plane; transform inputs must lie in the open disk.
pub type ComplexPoint = Complex64;

/// Step of the central difference used for `η'(0)`.
pub const ETA_DERIVATIVE_STEP: f64 = 1e-5;

fn check_disk(z: ComplexPoint) -> Result<()> {
    if !(z.norm() < 1.0) {
        return Err(Error::Domain(format!("transform argument must satisfy |z| < 1, got {z}")));
    }
    Ok(())
}

/// `ψ_μ(z) = ∫ ξz / (1 - ξz) dμ(ξ)`.
pub fn psi_transform(mu: &CircleMeasure, z: ComplexPoint) -> Result<ComplexPoint> {
    check_disk(z)?;
    let kernel = |x: f64| {
        let w = Complex64::from_polar(1.0, x) * z;
        w / (1.0 - w)
    };
    // |1 - ξz| is smallest where ξz is real and positive
    let peak = if z.norm() > 0.0 { Some(-z.arg()) } else { None };
    Ok(mu.integrate(kernel, peak))
}

/// `η_μ = ψ_μ / (1 + ψ_μ)`.
pub fn eta_transform(mu: &CircleMeasure, z: ComplexPoint) -> Result<ComplexPoint> {
    eta_from_psi(psi_transform(mu, z)?)
}

fn eta_from_psi(psi: ComplexPoint) -> Result<ComplexPoint> {
    let den = 1.0 + psi;
    if den.norm() < 1e-14 {
        return Err(Error::Numerical("1 + ψ(z) vanishes".into()));
    }
    Ok(psi / den)
}

/// `∫ e^{inθ} dμ(θ)`, exact for atoms and constant pieces.
pub fn moment(mu: &CircleMeasure, n: u32) -> ComplexPoint {
    if n == 0 {
        return Complex64::new(1.0, 0.0);
    }
    let nf = n as f64;
    let atoms: Complex64 = mu
        .atoms()
        .iter()
        .map(|a| Complex64::from_polar(a.weight, nf * a.angle.radians()))
        .sum();
    let pieces: Complex64 = mu
        .pieces()
        .iter()
        .map(|p| {
            let e0 = Complex64::from_polar(1.0, nf * p.start);
            let e1 = Complex64::from_polar(1.0, nf * (p.start + p.length));
            (e1 - e0) / Complex64::new(0.0, nf) * p.height
        })
        .sum();
    atoms + pieces
}

/// `Σ_{λ_t}(z) = exp[(t/2)(1+z)/(1-z)]`.
pub fn sigma_lambda(t: f64, z: ComplexPoint) -> Result<ComplexPoint> {
    check_disk(z)?;
    Ok((0.5 * t * (1.0 + z) / (1.0 - z)).exp())
}

/// `Σ_{ρ_t}(z) = exp[(t/2)∫(1+ξz)/(1-ξz) dμ(ξ)]`, using `(1+w)/(1-w) = 1 + 2w/(1-w)`.
pub fn sigma_rho(t: f64, mu: &CircleMeasure, z: ComplexPoint) -> Result<ComplexPoint> {
    let psi = psi_transform(mu, z)?;
    Ok((0.5 * t * (1.0 + 2.0 * psi)).exp())
}

/// True iff `|Im m_n| ≤ tol` for `1 ≤ n ≤ max_order`.
pub fn symmetry_by_moments(mu: &CircleMeasure, max_order: u32, tol: f64) -> bool {
    (1..=max_order).all(|n| moment(mu, n).im.abs() <= tol)
}

/// Central difference `(η(h) - η(-h)) / 2h` on the real axis.
pub fn eta_derivative_at_zero(mu: &CircleMeasure) -> Result<ComplexPoint> {
    let h = ETA_DERIVATIVE_STEP;
    let plus = eta_transform(mu, Complex64::new(h, 0.0))?;
    let minus = eta_transform(mu, Complex64::new(-h, 0.0))?;
    Ok((plus - minus) / (2.0 * h))
}

/// `ψ` of a sampled density, by the cyclic trapezoid rule.
pub fn psi_transform_grid(grid: &DensityGrid, z: ComplexPoint) -> Result<ComplexPoint> {
    check_disk(z)?;
    let n = grid.len();
    let term = |k: usize| {
        let w = Complex64::from_polar(1.0, grid.angles()[k]) * z;
        w / (1.0 - w) * grid.values()[k]
    };
    Ok((0..n).map(|k| (term(k) + term((k + 1) % n)) * (0.5 * grid.step(k))).sum())
}

/// Central-difference `η'(0)` of a sampled density.
pub fn eta_derivative_at_zero_grid(grid: &DensityGrid) -> Result<ComplexPoint> {
    let h = ETA_DERIVATIVE_STEP;
    let plus = eta_from_psi(psi_transform_grid(grid, Complex64::new(h, 0.0))?)?;
    let minus = eta_from_psi(psi_transform_grid(grid, Complex64::new(-h, 0.0))?)?;
    Ok((plus - minus) / (2.0 * h))
}
