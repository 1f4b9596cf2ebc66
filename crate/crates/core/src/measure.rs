//! Probability measures on the circle made of atoms and piecewise-constant
//! densities, with the kernel integrals the convolution modules consume.

use std::f64::consts::{PI, TAU};

use serde::{Deserialize, Serialize};

use crate::angle::{angular_difference, normalize, normalize_positive, Angle};
use crate::error::{Error, Result};
use crate::kernel::{arc_mass, boundary_arc_integral, Radius};
use crate::quadrature::{self, QuadValue};

/// Tolerance on the total mass accepted by [`CircleMeasure::new`].
pub const MASS_TOLERANCE: f64 = 1e-9;
const MIRROR_TOLERANCE: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Atom {
    pub angle: Angle,
    pub weight: f64,
}

/// Constant density `height` (per radian) on the counterclockwise arc
/// `[start, start + length]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Piece {
    pub start: f64,
    pub length: f64,
    pub height: f64,
}

impl Piece {
    /// Arc from `from` counterclockwise to `to`. `to - from` in `(0, 2π]` is
    /// taken literally, anything else is reduced modulo 2π.
    pub fn between(from: f64, to: f64, height: f64) -> Self {
        let raw = to - from;
        let length = if raw > 0.0 && raw <= TAU {
            raw
        } else {
            normalize_positive(raw)
        };
        Piece {
            start: normalize(from),
            length,
            height,
        }
    }

    pub fn mass(&self) -> f64 {
        self.height * self.length
    }

    fn end(&self) -> f64 {
        self.start + self.length
    }

    /// Whether `x` lies in the closed arc.
    pub fn closure_contains(&self, x: f64) -> bool {
        let d = normalize_positive(x - self.start);
        d <= self.length + 1e-15 || d >= TAU - 1e-15
    }

    fn mirror(&self) -> Piece {
        Piece {
            start: normalize(-self.end()),
            length: self.length,
            height: self.height,
        }
    }
}

/// A probability measure on 𝕋 = [-π, π).
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CircleMeasure {
    atoms: Vec<Atom>,
    pieces: Vec<Piece>,
    symmetric: bool,
}

impl CircleMeasure {
    /// Validate and build a measure. Mass must be one within
    /// [`MASS_TOLERANCE`]; nothing is renormalized.
    pub fn new(atoms: Vec<Atom>, pieces: Vec<Piece>) -> Result<Self> {
        for (i, a) in atoms.iter().enumerate() {
            if !a.weight.is_finite() || a.weight < 0.0 {
                return Err(Error::InvalidMeasure(format!(
                    "atoms[{i}].weight must be a nonnegative number, got {}",
                    a.weight
                )));
            }
            if !a.angle.radians().is_finite() {
                return Err(Error::InvalidMeasure(format!("atoms[{i}].angle is not finite")));
            }
        }
        for (i, p) in pieces.iter().enumerate() {
            if !p.height.is_finite() || p.height < 0.0 {
                return Err(Error::InvalidMeasure(format!(
                    "pieces[{i}].height must be a nonnegative number, got {}",
                    p.height
                )));
            }
            if !(p.length > 0.0 && p.length <= TAU) || !p.start.is_finite() {
                return Err(Error::InvalidMeasure(format!(
                    "pieces[{i}] must have positive arclength, got {}",
                    p.length
                )));
            }
        }
        for i in 0..pieces.len() {
            for j in i + 1..pieces.len() {
                if overlaps(&pieces[i], &pieces[j]) {
                    return Err(Error::InvalidMeasure(format!(
                        "pieces[{i}] and pieces[{j}] overlap"
                    )));
                }
            }
        }
        let mass: f64 =
            atoms.iter().map(|a| a.weight).sum::<f64>() + pieces.iter().map(Piece::mass).sum::<f64>();
        if (mass - 1.0).abs() > MASS_TOLERANCE {
            return Err(Error::InvalidMeasure(format!("total mass is {mass}, expected 1")));
        }
        let symmetric = mirror_invariant(&atoms, &pieces);
        Ok(CircleMeasure {
            atoms,
            pieces,
            symmetric,
        })
    }

    pub fn dirac(angle: f64) -> Self {
        Self::new(
            vec![Atom {
                angle: Angle::new(angle),
                weight: 1.0,
            }],
            vec![],
        )
        .expect("point mass is valid")
    }

    /// Normalized Haar measure.
    pub fn haar() -> Self {
        Self::new(
            vec![],
            vec![Piece {
                start: -PI,
                length: TAU,
                height: 1.0 / TAU,
            }],
        )
        .expect("Haar measure is valid")
    }

    /// Equal atoms at `1` and `-1`.
    pub fn bernoulli() -> Self {
        Self::new(
            vec![
                Atom {
                    angle: Angle::ZERO,
                    weight: 0.5,
                },
                Atom {
                    angle: Angle::MINUS_PI,
                    weight: 0.5,
                },
            ],
            vec![],
        )
        .expect("Bernoulli measure is valid")
    }

    /// Uniform law on `[-phi, phi]`.
    pub fn arc_uniform(phi: f64) -> Result<Self> {
        if !(phi > 0.0 && phi <= PI) {
            return Err(Error::Domain(format!("arc_uniform half-width must be in (0, π], got {phi}")));
        }
        Self::new(
            vec![],
            vec![Piece {
                start: normalize(-phi),
                length: 2.0 * phi,
                height: 1.0 / (2.0 * phi),
            }],
        )
    }

    /// `a δ_0 + b 1_(0,π) dθ` with `a + bπ = 1`.
    pub fn mu_a(a: f64) -> Result<Self> {
        if !(a > 0.0 && a < 1.0) {
            return Err(Error::Domain(format!("mu_a weight must be in (0, 1), got {a}")));
        }
        Self::new(
            vec![Atom {
                angle: Angle::ZERO,
                weight: a,
            }],
            vec![Piece {
                start: 0.0,
                length: PI,
                height: (1.0 - a) / PI,
            }],
        )
    }

    /// Poisson kernel `PK_{r,ψ}` as `m` equal-width constant pieces whose
    /// masses are the exact arc masses of the kernel.
    pub fn poisson_kernel(r: f64, psi: f64, m: usize) -> Result<Self> {
        if !(0.0..1.0).contains(&r) {
            return Err(Error::Domain(format!("Poisson radius must be in [0, 1), got {r}")));
        }
        if m < 2 {
            return Err(Error::Domain("Poisson kernel needs at least two pieces".into()));
        }
        let rad = Radius::new(r);
        let width = TAU / m as f64;
        let pieces = (0..m)
            .map(|j| {
                let start = -PI + j as f64 * width;
                Piece {
                    start,
                    length: width,
                    height: arc_mass(rad, start - psi, width) / width,
                }
            })
            .collect();
        Self::new(vec![], pieces)
    }

    /// Number of pieces [`CircleMeasure::poisson_kernel`] uses by default for radius `r`.
    pub fn default_poisson_pieces(r: f64) -> usize {
        let need = (64.0 / (1.0 - r).max(1e-6)).ceil() as usize;
        need.next_power_of_two().clamp(8192, 1 << 20)
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn pieces(&self) -> &[Piece] {
        &self.pieces
    }

    /// Set when atoms and pieces are invariant under θ ↦ -θ.
    pub fn is_symmetric(&self) -> bool {
        self.symmetric
    }

    pub fn total_mass(&self) -> f64 {
        self.atoms.iter().map(|a| a.weight).sum::<f64>() + self.pieces.iter().map(Piece::mass).sum::<f64>()
    }

    /// Whether the measure lives in the closed arc `[-phi, phi]`.
    pub fn supported_in(&self, phi: f64) -> bool {
        let arc = Piece::between(-phi, phi, 0.0);
        self.atoms
            .iter()
            .filter(|a| a.weight > 0.0)
            .all(|a| arc.closure_contains(a.angle.radians()))
            && self.pieces.iter().filter(|p| p.height > 0.0).all(|p| {
                arc.closure_contains(p.start)
                    && normalize_positive(p.start - arc.start) + p.length <= arc.length + 1e-12
            })
    }

    /// `∫ |1 - r e^{i(θ+x)}|^{-2} dμ(x)` for `0 < r < 1`.
    pub fn poisson_integral(&self, r: f64, theta: f64) -> Result<f64> {
        if !(r > 0.0 && r < 1.0) {
            return Err(Error::Domain(format!("Poisson integral needs r in (0, 1), got {r}")));
        }
        Ok(self.poisson_integral_at(Radius::new(r), theta))
    }

    pub(crate) fn poisson_integral_at(&self, rad: Radius, theta: f64) -> f64 {
        let atoms: f64 = self
            .atoms
            .iter()
            .map(|a| a.weight / rad.denom(theta + a.angle.radians()))
            .sum();
        let scale = TAU / rad.one_minus_sq();
        let pieces: f64 = self
            .pieces
            .iter()
            .map(|p| p.height * scale * arc_mass(rad, theta + p.start, p.length))
            .sum();
        atoms + pieces
    }

    /// `∫ |1 - e^{i(θ+x)}|^{-2} dμ(x)`, `+∞` when an atom sits at `-θ` or a
    /// positive piece has `-θ` in its closure.
    pub fn cauchy_boundary_integral(&self, theta: f64) -> f64 {
        let mut total = 0.0;
        for a in &self.atoms {
            if a.weight == 0.0 {
                continue;
            }
            let s = (0.5 * (theta + a.angle.radians())).sin();
            if s.abs() < 1e-15 {
                return f64::INFINITY;
            }
            total += a.weight / (4.0 * s * s);
        }
        for p in &self.pieces {
            if p.height == 0.0 {
                continue;
            }
            if p.closure_contains(-theta) {
                return f64::INFINITY;
            }
            total += p.height * boundary_arc_integral(theta + p.start, p.length);
        }
        total
    }

    /// `∫ f(x) dμ(x)` for a 2π-periodic `f`; atoms exactly, pieces by
    /// adaptive quadrature split at `peak + 2πk`.
    pub fn integrate<T: QuadValue>(&self, f: impl Fn(f64) -> T, peak: Option<f64>) -> T {
        let mut total = T::zero();
        for a in &self.atoms {
            total = total + f(a.angle.radians()) * a.weight;
        }
        for p in &self.pieces {
            let mut cuts = Vec::new();
            if let Some(x0) = peak {
                let first = p.start + normalize_positive(x0 - p.start);
                let mut c = first;
                while c < p.end() {
                    cuts.push(c);
                    c += TAU;
                }
            }
            let v = quadrature::integrate(&f, p.start, p.end(), &cuts, quadrature::DEFAULT_REL_TOL);
            total = total + v * p.height;
        }
        total
    }

    /// `∫ K(θ + x) dμ(x)` for a kernel that peaks where its argument is a
    /// multiple of 2π.
    pub(crate) fn integrate_shifted<T: QuadValue>(&self, theta: f64, kernel: impl Fn(f64) -> T) -> T {
        self.integrate(|x| kernel(theta + x), Some(-theta))
    }
}

fn overlaps(p: &Piece, q: &Piece) -> bool {
    let eps = 1e-12;
    normalize_positive(q.start - p.start) < p.length - eps
        || normalize_positive(p.start - q.start) < q.length - eps
}

fn mirror_invariant(atoms: &[Atom], pieces: &[Piece]) -> bool {
    let atoms_ok = atoms.iter().filter(|a| a.weight > 0.0).all(|a| {
        atoms.iter().any(|b| {
            angular_difference(a.angle.radians(), -b.angle.radians()).abs() < MIRROR_TOLERANCE
                && (a.weight - b.weight).abs() < MIRROR_TOLERANCE
        })
    });
    let pieces_ok = pieces.iter().filter(|p| p.height > 0.0).all(|p| {
        let m = p.mirror();
        pieces.iter().any(|q| {
            (p.length >= TAU - MIRROR_TOLERANCE && q.length >= TAU - MIRROR_TOLERANCE
                || angular_difference(q.start, m.start).abs() < MIRROR_TOLERANCE)
                && (q.length - m.length).abs() < MIRROR_TOLERANCE
                && (q.height - m.height).abs() < MIRROR_TOLERANCE
        })
    });
    atoms_ok && pieces_ok
}
