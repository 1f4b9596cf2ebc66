#![allow(dead_code)]

use std::f64::consts::{PI, TAU};

use freecirc::{Angle, Atom, CircleMeasure, DensityGrid, Piece};
use rand::rngs::StdRng;
use rand::Rng;

/// Random probability measure with up to three atoms and three disjoint pieces.
pub fn random_measure(rng: &mut StdRng) -> CircleMeasure {
    let n_atoms = rng.gen_range(0..=3);
    let n_pieces = if n_atoms == 0 { rng.gen_range(1..=3) } else { rng.gen_range(0..=3) };
    let mut cuts: Vec<f64> = (0..2 * n_pieces).map(|_| rng.gen_range(-PI..PI)).collect();
    cuts.sort_by(f64::total_cmp);
    let mut atoms: Vec<(f64, f64)> = (0..n_atoms)
        .map(|_| (rng.gen_range(-PI..PI), rng.gen_range(0.1..1.0)))
        .collect();
    let mut pieces: Vec<(f64, f64, f64)> = cuts
        .chunks(2)
        .filter(|c| c[1] - c[0] > 1e-3)
        .map(|c| (c[0], c[1], rng.gen_range(0.1..1.0)))
        .collect();
    if atoms.is_empty() && pieces.is_empty() {
        atoms.push((rng.gen_range(-PI..PI), 1.0));
    }
    let total: f64 = atoms.iter().map(|a| a.1).sum::<f64>() + pieces.iter().map(|p| (p.1 - p.0) * p.2).sum::<f64>();
    for a in &mut atoms {
        a.1 /= total;
    }
    for p in &mut pieces {
        p.2 /= total;
    }
    CircleMeasure::new(
        atoms
            .into_iter()
            .map(|(x, w)| Atom {
                angle: Angle::new(x),
                weight: w,
            })
            .collect(),
        pieces.into_iter().map(|(a, b, h)| Piece::between(a, b, h)).collect(),
    )
    .expect("random measure is valid")
}

/// Random symmetric probability measure supported in `[-phi, phi]`.
pub fn random_symmetric_measure(rng: &mut StdRng, phi: f64) -> CircleMeasure {
    let mut atoms = Vec::new();
    let mut pieces = Vec::new();
    if rng.gen_bool(0.5) {
        atoms.push((0.0, rng.gen_range(0.1..1.0)));
    }
    for _ in 0..rng.gen_range(0..=2) {
        let x = rng.gen_range(0.0..phi);
        let w = rng.gen_range(0.1..1.0);
        atoms.push((x, w));
        atoms.push((-x, w));
    }
    if rng.gen_bool(0.5) || atoms.is_empty() {
        let (mut a, mut b) = (rng.gen_range(0.0..phi), rng.gen_range(0.0..phi));
        if a > b {
            std::mem::swap(&mut a, &mut b);
        }
        let h = rng.gen_range(0.1..1.0);
        if a < 1e-3 {
            pieces.push((-b, b, h));
        } else if b - a > 1e-3 {
            pieces.push((a, b, h));
            pieces.push((-b, -a, h));
        }
    }
    if atoms.is_empty() && pieces.is_empty() {
        atoms.push((0.0, 1.0));
    }
    let total: f64 = atoms.iter().map(|a| a.1).sum::<f64>() + pieces.iter().map(|p| (p.1 - p.0) * p.2).sum::<f64>();
    CircleMeasure::new(
        atoms
            .into_iter()
            .map(|(x, w)| Atom {
                angle: Angle::new(x),
                weight: w / total,
            })
            .collect(),
        pieces.into_iter().map(|(a, b, h)| Piece::between(a, b, h / total)).collect(),
    )
    .expect("random symmetric measure is valid")
}

/// Random symmetric unimodal density on the uniform `n`-grid: a mixture of
/// centred Poisson kernels and tents, possibly flipped to peak at π.
pub fn random_symmetric_unimodal_grid(rng: &mut StdRng, n: usize) -> DensityGrid {
    let h = TAU / n as f64;
    let flip = rng.gen_bool(0.3);
    let mut values = vec![0.0; n];
    for _ in 0..rng.gen_range(1..=3) {
        let w = rng.gen_range(0.1..1.0);
        if rng.gen_bool(0.5) {
            let r: f64 = rng.gen_range(0.05..0.95);
            for (k, v) in values.iter_mut().enumerate() {
                let th = -PI + k as f64 * h;
                *v += w * (1.0 - r * r) / (TAU * (1.0 - 2.0 * r * th.cos() + r * r));
            }
        } else {
            let width: f64 = rng.gen_range(0.2..PI);
            for (k, v) in values.iter_mut().enumerate() {
                let th = -PI + k as f64 * h;
                *v += w * (1.0 - th.abs() / width).max(0.0) / width;
            }
        }
    }
    if rng.gen_bool(0.3) {
        let floor = rng.gen_range(0.0..0.2);
        for v in &mut values {
            *v += floor;
        }
    }
    if flip {
        values.rotate_left(n / 2);
    }
    let mass: f64 = values.iter().sum::<f64>() * h;
    DensityGrid::uniform(values.into_iter().map(|v| v / mass).collect()).expect("valid grid")
}

/// Values at `θ` and `-θ` on a uniform grid starting at `-π` agree.
pub fn uniform_grid_is_even(g: &DensityGrid, tol: f64) -> bool {
    let n = g.len();
    let v = g.values();
    (1..n).all(|k| (v[k] - v[n - k]).abs() <= tol)
}

/// For every sample there is one at the mirrored angle with the same value.
pub fn grid_is_even(g: &DensityGrid, angle_tol: f64, value_tol: f64) -> bool {
    let (a, v) = (g.angles(), g.values());
    (0..g.len()).all(|k| {
        let j = nearest(a, -a[k]);
        freecirc::normalize(a[j] + a[k]).abs() <= angle_tol && (v[j] - v[k]).abs() <= value_tol
    })
}

/// Index of the sample of a sorted angle list nearest to `x` (cyclically).
pub fn nearest(angles: &[f64], x: f64) -> usize {
    let x = freecirc::normalize(x);
    let n = angles.len();
    let i = angles.partition_point(|&a| a < x);
    let cands = [(i + n - 1) % n, i % n, (i + 1) % n];
    cands
        .into_iter()
        .min_by(|&p, &q| {
            freecirc::normalize(angles[p] - x)
                .abs()
                .total_cmp(&freecirc::normalize(angles[q] - x).abs())
        })
        .unwrap()
}

/// Whether sample `k` exceeds both cyclic neighbours.
pub fn strict_local_max(values: &[f64], k: usize) -> bool {
    let n = values.len();
    values[k] > values[(k + n - 1) % n] && values[k] > values[(k + 1) % n]
}

pub fn strict_local_min(values: &[f64], k: usize) -> bool {
    let n = values.len();
    values[k] < values[(k + n - 1) % n] && values[k] < values[(k + 1) % n]
}
