//! Unimodality verdicts for sampled circular densities.
//!
//! A density is unimodal when its cyclic sequence of samples splits into at
//! most one nondecreasing and one nonincreasing run. Otherwise some level is
//! met at least three times, and that level is reported as a witness.

use serde::{Deserialize, Serialize};

use std::f64::consts::TAU;

use crate::angle::{normalize, normalize_positive};
use crate::density::DensityGrid;
use crate::error::{Error, Result};

/// Steps smaller than `DEFAULT_EPS · max|p|` count as flat.
pub const DEFAULT_EPS: f64 = 1e-9;
/// Minimum number of samples accepted by [`monotone_runs`].
pub const MIN_SAMPLES: usize = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Unimodal,
    NotUnimodal,
    Indeterminate,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    Nondecreasing,
    Nonincreasing,
    Flat,
}

/// A maximal monotone stretch from sample `start` to sample `end`, counterclockwise.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Run {
    pub start: f64,
    pub end: f64,
    pub direction: Direction,
}

/// A level met transversally at least three times.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Witness {
    pub level: f64,
    pub angles: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct UnimodalityReport {
    pub verdict: Verdict,
    pub mode: f64,
    pub antimode: f64,
    pub runs: Vec<Run>,
    pub witness: Option<Witness>,
}

/// Flat form of a report, as printed by the command line tool.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportRecord {
    pub verdict: Verdict,
    pub mode: f64,
    pub antimode: f64,
    pub runs: usize,
    pub witness_level: Option<f64>,
    pub witness_angles: Vec<f64>,
    pub numerical: bool,
}

impl UnimodalityReport {
    pub fn record(&self) -> ReportRecord {
        ReportRecord {
            verdict: self.verdict,
            mode: self.mode,
            antimode: self.antimode,
            runs: self.runs.len(),
            witness_level: self.witness.as_ref().map(|w| w.level),
            witness_angles: self.witness.as_ref().map(|w| w.angles.clone()).unwrap_or_default(),
            numerical: true,
        }
    }
}

/// Signs of the cyclic steps `p[k+1] - p[k]`, zero when below the flatness threshold.
fn step_signs(values: &[f64], eps: f64) -> Vec<i8> {
    let n = values.len();
    let scale = values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let thr = eps * scale;
    (0..n)
        .map(|k| {
            let d = values[(k + 1) % n] - values[k];
            if d > thr {
                1
            } else if d < -thr {
                -1
            } else {
                0
            }
        })
        .collect()
}

/// Maximal cyclic monotone runs; flat steps join the run they follow.
pub fn monotone_runs(grid: &DensityGrid, eps: f64) -> Result<Vec<Run>> {
    let n = grid.len();
    if n < MIN_SAMPLES {
        return Err(Error::InvalidGrid(format!(
            "need at least {MIN_SAMPLES} samples for a run decomposition, got {n}"
        )));
    }
    let signs = step_signs(grid.values(), eps);
    let angles = grid.angles();
    let Some(first) = signs.iter().position(|&s| s != 0) else {
        return Ok(vec![Run {
            start: angles[0],
            end: angles[0],
            direction: Direction::Flat,
        }]);
    };
    // start at a step whose sign differs from the previous nonzero one
    let prev_nonzero = |k: usize| {
        (1..=n)
            .map(|d| signs[(k + n - d) % n])
            .find(|&s| s != 0)
            .unwrap_or(0)
    };
    let start = (0..n)
        .map(|d| (first + d) % n)
        .find(|&k| signs[k] != 0 && prev_nonzero(k) != signs[k])
        .unwrap_or(first);
    let direction = |s: i8| {
        if s > 0 {
            Direction::Nondecreasing
        } else {
            Direction::Nonincreasing
        }
    };
    let mut runs = Vec::new();
    let mut current = signs[start];
    let mut run_start = start;
    for d in 1..n {
        let k = (start + d) % n;
        if signs[k] != 0 && signs[k] != current {
            runs.push(Run {
                start: angles[run_start],
                end: angles[k],
                direction: direction(current),
            });
            current = signs[k];
            run_start = k;
        }
    }
    runs.push(Run {
        start: angles[run_start],
        end: angles[start],
        direction: direction(current),
    });
    Ok(runs)
}

/// Transversal crossings of `level` along the cyclic grid, located by linear
/// interpolation. Samples equal to the level are skipped, so touching
/// without a sign change is not a crossing.
pub fn level_crossings(grid: &DensityGrid, level: f64) -> Vec<f64> {
    let (angles, values) = (grid.angles(), grid.values());
    let off: Vec<usize> = (0..values.len()).filter(|&k| values[k] != level).collect();
    let m = off.len();
    let mut out = Vec::new();
    for i in 0..m {
        let (k, j) = (off[i], off[(i + 1) % m]);
        let (a, b) = (values[k] - level, values[j] - level);
        if a * b >= 0.0 {
            continue;
        }
        let span = match normalize_positive(angles[j] - angles[k]) {
            0.0 => TAU,
            s => s,
        };
        // an exact hit between the two samples sits in the middle of the contact
        let adjacent = j == (k + 1) % values.len();
        let w = if adjacent { a / (a - b) } else { 0.5 };
        out.push(normalize(angles[k] + w * span));
    }
    out.sort_by(f64::total_cmp);
    out
}

/// Values at the turning points of the thresholded step sequence.
fn extremum_values(values: &[f64], eps: f64) -> Vec<f64> {
    let n = values.len();
    let signs = step_signs(values, eps);
    let mut out = Vec::new();
    let mut last = 0i8;
    // seed with the last nonzero sign so the wraparound turn is seen
    if let Some(&s) = signs.iter().rev().find(|&&s| s != 0) {
        last = s;
    }
    for k in 0..n {
        let s = signs[k];
        if s != 0 {
            if s != last {
                out.push(values[k]);
            }
            last = s;
        }
    }
    out
}

/// First level, midway between consecutive sorted extremum values, that is
/// crossed at least three times.
pub fn nonunimodality_witness(grid: &DensityGrid) -> Option<Witness> {
    nonunimodality_witness_eps(grid, DEFAULT_EPS)
}

pub fn nonunimodality_witness_eps(grid: &DensityGrid, eps: f64) -> Option<Witness> {
    let mut ext = extremum_values(grid.values(), eps);
    ext.sort_by(f64::total_cmp);
    ext.dedup();
    ext.windows(2).find_map(|w| {
        let level = 0.5 * (w[0] + w[1]);
        let angles = level_crossings(grid, level);
        (angles.len() >= 3).then_some(Witness { level, angles })
    })
}

/// Midpoint of the cyclic block of samples around `idx` whose values stay
/// within `thr` of `values[idx]`.
fn block_midpoint(grid: &DensityGrid, idx: usize, thr: f64) -> f64 {
    let (angles, values) = (grid.angles(), grid.values());
    let n = values.len();
    let target = values[idx];
    let near = |k: usize| (values[k] - target).abs() <= thr;
    let mut lo = 0;
    while lo < n - 1 && near((idx + n - lo - 1) % n) {
        lo += 1;
    }
    let mut hi = 0;
    while hi < n - 1 - lo && near((idx + hi + 1) % n) {
        hi += 1;
    }
    let a = angles[(idx + n - lo) % n];
    let b = angles[(idx + hi) % n];
    normalize(a + 0.5 * normalize_positive(b - a))
}

/// Full unimodality report.
///
/// The mode and antimode are the midpoints of the plateaus holding the
/// largest and smallest samples; a flat grid takes both at its first angle.
pub fn is_unimodal(grid: &DensityGrid, eps: f64) -> Result<UnimodalityReport> {
    let runs = monotone_runs(grid, eps)?;
    let values = grid.values();
    let scale = values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let thr = eps * scale;
    let argmax = (0..values.len()).fold(0, |b, k| if values[k] > values[b] { k } else { b });
    let argmin = (0..values.len()).fold(0, |b, k| if values[k] < values[b] { k } else { b });
    let (mode, antimode) = if runs.len() == 1 && runs[0].direction == Direction::Flat {
        (grid.angles()[0], grid.angles()[0])
    } else {
        (block_midpoint(grid, argmax, thr), block_midpoint(grid, argmin, thr))
    };
    let (verdict, witness) = if runs.len() <= 2 {
        (Verdict::Unimodal, None)
    } else {
        match nonunimodality_witness_eps(grid, eps) {
            Some(w) => (Verdict::NotUnimodal, Some(w)),
            None => (Verdict::Indeterminate, None),
        }
    };
    Ok(UnimodalityReport {
        verdict,
        mode,
        antimode,
        runs,
        witness,
    })
}
