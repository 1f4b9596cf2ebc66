//! Adaptive Gauss–Legendre quadrature.
//!
//! Every interval is integrated with a 16-point rule and compared with the
//! same rule applied to its two halves. Intervals whose halves disagree are
//! bisected again, so refinement concentrates dyadically around near-singular
//! points. Callers pass those points as breakpoints so that each segment has
//! its peak at an endpoint.

use std::ops::{Add, Mul, Sub};
use std::sync::OnceLock;

use num_complex::Complex64;

const ORDER: usize = 16;
/// Maximum bisection depth below a segment.
pub const MAX_DEPTH: u32 = 60;
/// Default relative tolerance, measured against the integral of `|f|`.
pub const DEFAULT_REL_TOL: f64 = 1e-13;

/// Values that can be accumulated by the quadrature rule.
pub trait QuadValue: Copy + Add<Output = Self> + Sub<Output = Self> + Mul<f64, Output = Self> {
    fn zero() -> Self;
    fn magnitude(self) -> f64;
}

impl QuadValue for f64 {
    fn zero() -> Self {
        0.0
    }
    fn magnitude(self) -> f64 {
        self.abs()
    }
}

impl QuadValue for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn magnitude(self) -> f64 {
        self.norm()
    }
}

/// Nodes and weights of the `n`-point Gauss–Legendre rule on `[-1, 1]`,
/// found by Newton iteration on the Legendre recurrence.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1);
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let nf = n as f64;
    for i in 0..n.div_ceil(2) {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            dp = nf * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

fn rule() -> &'static (Vec<f64>, Vec<f64>) {
    static RULE: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    RULE.get_or_init(|| gauss_legendre(ORDER))
}

#[derive(Clone, Copy)]
struct Estimate<T> {
    value: T,
    abs: f64,
}

fn fixed<T: QuadValue, F: Fn(f64) -> T>(f: &F, a: f64, b: f64) -> Estimate<T> {
    let (nodes, weights) = rule();
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    let mut value = T::zero();
    let mut abs = 0.0;
    for (x, w) in nodes.iter().zip(weights) {
        let fx = f(mid + half * x);
        value = value + fx * (w * half);
        abs += fx.magnitude() * w * half.abs();
    }
    Estimate { value, abs }
}

fn refine<T: QuadValue, F: Fn(f64) -> T>(
    f: &F,
    a: f64,
    b: f64,
    whole: Estimate<T>,
    rel_tol: f64,
    depth: u32,
) -> T {
    let m = 0.5 * (a + b);
    let left = fixed(f, a, m);
    let right = fixed(f, m, b);
    let halves = left.value + right.value;
    let scale = left.abs + right.abs;
    let converged = (whole.value - halves).magnitude() <= rel_tol * scale;
    if converged || depth >= MAX_DEPTH || m <= a || m >= b {
        return halves;
    }
    refine(f, a, m, left, rel_tol, depth + 1) + refine(f, m, b, right, rel_tol, depth + 1)
}

/// Integrate `f` over `[a, b]` with the segment split at every breakpoint
/// strictly inside the interval.
pub fn integrate<T: QuadValue, F: Fn(f64) -> T>(
    f: &F,
    a: f64,
    b: f64,
    breakpoints: &[f64],
    rel_tol: f64,
) -> T {
    if b <= a {
        return T::zero();
    }
    let mut cuts: Vec<f64> = breakpoints.iter().copied().filter(|&x| x > a && x < b).collect();
    cuts.sort_by(|x, y| x.total_cmp(y));
    let mut total = T::zero();
    let mut lo = a;
    for hi in cuts.into_iter().chain(std::iter::once(b)) {
        if hi > lo {
            let whole = fixed(f, lo, hi);
            total = total + refine(f, lo, hi, whole, rel_tol, 0);
        }
        lo = hi;
    }
    total
}
