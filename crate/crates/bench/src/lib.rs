//! Shared inputs for the benchmarks.

use freecirc::CircleMeasure;

/// Measures timed by every free and classical benchmark.
pub fn fixtures() -> Vec<(&'static str, CircleMeasure)> {
    vec![
        ("bernoulli", CircleMeasure::bernoulli()),
        ("mu_a_0.05", CircleMeasure::mu_a(0.05).expect("valid weight")),
        ("pk_0.5", CircleMeasure::poisson_kernel(0.5, 0.0, 128).expect("valid radius")),
    ]
}
