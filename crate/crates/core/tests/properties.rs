mod common;

use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, PI, TAU};

use freecirc::classical::{convolve_grids, convolve_pk, l_function, pk_grid, MuA};
use freecirc::free_normal::{
    free_density, implicit_residual, level_equation_witness, solve_v, VProfile,
};
use freecirc::transforms::{eta_derivative_at_zero_grid, eta_transform, moment, symmetry_by_moments};
use freecirc::unimodality::{is_unimodal, level_crossings, Verdict, DEFAULT_EPS};
use freecirc::{CircleMeasure, ComplexPoint, DensityGrid};
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use common::*;

fn cases(n: u32) -> ProptestConfig {
    ProptestConfig {
        cases: n,
        ..ProptestConfig::default()
    }
}

proptest! {
    #![proptest_config(cases(10))]

    #[test]
    fn poisson_integral_averages_to_haar_value(seed in any::<u64>(), r in 0.05f64..0.9) {
        let mu = random_measure(&mut StdRng::seed_from_u64(seed));
        let n = 4096;
        let mean: f64 = (0..n)
            .map(|k| mu.poisson_integral(r, -PI + TAU * k as f64 / n as f64).unwrap())
            .sum::<f64>() / n as f64;
        prop_assert!((mean - 1.0 / (1.0 - r * r)).abs() < 1e-8);
    }

    #[test]
    fn poisson_integral_is_periodic(seed in any::<u64>(), r in 0.05f64..0.99, th in -PI..PI) {
        let mu = random_measure(&mut StdRng::seed_from_u64(seed));
        let a = mu.poisson_integral(r, th).unwrap();
        let b = mu.poisson_integral(r, th + TAU).unwrap();
        prop_assert!((a - b).abs() <= 1e-10 * a);
    }

    #[test]
    fn symmetric_measures_have_even_poisson_integral(seed in any::<u64>(), r in 0.05f64..0.99, th in -PI..PI) {
        let mu = random_symmetric_measure(&mut StdRng::seed_from_u64(seed), 2.5);
        prop_assert!(mu.is_symmetric());
        let a = mu.poisson_integral(r, th).unwrap();
        let b = mu.poisson_integral(r, -th).unwrap();
        prop_assert!((a - b).abs() <= 1e-10 * a);
    }

    #[test]
    fn eta_maps_disk_into_disk(seed in any::<u64>()) {
        let mut rng = StdRng::seed_from_u64(seed);
        let mu = random_measure(&mut rng);
        for _ in 0..20 {
            let z = ComplexPoint::from_polar(rng.gen_range(0.0..0.999), rng.gen_range(-PI..PI));
            let eta = eta_transform(&mu, z).unwrap();
            prop_assert!(eta.norm() < 1.0);
        }
    }

    #[test]
    fn structural_symmetry_gives_real_moments(seed in any::<u64>(), phi in 0.1f64..PI) {
        let mu = random_symmetric_measure(&mut StdRng::seed_from_u64(seed), phi);
        prop_assert!(mu.is_symmetric());
        prop_assert!(symmetry_by_moments(&mu, 32, 1e-9));
    }

    #[test]
    fn convolution_of_symmetric_grids_has_real_moments(seed in any::<u64>()) {
        let mut rng = StdRng::seed_from_u64(seed);
        let f = random_symmetric_unimodal_grid(&mut rng, 512);
        let g = random_symmetric_unimodal_grid(&mut rng, 512);
        let h = convolve_grids(&f, &g).unwrap();
        for n in 1..=16 {
            prop_assert!(h.moment(n).im.abs() < 1e-8);
        }
    }

    #[test]
    fn smoothing_keeps_mass_and_positivity(seed in any::<u64>(), r in 0.01f64..0.99, psi in -PI..PI) {
        let mu = random_measure(&mut StdRng::seed_from_u64(seed));
        let g = convolve_pk(&mu, r, psi, 4096).unwrap();
        prop_assert!((g.mass() - 1.0).abs() < 1e-9);
        prop_assert!(g.values().iter().all(|&p| p > 0.0));
    }

    #[test]
    fn v_solves_the_implicit_equation(seed in any::<u64>(), t in 0.2f64..6.0) {
        let mu = random_measure(&mut StdRng::seed_from_u64(seed));
        let p = VProfile::compute(t, &mu, 256).unwrap();
        for k in 0..p.theta.len() {
            if p.v[k] < 1.0 {
                let res = implicit_residual(t, &mu, p.theta[k], p.v[k]).unwrap();
                prop_assert!(res.abs() < 1e-10, "θ={} v={} R={}", p.theta[k], p.v[k], res);
            } else {
                prop_assert!(!p.in_u[k]);
            }
        }
    }

    #[test]
    fn lifted_arg_psi_is_a_degree_one_homeomorphism(seed in any::<u64>(), t in 0.2f64..6.0) {
        let mu = random_measure(&mut StdRng::seed_from_u64(seed));
        let p = VProfile::compute(t, &mu, 512).unwrap();
        prop_assert!(p.arg_psi.windows(2).all(|w| w[1] > w[0]));
        let first = p.arg_psi[0];
        let wrap = freecirc::free_normal::arg_psi(t, &mu, p.theta[0] + TAU, solve_v(t, &mu, p.theta[0]).unwrap());
        prop_assert!((wrap - first - TAU).abs() < 1e-9);
        prop_assert!(*p.arg_psi.last().unwrap() < first + TAU);
    }

    #[test]
    fn symmetric_measures_have_even_v(seed in any::<u64>(), t in 0.2f64..6.0, th in 0.0f64..PI) {
        let mu = random_symmetric_measure(&mut StdRng::seed_from_u64(seed), 3.0);
        let a = solve_v(t, &mu, th).unwrap();
        let b = solve_v(t, &mu, -th).unwrap();
        prop_assert!((a - b).abs() < 1e-12);
    }

    #[test]
    fn rotation_is_equivariant(k in 0usize..256) {
        let g = pk_grid(0.6, 0.0, 256).unwrap();
        let shift = k as f64 * TAU / 256.0;
        let base = is_unimodal(&g, DEFAULT_EPS).unwrap();
        let rot = is_unimodal(&g.rotate(shift).unwrap(), DEFAULT_EPS).unwrap();
        prop_assert_eq!(base.verdict, rot.verdict);
        prop_assert!(freecirc::normalize(rot.mode - base.mode - shift).abs() < 1e-9);
        prop_assert!(freecirc::normalize(rot.antimode - base.antimode - shift).abs() < 1e-9);
    }

    #[test]
    fn verdict_agrees_with_level_scan(seed in any::<u64>()) {
        let mut rng = StdRng::seed_from_u64(seed);
        let g = if rng.gen_bool(0.5) {
            random_symmetric_unimodal_grid(&mut rng, 512)
        } else {
            convolve_pk(&random_measure(&mut rng), rng.gen_range(0.3..0.95), 0.0, 512).unwrap()
        };
        let rep = is_unimodal(&g, DEFAULT_EPS).unwrap();
        prop_assert!(rep.verdict != Verdict::Indeterminate);
        let (lo, hi) = g.values().iter().fold((f64::INFINITY, 0.0f64), |(a, b), &v| (a.min(v), b.max(v)));
        let most = (1..400)
            .map(|i| level_crossings(&g, lo + (hi - lo) * i as f64 / 400.0).len())
            .max()
            .unwrap();
        let via_witness = rep.witness.as_ref().map_or(0, |w| w.angles.len());
        prop_assert_eq!(rep.verdict == Verdict::Unimodal, most.max(via_witness) <= 2);
    }
}

#[test]
fn first_moment_of_free_density_matches_sigma_transform() {
    for (mu, t) in [
        (CircleMeasure::dirac(0.0), 1.5),
        (CircleMeasure::mu_a(0.3).unwrap(), 0.7),
        (CircleMeasure::arc_uniform(1.0).unwrap(), 3.0),
    ] {
        let g = free_density(t, &mu, 1 << 16).unwrap();
        let d = eta_derivative_at_zero_grid(&g).unwrap();
        let want = moment(&mu, 1) * (-t / 2.0f64).exp();
        assert!((d - want).norm() < 1e-5, "{d} vs {want}");
    }
}

#[test]
fn free_density_is_normalized() {
    let mut rng = StdRng::seed_from_u64(3);
    for _ in 0..5 {
        let mu = random_measure(&mut rng);
        let t = rng.gen_range(0.5..5.0);
        let g = free_density(t, &mu, 1 << 16).unwrap();
        assert!(g.values().iter().all(|&p| p >= 0.0));
        assert!((g.mass() - 1.0).abs() < 1e-6, "t={t}: mass {}", g.mass());
    }
}

#[test]
fn symmetric_unimodal_measures_stay_unimodal() {
    let measures = [
        CircleMeasure::dirac(0.0),
        CircleMeasure::arc_uniform(0.5).unwrap(),
        CircleMeasure::arc_uniform(2.0).unwrap(),
        CircleMeasure::poisson_kernel(0.5, 0.0, 128).unwrap(),
    ];
    for mu in &measures {
        for &t in &[0.1, 0.5, 1.0, 3.0, 6.0] {
            let g = free_density(t, mu, 2048).unwrap();
            let rep = is_unimodal(&g, DEFAULT_EPS).unwrap();
            assert_eq!(rep.runs.len(), 2, "t={t}");
        }
    }
}

#[test]
fn level_equation_matches_density_verdict() {
    let battery: Vec<(CircleMeasure, f64)> = [0.3, 1.0, 3.0]
        .iter()
        .map(|&t| (CircleMeasure::bernoulli(), t))
        .chain([0.02, 0.1, 0.5, 2.0].iter().map(|&t| (CircleMeasure::mu_a(0.05).unwrap(), t)))
        .collect();
    for (mu, t) in &battery {
        let rep = is_unimodal(&free_density(*t, mu, 2048).unwrap(), DEFAULT_EPS).unwrap();
        let level = level_equation_witness(*t, mu, 2048).unwrap();
        assert_eq!(level.is_some(), rep.verdict == Verdict::NotUnimodal, "t={t}");
    }
}

#[test]
fn verdicts_are_stable_in_eps() {
    let grids: Vec<DensityGrid> = vec![
        free_density(1.0, &CircleMeasure::dirac(0.0), 4096).unwrap(),
        free_density(1.0, &CircleMeasure::bernoulli(), 4096).unwrap(),
        free_density(5.35, &CircleMeasure::arc_uniform(FRAC_PI_3).unwrap(), 4096).unwrap(),
        convolve_pk(&CircleMeasure::bernoulli(), 0.6, 0.0, 1024).unwrap(),
        freecirc::classical::figure_grid(1).unwrap(),
        freecirc::classical::figure_grid(2).unwrap(),
        freecirc::classical::figure_grid(3).unwrap(),
    ];
    for g in &grids {
        let base = is_unimodal(g, DEFAULT_EPS).unwrap().verdict;
        for eps in [1e-10, 3e-10, 3e-9, 1e-8] {
            assert_eq!(is_unimodal(g, eps).unwrap().verdict, base, "eps={eps}");
        }
    }
}

#[test]
fn symmetric_grids_have_modes_at_zero_or_pi() {
    let mut rng = StdRng::seed_from_u64(21);
    for _ in 0..20 {
        let g = random_symmetric_unimodal_grid(&mut rng, 512);
        let rep = is_unimodal(&g, DEFAULT_EPS).unwrap();
        let at_axis = rep.mode.abs() < 1e-9 || (rep.mode.abs() - PI).abs() < 1e-9;
        assert!(at_axis || rep.runs.len() == 1, "mode {}", rep.mode);
    }
}

#[test]
fn g_sign_structure_at_the_boundary() {
    let m = MuA::new(0.05).unwrap();
    let z = m.critical_points(1.0);
    let (alpha, beta) = (z[1], z[2]);
    assert!(alpha > 0.0 && alpha < PI / 3.0 && beta > PI / 3.0 && beta < FRAC_PI_2);
    for k in 1..200 {
        let x = PI * k as f64 / 200.0;
        let g = m.g(1.0, x);
        if x > alpha + 1e-6 && x < beta - 1e-6 {
            assert!(g > 0.0, "x={x}");
        } else if (x < alpha - 1e-6) || x > beta + 1e-6 {
            assert!(g < 0.0, "x={x}");
        }
    }
}

#[test]
fn auxiliary_ratio_peaks_at_one_over_27() {
    let f = |x: f64| x.cos().powi(2) * (1.0 - x.cos()) / (1.0 + x.cos()).powi(3);
    let best = (0..=20000).map(|k| FRAC_PI_2 * k as f64 / 20000.0).fold((0.0, 0.0), |acc, x| {
        if f(x) > acc.1 {
            (x, f(x))
        } else {
            acc
        }
    });
    assert!((best.1 - 1.0 / 27.0).abs() < 1e-9);
    assert!((best.0 - PI / 3.0).abs() < 1e-3);
    let m = MuA::new(0.05).unwrap();
    assert!(m.a * m.a / (4.0 * m.b * m.b) < 1.0 / 27.0);
}

#[test]
fn beta_value_tends_to_b() {
    let m = MuA::new(0.05).unwrap();
    let errs: Vec<f64> = [0.99, 0.999, 0.9999]
        .iter()
        .map(|&r| {
            let beta = m.critical_points(r)[2];
            (m.density(r, beta).unwrap() - m.b).abs()
        })
        .collect();
    assert!(errs.windows(2).all(|w| w[1] < w[0]));
    assert!(errs[2] < 1e-3);
}

#[test]
fn l_function_positivity() {
    for i in 1..40 {
        let th = FRAC_PI_2 + (PI - FRAC_PI_2) * i as f64 / 40.0;
        for j in 1..40 {
            let x = FRAC_PI_2 * j as f64 / 40.0;
            for &r in &[0.1, 0.5, 0.9] {
                assert!(l_function(r, th, x) > 0.0);
            }
        }
    }
    for &phi in &[0.3f64, 1.0, 1.4] {
        let r_phi = phi.cos() / 4.0;
        let r = 0.7 * r_phi;
        for i in 1..40 {
            let th = FRAC_PI_2 * i as f64 / 40.0;
            for j in 1..40 {
                let x = phi * j as f64 / 40.0;
                assert!(l_function(r, th, x) >= 4.0 * (1.0 + r * r) * (r_phi - r) - 1e-12);
            }
        }
    }
}

#[test]
fn classical_witness_absent_at_small_radius() {
    let m = MuA::new(0.05).unwrap();
    assert!(m.strong_unimodality_witness(0.3).is_err());
    let g = m.grid(0.3, 4096).unwrap();
    let (lo, hi) = g.values().iter().fold((f64::INFINITY, 0.0f64), |(a, b), &v| (a.min(v), b.max(v)));
    for i in 1..500 {
        assert!(level_crossings(&g, lo + (hi - lo) * i as f64 / 500.0).len() <= 2);
    }
}

#[test]
fn classical_witness_matches_dense_scan() {
    let m = MuA::new(0.05).unwrap();
    let w = m.strong_unimodality_witness(0.99).unwrap();
    let g = m.grid(0.99, 1 << 15).unwrap();
    assert_eq!(level_crossings(&g, w.level).len(), w.crossings.len());
}
