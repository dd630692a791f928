use std::f64::consts::PI;

use kicked_atoms::analytic::{
    bessel_j, bessel_j_sequence, resonant_profile, stationary_distribution, stationary_kernel,
    QuadratureSpec,
};
use kicked_atoms::ensemble::InitialDistribution;
use proptest::prelude::*;

/// `J_n(x) = (1/2pi) int_0^{2pi} cos(n t - x sin t) dt` by the trapezoid
/// rule, which converges geometrically for this periodic integrand.
fn bessel_trapezoid(n: i32, x: f64) -> f64 {
    let m = 1024;
    let h = 2.0 * PI / m as f64;
    (0..m)
        .map(|k| {
            let t = k as f64 * h;
            (n as f64 * t - x * t.sin()).cos()
        })
        .sum::<f64>()
        / m as f64
}

// Reference values computed with 30-digit arithmetic.
const FROZEN: &[(i32, f64, f64)] = &[
    (0, 1.0, 0.76519768655796655145),
    (1, 2.5, 0.49709410246427403801),
    (5, 2.5132741228718345, 0.019967221212807143081),
    (10, 3.0, 1.2928351645715883778e-5),
    (2, 30.0, 0.078451246073265348901),
    (50, 75.39822368615503, 0.074830132431491012715),
    (75, 75.39822368615503, 0.11509588642999238405),
    (100, 1.0, 8.4318287896267085492e-189),
    (0, 500.0, -0.034100556880731998265),
    (3, 1000.0, -0.0048274208252039478996),
    (200, 150.0, 8.0577021983968537965e-14),
    (1000, 1200.0, 0.0035826674378828883711),
    (17, -4.5, -2.0557369391569001825e-9),
    (-3, 7.0, 0.16755558799533423603),
];

#[test]
fn bessel_matches_frozen_values() {
    for &(n, x, want) in FROZEN {
        let got = bessel_j(n, x);
        let err = (got - want).abs();
        assert!(
            err <= 1e-12 * want.abs() + 1e-15,
            "J_{n}({x}) = {got:e}, want {want:e}"
        );
    }
}

#[test]
fn bessel_sequence_agrees_with_single_orders() {
    let x = 37.7;
    let seq = bessel_j_sequence(80, x);
    for (n, j) in seq.iter().enumerate() {
        assert!((j - bessel_j(n as i32, x)).abs() < 1e-14);
    }
}

proptest! {
    #[test]
    fn bessel_matches_trapezoid_integral(n in -60i32..=60, x in -80.0f64..80.0) {
        let want = bessel_trapezoid(n, x);
        prop_assert!((bessel_j(n, x) - want).abs() < 1e-11, "J_{}({}) vs {}", n, x, want);
    }

    #[test]
    fn resonant_profile_is_normalized(phi in 0.1f64..3.0, n_kicks in 0usize..60) {
        let prof = resonant_profile(phi, n_kicks);
        let total: f64 = prof.probs.iter().sum();
        prop_assert!((total - 1.0).abs() < 1e-12);
        let z = phi * n_kicks as f64;
        prop_assert!((prof.second_moment() - z * z / 2.0).abs() < 1e-9 * (1.0 + z * z));
    }
}

/// The kernel on the full M x M midpoint grid, without the quarter-grid
/// reduction, with Bessel values from the trapezoid oracle.
fn brute_force_kernel(phi: f64, max_order: usize, m: usize, swap: bool) -> Vec<f64> {
    let h = 2.0 * PI / m as f64;
    let mut k = vec![0.0; max_order + 1];
    for i in 0..m {
        let xi = -PI + (i as f64 + 0.5) * h;
        for j in 0..m {
            let alpha = (j as f64 + 0.5) * h;
            let z = if swap {
                phi * alpha.sin() / xi.sin()
            } else {
                phi * xi.sin() / alpha.sin()
            };
            for (order, acc) in k.iter_mut().enumerate() {
                *acc += bessel_trapezoid(order as i32, z).powi(2);
            }
        }
    }
    k.iter().map(|v| v / (m * m) as f64).collect()
}

#[test]
fn quarter_grid_matches_full_grid() {
    let spec = QuadratureSpec {
        nodes: 64,
        ..Default::default()
    };
    let phi = 0.8 * PI;
    // Trapezoid Bessel values are only accurate for |z| well below 1024;
    // at M = 64 the largest |z| is phi / sin(pi / 64) ~ 51.
    let fast = stationary_kernel(phi, 6, &spec).unwrap();
    let slow = brute_force_kernel(phi, 6, 64, false);
    for (a, b) in fast.iter().zip(&slow) {
        assert!((a - b).abs() < 1e-12, "{a} vs {b}");
    }
}

#[test]
fn kernel_is_normalized_over_all_orders() {
    let spec = QuadratureSpec::default();
    let k = stationary_kernel(0.8 * PI, 2000, &spec).unwrap();
    let total = k[0] + 2.0 * k[1..].iter().sum::<f64>();
    assert!((total - 1.0).abs() < 1e-9, "{total}");
}

#[test]
fn stationary_distribution_is_symmetric_and_converged() {
    let ps = stationary_distribution(
        0.8 * PI,
        &InitialDistribution::gaussian(6.0),
        -40..=40,
        &QuadratureSpec::default(),
    )
    .unwrap();
    assert!(ps.max_shift < 1e-4);
    for n in 0..=40 {
        assert!((ps.probability(n) - ps.probability(-n)).abs() < 1e-14);
    }
    // monotone decay away from the centre for a centred Gaussian h
    for n in 0..40 {
        assert!(ps.probability(n) > ps.probability(n + 1));
    }
}

#[test]
fn swapping_integration_roles_leaves_distribution_unchanged() {
    let h = InitialDistribution::delta();
    let spec = QuadratureSpec::default();
    let a = stationary_distribution(0.8 * PI, &h, -30..=30, &spec).unwrap();
    let b = stationary_distribution(
        0.8 * PI,
        &h,
        -30..=30,
        &QuadratureSpec {
            swap_roles: true,
            ..spec
        },
    )
    .unwrap();
    for n in -30..=30 {
        assert!(
            (a.probability(n) - b.probability(n)).abs() < 1e-4,
            "n = {n}"
        );
    }
}

#[test]
fn delta_and_gaussian_h_agree_far_out() {
    // Convolution with a narrow h only matters near the centre.
    let spec = QuadratureSpec::default();
    let d =
        stationary_distribution(0.8 * PI, &InitialDistribution::delta(), 60..=60, &spec).unwrap();
    let g = stationary_distribution(
        0.8 * PI,
        &InitialDistribution::gaussian(6.0),
        60..=60,
        &spec,
    )
    .unwrap();
    let (pd, pg) = (d.probability(60), g.probability(60));
    assert!((pd / pg - 1.0).abs() < 0.02, "{pd} vs {pg}");
}
