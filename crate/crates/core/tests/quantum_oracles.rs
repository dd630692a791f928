use std::f64::consts::PI;

use kicked_atoms::constants::{CESIUM_D1_KICK_WAVELENGTH, CESIUM_MASS};
use kicked_atoms::quantum::{step, BlochState, FloquetPropagator};
use kicked_atoms::units::{period_to_tau, resonance_info, tau_to_period};
use num_complex::Complex64;
use proptest::prelude::*;

/// Trapezoid-rule Bessel function, independent of the library's recurrence.
fn bessel_oracle(n: i64, x: f64) -> f64 {
    let m = 2048;
    let h = 2.0 * PI / m as f64;
    (0..m)
        .map(|k| {
            let t = k as f64 * h;
            (n as f64 * t - x * t.sin()).cos()
        })
        .sum::<f64>()
        / m as f64
}

fn evolve(beta: f64, tau: f64, phi: f64, kicks: usize, n_max: usize) -> BlochState {
    let prop = FloquetPropagator::new(tau, phi, n_max);
    let mut s = BlochState::plane_wave(0, beta, n_max).unwrap();
    let mut ws = prop.workspace(beta, n_max);
    for _ in 0..kicks {
        prop.step(&mut s, &mut ws).unwrap();
    }
    s
}

#[test]
fn ballistic_resonance_follows_bessel_profile() {
    let phi = 0.8 * PI;
    let n_max = 200;
    let prop = FloquetPropagator::new(2.0 * PI, phi, n_max);
    let mut s = BlochState::plane_wave(0, 0.5, n_max).unwrap();
    let mut ws = prop.workspace(0.5, n_max);
    for n_kicks in 1..=50 {
        prop.step(&mut s, &mut ws).unwrap();
        let z = phi * n_kicks as f64;
        for (n, c) in s.iter() {
            let want = bessel_oracle(n, z).powi(2);
            assert!((c.norm_sqr() - want).abs() < 1e-8, "N = {n_kicks}, n = {n}");
        }
        let e = z * z / 4.0 + 0.125;
        assert!((s.energy() / e - 1.0).abs() < 1e-6, "N = {n_kicks}");
    }
}

#[test]
fn antiresonance_is_period_two_and_parity_symmetric() {
    let n_max = 40;
    let s0 = BlochState::plane_wave(0, 0.0, n_max).unwrap();
    let s1 = step(s0.clone(), 2.0 * PI, 0.8 * PI).unwrap();
    let s2 = step(s1.clone(), 2.0 * PI, 0.8 * PI).unwrap();
    for (a, b) in s0.amplitudes().iter().zip(s2.amplitudes()) {
        assert!((a - b).norm() < 1e-12);
    }
    let p = s1.momentum_distribution();
    for i in 0..p.len() {
        assert!((p[i] - p[p.len() - 1 - i]).abs() < 1e-14);
    }
    assert!(s1.energy() > 0.1);
}

#[test]
fn half_resonance_beta_half_is_ballistic() {
    // tau = 4 pi (r = 2, q = 1): ballistic at beta = 0 and 1/2
    let res = resonance_info(4.0 * PI).unwrap();
    assert_eq!(res.ballistic_betas, vec![0.0, 0.5]);
    for beta in res.ballistic_betas {
        let s = evolve(beta, 4.0 * PI, 1.0, 20, 60);
        let mean = s.mean_momentum();
        let var = 2.0 * s.energy() - mean * mean;
        assert!((var - 200.0).abs() < 1e-7, "beta = {beta}, var = {var}");
    }
}

fn coprime(a: u32, b: u32) -> bool {
    let (mut a, mut b) = (a, b);
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a == 1
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn evolution_is_unitary(
        tau in 0.1f64..20.0,
        phi in 0.0f64..3.0,
        beta in 0.0f64..1.0,
        kicks in 0usize..20,
    ) {
        let n_max = (kicks as f64 * phi + 5.0 * (kicks as f64 * phi).sqrt()) as usize + 16;
        let s = evolve(beta, tau, phi, kicks, n_max);
        prop_assert!((s.norm_sqr() - 1.0).abs() < 1e-10);
        prop_assert_eq!(s.beta().to_bits(), beta.to_bits());
    }

    #[test]
    fn ballistic_energy_for_any_kick_strength(phi in 0.05f64..3.0, kicks in 1usize..=50) {
        let z = phi * kicks as f64;
        let n_max = (z + 8.0 * z.cbrt() + 20.0) as usize;
        let s = evolve(0.5, 2.0 * PI, phi, kicks, n_max);
        prop_assert!((s.energy() / (z * z / 4.0 + 0.125) - 1.0).abs() < 1e-6);
    }

    #[test]
    fn period_round_trip(period in 1e-6f64..1e-3) {
        let tau = period_to_tau(period, CESIUM_D1_KICK_WAVELENGTH, CESIUM_MASS);
        let back = tau_to_period(tau, CESIUM_D1_KICK_WAVELENGTH, CESIUM_MASS);
        prop_assert!((back / period - 1.0).abs() < 1e-12);
    }

    #[test]
    fn resonances_have_two_r_periodic_betas(r in 1u32..20, q in 1u32..20) {
        prop_assume!(coprime(r, q));
        let res = resonance_info(4.0 * PI * r as f64 / q as f64).unwrap();
        prop_assert_eq!((res.r, res.q), (r, q));
        prop_assert_eq!(res.periodic_betas.len(), 2 * r as usize);
        prop_assert_eq!(res.higher_order, q >= 3);
    }

    #[test]
    fn kick_commutes_with_momentum_translation(
        beta in 0.0f64..1.0,
        delta in -3.0f64..3.0,
        phi in 0.1f64..2.0,
    ) {
        let n_max = 48;
        let base = {
            let amps: Vec<Complex64> = (-(n_max as i64)..=n_max as i64)
                .map(|n| {
                    let g = (-(n as f64).powi(2) / 8.0).exp();
                    Complex64::from_polar(g, 0.3 * n as f64)
                })
                .collect();
            let norm = amps.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
            BlochState::from_amplitudes(beta, amps.into_iter().map(|c| c / norm).collect()).unwrap()
        };
        let kick_only = |s: BlochState| step(s, 4.0 * PI, phi).unwrap();
        // tau = 4 pi contributes the phase exp(-2 pi i p^2), which depends on
        // the translation; compare distributions only.
        let mut a = base.clone();
        a.translate(delta).unwrap();
        let a = kick_only(a);
        let mut b = kick_only(base.clone());
        b.translate(delta).unwrap();
        prop_assert_eq!(a.beta().to_bits(), b.beta().to_bits());
        for (x, y) in a.amplitudes().iter().zip(b.amplitudes()) {
            prop_assert!((x.norm_sqr() - y.norm_sqr()).abs() < 1e-10);
        }

        let mut c = base.clone();
        c.translate(delta).unwrap();
        c.translate(-delta).unwrap();
        for (x, y) in c.amplitudes().iter().zip(base.amplitudes()) {
            prop_assert!((x - y).norm() < 1e-12);
        }
    }
}
