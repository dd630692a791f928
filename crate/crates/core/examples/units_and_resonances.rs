//! Laboratory parameters in kicked-rotor units, and the resonance classes
//! of a few kicking periods.

use std::f64::consts::PI;

use kicked_atoms::constants::{CESIUM_D1_KICK_WAVELENGTH, CESIUM_MASS, EXPERIMENT_DETUNING};
use kicked_atoms::units::{
    compute_phi_d, half_talbot_time, resonance_info, to_dimensionless, PhysicalConfig,
};

fn main() {
    let cfg = PhysicalConfig::default();
    let p = to_dimensionless(&cfg).unwrap();
    println!(
        "T = {:.1} us -> tau = {:.5} = 2pi * {:.5}",
        cfg.period * 1e6,
        p.tau,
        p.tau / (2.0 * PI)
    );
    println!(
        "half-Talbot time {:.3} us, initial FWHM {} hbar G, n_max {}",
        half_talbot_time(CESIUM_D1_KICK_WAVELENGTH, CESIUM_MASS) * 1e6,
        p.initial_fwhm,
        p.n_max
    );
    let phi = compute_phi_d(2.753e9, 500e-9, EXPERIMENT_DETUNING).unwrap();
    println!(
        "Omega = 2.753e9 rad/s, t_p = 500 ns -> phi_d = {:.4} pi",
        phi / PI
    );

    for (label, tau) in [
        ("2 pi", 2.0 * PI),
        ("4 pi", 4.0 * PI),
        ("4 pi / 3", 4.0 * PI / 3.0),
        ("6 pi", 6.0 * PI),
        ("2 pi * 1.618", 2.0 * PI * 1.618),
    ] {
        match resonance_info(tau) {
            Some(r) => println!(
                "tau = {label:>12}: r/q = {}/{}, ballistic beta {:?}{}",
                r.r,
                r.q,
                r.ballistic_betas,
                if r.higher_order {
                    " (higher order)"
                } else {
                    ""
                }
            ),
            None => println!("tau = {label:>12}: not resonant"),
        }
    }
}
