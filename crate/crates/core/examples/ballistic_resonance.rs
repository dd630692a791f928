//! A single atom at the resonant quasimomentum beta = 1/2 spreads
//! ballistically; its distribution is J_n^2(N phi_d).

use std::f64::consts::PI;

use kicked_atoms::analytic::resonant_profile;
use kicked_atoms::quantum::{BlochState, FloquetPropagator};

fn main() {
    let phi = 0.8 * PI;
    let n_max = 160;
    let prop = FloquetPropagator::new(2.0 * PI, phi, n_max);
    let mut state = BlochState::plane_wave(0, 0.5, n_max).unwrap();
    let mut ws = prop.workspace(0.5, n_max);
    println!("{:>4} {:>12} {:>12} {:>10}", "N", "E", "E_exact", "max|dP|");
    for n_kicks in 1..=50 {
        prop.step(&mut state, &mut ws).unwrap();
        if n_kicks % 10 != 0 {
            continue;
        }
        let z = phi * n_kicks as f64;
        let profile = resonant_profile(phi, n_kicks);
        let worst = state
            .iter()
            .map(|(n, c)| (c.norm_sqr() - profile.probability(n)).abs())
            .fold(0.0, f64::max);
        println!(
            "{n_kicks:>4} {:>12.6} {:>12.6} {worst:>10.1e}",
            state.energy(),
            z * z / 4.0 + 0.125
        );
    }
}
