//! Away from resonance the energy of a thermal cloud stops growing and the
//! momentum distribution becomes exponential.

use std::f64::consts::PI;

use kicked_atoms::{DimensionlessParams, Ensemble, InitialDistribution, SEModel};

fn main() {
    let init = InitialDistribution::gaussian(6.0);
    let params = DimensionlessParams {
        tau: 2.0 * PI * 1.618,
        n_kicks: 60,
        n_atoms: 2000,
        ..Default::default()
    }
    .with_auto_n_max(init.extent());
    let r = Ensemble::new(params, init, SEModel::none()).run().unwrap();
    for k in (0..=60).step_by(10) {
        let e = &r.energies[k];
        println!("N = {k:>3}  E = {:7.3} +- {:.3}", e.energy, e.stderr);
    }
    let h = &r.histograms[0];
    println!(
        "exponential decay length on |n| <= 20: {:.2}",
        h.exponential_decay_length(20)
    );
}
