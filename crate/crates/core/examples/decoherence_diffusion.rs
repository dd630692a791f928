//! Spontaneous emission at resonance: energy growth follows
//! (D/2 + phi_d^2/4) N with D = n_se / 12.

use std::f64::consts::PI;

use kicked_atoms::analytic::energy_law;
use kicked_atoms::{DimensionlessParams, Ensemble, InitialDistribution, RecoilLaw, SEModel};

fn main() {
    let init = InitialDistribution::gaussian(6.0);
    for n_se in [0.0, 0.1, 0.5] {
        let params = DimensionlessParams {
            n_se_mean: n_se,
            n_atoms: 3000,
            ..Default::default()
        }
        .with_auto_n_max(init.extent());
        let se = SEModel::new(n_se, RecoilLaw::Uniform).unwrap();
        let r = Ensemble::new(params, init.clone(), se).run().unwrap();
        let slope = r.energy_slope(0, 30);
        let law = energy_law(0.8 * PI, 1, n_se);
        println!("n_se = {n_se:.2}: slope {slope:.4}, law {law:.4}");
    }
}
