//! The finite detection window makes a noisy ensemble look more energetic
//! than a coherent one, even though the true energies nearly agree.

use kicked_atoms::{
    enhancement_experiment, DetectionWindow, DimensionlessParams, InitialDistribution, RecoilLaw,
};

fn main() {
    let init = InitialDistribution::gaussian(6.0);
    let params = DimensionlessParams {
        n_se_mean: 0.1,
        ..Default::default()
    }
    .with_auto_n_max(init.extent());
    for (label, window) in [
        ("window [-60, 60]", DetectionWindow::default()),
        ("no cuts", DetectionWindow::unbounded()),
    ] {
        let r = enhancement_experiment(&params, &init, RecoilLaw::Uniform, &window).unwrap();
        println!(
            "{label:>16}: E_meas {:6.2} -> {:6.2} (x{:.2}), E_true {:6.2} -> {:6.2}",
            r.e_meas_coherent,
            r.e_meas_noisy,
            r.apparent_gain(),
            r.e_true_coherent,
            r.e_true_noisy
        );
    }
}
