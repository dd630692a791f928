//! A coarse scan of the kicking period, written as CSV to stdout.

use std::f64::consts::PI;

use kicked_atoms::scan::tau_scan;
use kicked_atoms::{DetectionWindow, DimensionlessParams, InitialDistribution, RecoilLaw};

fn main() {
    let init = InitialDistribution::gaussian(6.0);
    let base = DimensionlessParams {
        n_atoms: 500,
        ..Default::default()
    }
    .with_auto_n_max(init.extent());
    let table = tau_scan(
        0.19 * PI,
        6.31 * PI,
        25,
        &base,
        &init,
        RecoilLaw::Uniform,
        &DetectionWindow::default(),
    )
    .unwrap();
    table.write_csv(std::io::stdout().lock()).unwrap();
}
