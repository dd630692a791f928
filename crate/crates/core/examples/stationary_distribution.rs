//! The asymptotic distribution at tau = 2 pi and its n^-2 tail.

use std::f64::consts::PI;

use kicked_atoms::analytic::{stationary_distribution, QuadratureSpec};
use kicked_atoms::InitialDistribution;

fn main() {
    let ps = stationary_distribution(
        0.8 * PI,
        &InitialDistribution::gaussian(6.0),
        0..=60,
        &QuadratureSpec::default(),
    )
    .unwrap();
    println!("node doubling shift {:.1e}", ps.max_shift);
    for n in [0, 5, 10, 15, 20, 30, 40, 60] {
        let p = ps.probability(n);
        println!(
            "P_s({n:>2}) = {p:.4e}   n^2 P_s = {:.4}",
            (n * n) as f64 * p
        );
    }
}
