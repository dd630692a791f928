//! Closed forms and quadratures the simulations are checked against.

mod bessel;
mod stationary;

pub use bessel::{bessel_j, bessel_j_fill, bessel_j_sequence};
pub use stationary::{
    stationary_distribution, stationary_kernel, QuadratureSpec, StationaryDistribution,
    CONVERGENCE_TOLERANCE,
};

use serde::Serialize;

/// A distribution over integer momenta.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Profile {
    pub n_min: i64,
    pub probs: Vec<f64>,
}

impl Profile {
    pub fn probability(&self, n: i64) -> f64 {
        let i = n - self.n_min;
        if i >= 0 && (i as usize) < self.probs.len() {
            self.probs[i as usize]
        } else {
            0.0
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, f64)> + '_ {
        self.probs
            .iter()
            .enumerate()
            .map(move |(i, &p)| (self.n_min + i as i64, p))
    }

    pub fn second_moment(&self) -> f64 {
        self.iter().map(|(n, p)| (n * n) as f64 * p).sum()
    }
}

/// Distribution `J_n^2(N phi_d)` of an atom at a ballistic quasimomentum
/// after N kicks from rest.
pub fn resonant_profile(phi_d: f64, n_kicks: usize) -> Profile {
    let z = phi_d * n_kicks as f64;
    let cut = (z + 10.0 * z.cbrt() + 20.0).ceil() as usize;
    let j = bessel_j_sequence(cut, z);
    let probs = (0..2 * cut + 1)
        .map(|i| {
            let n = i as i64 - cut as i64;
            j[n.unsigned_abs() as usize].powi(2)
        })
        .collect();
    Profile {
        n_min: -(cut as i64),
        probs,
    }
}

/// Momentum diffusion coefficient from spontaneous emission, `n_se / 12`.
pub fn diffusion_coefficient(n_se_mean: f64) -> f64 {
    n_se_mean / 12.0
}

/// Ensemble energy gain at resonance, `(D / 2 + phi_d^2 / 4) N`.
pub fn energy_law(phi_d: f64, n_kicks: usize, n_se_mean: f64) -> f64 {
    (diffusion_coefficient(n_se_mean) / 2.0 + phi_d * phi_d / 4.0) * n_kicks as f64
}
