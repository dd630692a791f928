//! Asymptotic momentum distribution at the tau = 2 pi resonance.
//!
//! ```text
//! P_s(n) = sum_n' h(n') K(n - n'),
//! K(k)   = int_{-pi}^{pi} dxi/2pi int_0^{2pi} dalpha/2pi J_k^2(phi_d sin(xi) csc(alpha))
//! ```
//!
//! Both axes use the midpoint rule. With M nodes (M divisible by 4) the
//! nodes avoid the csc singularities at alpha = 0, pi, and the sets of
//! |sin| values on each axis are four copies of the first quadrant, so the
//! sum is evaluated on an (M/4) x (M/4) grid.

use std::f64::consts::PI;
use std::ops::RangeInclusive;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::bessel::bessel_j_fill;
use crate::ensemble::InitialDistribution;
use crate::error::{Error, Result};

/// Largest change of any P_s(n) under node doubling that counts as converged.
pub const CONVERGENCE_TOLERANCE: f64 = 1e-4;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureSpec {
    /// Midpoint nodes per axis; at least 64 and divisible by 4.
    pub nodes: usize,
    /// Orders above this count only where the argument exceeds half the order.
    pub order_cutoff: usize,
    /// Integrate `J_k^2(phi_d sin(alpha) csc(xi))` instead.
    pub swap_roles: bool,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec {
            nodes: 512,
            order_cutoff: 200,
            swap_roles: false,
        }
    }
}

impl QuadratureSpec {
    pub fn validate(&self) -> Result<()> {
        if self.nodes < 64 || self.nodes % 4 != 0 {
            return Err(Error::invalid(
                "nodes",
                format!("need at least 64 nodes, divisible by 4; got {}", self.nodes),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StationaryDistribution {
    pub phi_d: f64,
    pub n_min: i64,
    pub probs: Vec<f64>,
    pub spec: QuadratureSpec,
    /// Largest |P(n)| change between `nodes` and `2 nodes`.
    pub max_shift: f64,
}

impl StationaryDistribution {
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
}

/// `K(k)` for `k = 0..=max_order` on an M-node midpoint grid.
pub fn stationary_kernel(phi_d: f64, max_order: usize, spec: &QuadratureSpec) -> Result<Vec<f64>> {
    spec.validate()?;
    let quarter = spec.nodes / 4;
    let h = 2.0 * PI / spec.nodes as f64;
    let sines: Vec<f64> = (0..quarter).map(|i| ((i as f64 + 0.5) * h).sin()).collect();

    let rows: Vec<Vec<f64>> = sines
        .par_iter()
        .map(|&s_outer| {
            let mut row = vec![0.0; max_order + 1];
            let mut buf = vec![0.0; max_order + 1];
            for &s_inner in &sines {
                // sin(xi) csc(alpha), or with the roles of the axes exchanged
                let z = if spec.swap_roles {
                    phi_d * s_inner / s_outer
                } else {
                    phi_d * s_outer / s_inner
                };
                let top = if max_order > spec.order_cutoff {
                    max_order.min(spec.order_cutoff.max((2.0 * z).ceil() as usize))
                } else {
                    max_order
                };
                bessel_j_fill(z, &mut buf[..=top]);
                for (acc, j) in row.iter_mut().zip(&buf[..=top]) {
                    *acc += j * j;
                }
            }
            row
        })
        .collect();

    let mut kernel = vec![0.0; max_order + 1];
    for row in &rows {
        kernel.iter_mut().zip(row).for_each(|(k, r)| *k += r);
    }
    let w = 1.0 / (quarter * quarter) as f64;
    kernel.iter_mut().for_each(|k| *k *= w);
    Ok(kernel)
}

fn convolve(kernel: &[f64], weights: &[(i64, f64)], n_range: &RangeInclusive<i64>) -> Vec<f64> {
    n_range
        .clone()
        .map(|n| {
            weights
                .iter()
                .map(|&(m, w)| w * kernel[(n - m).unsigned_abs() as usize])
                .sum()
        })
        .collect()
}

/// Stationary distribution over `n_range` for initial bin weights from `h`.
///
/// The quadrature runs at `spec.nodes` and at twice that; the finer result
/// is returned, and a change above [`CONVERGENCE_TOLERANCE`] at any n is an
/// error.
pub fn stationary_distribution(
    phi_d: f64,
    h: &InitialDistribution,
    n_range: RangeInclusive<i64>,
    spec: &QuadratureSpec,
) -> Result<StationaryDistribution> {
    spec.validate()?;
    h.validate()?;
    if n_range.is_empty() {
        return Err(Error::invalid("n_range", "empty momentum range"));
    }
    let weights = h.bin_weights();
    let (lo, hi) = (*n_range.start(), *n_range.end());
    let max_order = weights
        .iter()
        .map(|&(m, _)| (lo - m).unsigned_abs().max((hi - m).unsigned_abs()))
        .max()
        .unwrap_or(0) as usize;

    let coarse = convolve(
        &stationary_kernel(phi_d, max_order, spec)?,
        &weights,
        &n_range,
    );
    let fine_spec = QuadratureSpec {
        nodes: 2 * spec.nodes,
        ..*spec
    };
    let fine = convolve(
        &stationary_kernel(phi_d, max_order, &fine_spec)?,
        &weights,
        &n_range,
    );

    let (worst, max_shift) = coarse
        .iter()
        .zip(&fine)
        .enumerate()
        .map(|(i, (a, b))| (lo + i as i64, (a - b).abs()))
        .fold(
            (lo, 0.0),
            |best, cur| if cur.1 > best.1 { cur } else { best },
        );
    if max_shift > CONVERGENCE_TOLERANCE {
        return Err(Error::QuadratureNotConverged {
            n: worst,
            shift: max_shift,
        });
    }
    Ok(StationaryDistribution {
        phi_d,
        n_min: lo,
        probs: fine,
        spec: *spec,
        max_shift,
    })
}
