//! Laboratory units, kicked-rotor units, and the quantum-resonance condition.
//!
//! Momentum is measured in units of hbar G with G = 2 k_L the reciprocal
//! lattice vector, position in units of 1/G and time in units of M / (hbar G^2).
//! In these units the kicking period T becomes `tau = hbar G^2 T / M`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::constants::{CESIUM_D1_KICK_WAVELENGTH, CESIUM_MASS, EXPERIMENT_PHI_D, HBAR};
use crate::error::{Error, Result};

/// Experimental parameters in SI units.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhysicalConfig {
    /// Standing-wave wavelength lambda_L (m).
    pub wavelength: f64,
    /// Atomic mass (kg).
    pub mass: f64,
    /// Kicking period T (s).
    pub period: f64,
    /// Kick pulse duration t_p (s).
    pub pulse_duration: f64,
    /// Rabi frequency at the intensity maxima (rad/s).
    pub rabi_frequency: Option<f64>,
    /// Detuning delta_L from the atomic transition (rad/s).
    pub detuning: Option<f64>,
    /// Mean number of spontaneous emissions per atom per kick cycle.
    pub n_se_mean: f64,
    /// Initial momentum FWHM in units of hbar k_L.
    pub fwhm_hbar_kl: f64,
}

impl Default for PhysicalConfig {
    fn default() -> Self {
        PhysicalConfig {
            wavelength: CESIUM_D1_KICK_WAVELENGTH,
            mass: CESIUM_MASS,
            period: 66.7e-6,
            pulse_duration: crate::constants::EXPERIMENT_PULSE_DURATION,
            rabi_frequency: None,
            detuning: None,
            n_se_mean: 0.0,
            fwhm_hbar_kl: crate::constants::EXPERIMENT_FWHM_HBAR_KL,
        }
    }
}

impl PhysicalConfig {
    pub fn validate(&self) -> Result<()> {
        positive("wavelength", self.wavelength)?;
        positive("mass", self.mass)?;
        positive("period", self.period)?;
        nonnegative("pulse_duration", self.pulse_duration)?;
        nonnegative("n_se_mean", self.n_se_mean)?;
        nonnegative("fwhm_hbar_kl", self.fwhm_hbar_kl)?;
        if let Some(d) = self.detuning {
            if d == 0.0 {
                return Err(Error::ZeroDetuning);
            }
        }
        Ok(())
    }

    /// Non-fatal diagnostics about the delta-kick idealization.
    pub fn warnings(&self) -> Vec<String> {
        let mut out = Vec::new();
        if self.period < 10.0 * self.pulse_duration {
            out.push(format!(
                "period {:.3e} s is less than 10 pulse durations ({:.3e} s); kicks are far from delta-like",
                self.period, self.pulse_duration
            ));
        }
        out
    }

    /// Reciprocal lattice vector G = 2 k_L = 4 pi / lambda_L.
    pub fn lattice_vector(&self) -> f64 {
        4.0 * PI / self.wavelength
    }
}

/// The full parameter set of a simulation in kicked-rotor units.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DimensionlessParams {
    pub tau: f64,
    pub phi_d: f64,
    pub n_kicks: usize,
    pub n_se_mean: f64,
    /// Half-width of the momentum ladder; amplitudes live on n in [-n_max, n_max].
    pub n_max: usize,
    pub n_atoms: usize,
    pub seed: u64,
    /// Initial momentum FWHM in units of hbar G.
    pub initial_fwhm: f64,
}

impl Default for DimensionlessParams {
    fn default() -> Self {
        let mut p = DimensionlessParams {
            tau: 2.0 * PI,
            phi_d: EXPERIMENT_PHI_D,
            n_kicks: 30,
            n_se_mean: 0.0,
            n_max: 1,
            n_atoms: 5000,
            seed: 0x6b69_636b_6564,
            initial_fwhm: 6.0,
        };
        p.n_max = p.required_n_max(p.gaussian_extent());
        p
    }
}

impl DimensionlessParams {
    pub fn validate(&self) -> Result<()> {
        nonnegative("tau", self.tau)?;
        nonnegative("phi_d", self.phi_d)?;
        nonnegative("n_se_mean", self.n_se_mean)?;
        nonnegative("initial_fwhm", self.initial_fwhm)?;
        if self.n_max < 1 {
            return Err(Error::invalid("n_max", "must be at least 1"));
        }
        if self.n_atoms < 1 {
            return Err(Error::invalid("n_atoms", "must be at least 1"));
        }
        Ok(())
    }

    /// Checks that the ladder leaves ballistic headroom for initial momenta up to `p0_max`.
    pub fn validate_headroom(&self, p0_max: f64) -> Result<()> {
        self.validate()?;
        let need = self.minimum_n_max(p0_max);
        if self.n_max < need {
            return Err(Error::invalid(
                "n_max",
                format!(
                    "{} leaves no ballistic headroom; need at least {need} for |p0| <= {p0_max:.2}, N = {}, phi_d = {:.4}",
                    self.n_max, self.n_kicks, self.phi_d
                ),
            ));
        }
        Ok(())
    }

    /// Smallest admissible ladder half-width: resonant wings at n ~ N phi_d
    /// must stay five standard widths inside the ladder, plus a margin for
    /// the spontaneous-emission random walk.
    pub fn minimum_n_max(&self, p0_max: f64) -> usize {
        let travel = self.n_kicks as f64 * self.phi_d;
        let se_spread = (self.n_kicks as f64 * self.n_se_mean / 12.0).sqrt();
        let need = p0_max.abs() + travel + 5.0 * travel.sqrt() + 5.0 * se_spread;
        (need.ceil() as usize).max(1) + 2
    }

    /// [`Self::minimum_n_max`] rounded up so that the ladder length
    /// `2 n_max + 1` factors into primes no larger than 11.
    pub fn required_n_max(&self, p0_max: f64) -> usize {
        let mut n = self.minimum_n_max(p0_max);
        while !smooth_length(2 * n + 1) {
            n += 1;
        }
        n
    }

    /// Largest initial momentum expected from the default Gaussian cloud (6 sigma).
    pub fn gaussian_extent(&self) -> f64 {
        6.0 * self.initial_fwhm / fwhm_per_sigma()
    }

    /// Resets `n_max` to the headroom rule for initial momenta up to `p0_max`.
    pub fn with_auto_n_max(mut self, p0_max: f64) -> Self {
        self.n_max = self.required_n_max(p0_max);
        self
    }

    pub fn diffusion_coefficient(&self) -> f64 {
        self.n_se_mean / 12.0
    }
}

fn smooth_length(mut n: usize) -> bool {
    for p in [2, 3, 5, 7, 11] {
        while n % p == 0 {
            n /= p;
        }
    }
    n == 1
}

/// 2 sqrt(2 ln 2), the FWHM of a unit-variance Gaussian.
pub fn fwhm_per_sigma() -> f64 {
    2.0 * (2.0 * std::f64::consts::LN_2).sqrt()
}

/// Converts laboratory parameters to kicked-rotor units.
///
/// `phi_d` is computed from the Rabi frequency and detuning when both are
/// given and otherwise defaults to the experimental mean of 0.8 pi.
pub fn to_dimensionless(cfg: &PhysicalConfig) -> Result<DimensionlessParams> {
    cfg.validate()?;
    for w in cfg.warnings() {
        log::warn!("{w}");
    }
    let phi_d = match (cfg.rabi_frequency, cfg.detuning) {
        (Some(rabi), Some(det)) => compute_phi_d(rabi, cfg.pulse_duration, det)?,
        _ => EXPERIMENT_PHI_D,
    };
    let base = DimensionlessParams::default();
    let params = DimensionlessParams {
        tau: period_to_tau(cfg.period, cfg.wavelength, cfg.mass),
        phi_d,
        n_se_mean: cfg.n_se_mean,
        // G = 2 k_L, so a width in hbar k_L is half as large in hbar G.
        initial_fwhm: cfg.fwhm_hbar_kl / 2.0,
        ..base
    };
    let extent = params.gaussian_extent();
    Ok(params.with_auto_n_max(extent))
}

/// `tau = hbar G^2 T / M`.
pub fn period_to_tau(period: f64, wavelength: f64, mass: f64) -> f64 {
    let g = 4.0 * PI / wavelength;
    HBAR * g * g * period / mass
}

/// Inverse of [`period_to_tau`].
pub fn tau_to_period(tau: f64, wavelength: f64, mass: f64) -> f64 {
    let g = 4.0 * PI / wavelength;
    tau * mass / (HBAR * g * g)
}

/// Half-Talbot time `2 pi M / (hbar G^2)`, the period at which tau = 2 pi.
pub fn half_talbot_time(wavelength: f64, mass: f64) -> f64 {
    tau_to_period(2.0 * PI, wavelength, mass)
}

/// Kick strength `phi_d = Omega^2 t_p / (8 delta_L)`.
pub fn compute_phi_d(rabi_frequency: f64, pulse_duration: f64, detuning: f64) -> Result<f64> {
    if detuning == 0.0 {
        return Err(Error::ZeroDetuning);
    }
    nonnegative("pulse_duration", pulse_duration)?;
    Ok(rabi_frequency * rabi_frequency * pulse_duration / (8.0 * detuning))
}

/// Tolerance for recognising tau / 4 pi as a rational number.
pub const RESONANCE_TOLERANCE: f64 = 1e-12;
/// Largest denominator q considered when matching tau = 4 pi r / q.
pub const MAX_RESONANCE_DENOMINATOR: u32 = 64;

/// A quantum resonance `tau = 4 pi r / q` with r / q in lowest terms.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Resonance {
    pub r: u32,
    pub q: u32,
    /// Quasimomenta m / 2r, 0 <= m < 2r, for which the Floquet operator is
    /// periodic in momentum.
    pub periodic_betas: Vec<f64>,
    /// Quasimomenta with ballistic growth. For q >= 3 this is the periodic
    /// class and `higher_order` is set.
    pub ballistic_betas: Vec<f64>,
    pub higher_order: bool,
}

/// Classifies `tau` as a quantum resonance, or `None` off resonance.
pub fn resonance_info(tau: f64) -> Option<Resonance> {
    if !(tau > 0.0) || !tau.is_finite() {
        return None;
    }
    let x = tau / (4.0 * PI);
    // The first q that matches gives the fraction in lowest terms.
    let (r, q) = (1..=MAX_RESONANCE_DENOMINATOR).find_map(|q| {
        let r = (x * q as f64).round();
        let close = (x - r / q as f64).abs() <= RESONANCE_TOLERANCE * x.max(1.0);
        (r >= 1.0 && close).then_some((r as u32, q))
    })?;
    let periodic_betas: Vec<f64> = (0..2 * r).map(|m| m as f64 / (2 * r) as f64).collect();
    let (ballistic_betas, higher_order) = match q {
        1 => (vec![0.0, 0.5], false),
        2 => (vec![0.5], false),
        _ => (periodic_betas.clone(), true),
    };
    Some(Resonance {
        r,
        q,
        periodic_betas,
        ballistic_betas,
        higher_order,
    })
}

fn positive(field: &'static str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::invalid(field, format!("must be positive, got {v}")))
    }
}

fn nonnegative(field: &'static str, v: f64) -> Result<()> {
    if v >= 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::invalid(
            field,
            format!("must be non-negative, got {v}"),
        ))
    }
}
