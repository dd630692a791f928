//! Simulation and analysis of delta-kicked cold atoms.
//!
//! An atom in a pulsed standing wave is a kicked particle: free flight for a
//! period `tau` interrupted by kicks `exp(-i phi_d cos x)`. At fixed
//! quasimomentum `beta` the dynamics live on an integer momentum ladder and
//! one period is applied exactly with two FFTs. Thermal clouds are averaged
//! over atoms, spontaneous emission enters as random recoils that shift
//! `beta`, and a detection model reproduces the finite time-of-flight
//! momentum window of the experiment.
//!
//! ```no_run
//! use kicked_atoms::{run_ensemble, DimensionlessParams, InitialDistribution, SEModel};
//!
//! let params = DimensionlessParams::default(); // tau = 2 pi, phi_d = 0.8 pi, 30 kicks
//! let initial = InitialDistribution::gaussian(params.initial_fwhm);
//! let result = run_ensemble(&params, &initial, &SEModel::none()).unwrap();
//! println!("E(30) = {:.2}", result.final_energy().energy);
//! ```
//!
//! Modules, bottom up:
//!
//! - [`units`]: laboratory to kicked-rotor units, resonance detection
//! - [`quantum`]: Bloch states and the exact Floquet step
//! - [`decoherence`]: spontaneous-emission recoils
//! - [`ensemble`]: parallel, reproducible Monte Carlo over atoms
//! - [`analytic`]: Bessel functions, resonant profiles, the stationary distribution
//! - [`detection`]: momentum window and threshold
//! - [`scan`], [`reproduce`], [`config`], [`output`]: batch runs and files

pub mod analytic;
pub mod config;
pub mod constants;
pub mod decoherence;
pub mod detection;
pub mod ensemble;
pub mod error;
pub mod output;
pub mod quantum;
pub mod reproduce;
pub mod rng;
pub mod scan;
pub mod units;

pub use analytic::{
    bessel_j, energy_law, resonant_profile, stationary_distribution, QuadratureSpec,
    StationaryDistribution,
};
pub use decoherence::{RecoilLaw, SEModel};
pub use detection::{
    apply_window, enhancement_experiment, windowed_mean_energy, DetectionWindow, Enhancement,
};
pub use ensemble::{
    run_ensemble, Ensemble, EnsembleResult, InitialDistribution, MomentumHistogram, Sampling,
};
pub use error::{Error, Result};
pub use quantum::{BlochState, FloquetPropagator};
pub use units::{resonance_info, to_dimensionless, DimensionlessParams, PhysicalConfig};
