//! Physical constants (CODATA 2018) and the cesium D1 kicking setup.

/// Planck constant h (J s), exact by SI definition.
pub const PLANCK: f64 = 6.626_070_15e-34;

/// Reduced Planck constant (J s).
pub const HBAR: f64 = PLANCK / (2.0 * std::f64::consts::PI);

/// Unified atomic mass unit (kg).
pub const ATOMIC_MASS_UNIT: f64 = 1.660_539_066_60e-27;

/// Mass of a 133Cs atom (kg).
pub const CESIUM_MASS: f64 = 132.905_451_961 * ATOMIC_MASS_UNIT;

/// Wavelength of the kicking standing wave near the Cs D1 line (m).
pub const CESIUM_D1_KICK_WAVELENGTH: f64 = 894.7e-9;

/// Kick strength experienced on average by the atomic cloud.
pub const EXPERIMENT_PHI_D: f64 = 0.8 * std::f64::consts::PI;

/// Initial momentum FWHM of the released cloud, in units of hbar k_L.
pub const EXPERIMENT_FWHM_HBAR_KL: f64 = 12.0;

/// Detuning of the kicking light from the D1 transition (rad/s).
pub const EXPERIMENT_DETUNING: f64 = 2.0 * std::f64::consts::PI * 30e9;

/// Kicking pulse duration (s).
pub const EXPERIMENT_PULSE_DURATION: f64 = 500e-9;
