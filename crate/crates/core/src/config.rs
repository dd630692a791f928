//! Flat key-value run configuration.
//!
//! A TOML file with the keys below; every key is optional. Physical keys are
//! in SI units and, if any is present, the kicked-rotor parameters are
//! derived from them first. Dimensionless keys then override the derived
//! values, and command-line flags override the file.
//!
//! ```toml
//! # physical (SI)
//! wavelength = 894.7e-9      # m
//! mass = 2.2069e-25          # kg
//! period = 66.7e-6           # s
//! pulse_duration = 500e-9    # s
//! rabi_frequency = 2.75e9    # rad/s
//! detuning = 1.885e11        # rad/s
//! fwhm_hbar_kl = 12.0        # initial FWHM in hbar k_L
//!
//! # kicked-rotor units
//! tau = 6.283185307179586
//! phi_d = 2.5132741228718345
//! n_kicks = 30
//! n_se_mean = 0.1
//! n_max = 100
//! initial_fwhm = 6.0         # hbar G
//! atoms = 5000
//! seed = 1
//! recoil_law = "uniform"     # or "two-point"
//!
//! # detection
//! window_min = -60.0
//! window_max = 60.0
//! threshold = 0.0
//! renormalize = false
//!
//! threads = 4
//! ```

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::decoherence::RecoilLaw;
use crate::detection::DetectionWindow;
use crate::error::{Error, Result};
use crate::units::{to_dimensionless, DimensionlessParams, PhysicalConfig};

macro_rules! config_file {
    ($($(#[$m:meta])* $field:ident : $ty:ty,)*) => {
        #[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
        #[serde(deny_unknown_fields)]
        pub struct ConfigFile {
            $($(#[$m])* pub $field: Option<$ty>,)*
        }

        impl ConfigFile {
            /// Keys set in `top` win over keys set in `self`.
            pub fn overlay(self, top: ConfigFile) -> ConfigFile {
                ConfigFile { $($field: top.$field.or(self.$field),)* }
            }
        }
    };
}

config_file! {
    wavelength: f64,
    mass: f64,
    period: f64,
    pulse_duration: f64,
    rabi_frequency: f64,
    detuning: f64,
    fwhm_hbar_kl: f64,
    tau: f64,
    phi_d: f64,
    n_kicks: usize,
    n_se_mean: f64,
    n_max: usize,
    initial_fwhm: f64,
    atoms: usize,
    seed: u64,
    recoil_law: RecoilLaw,
    window_min: f64,
    window_max: f64,
    threshold: f64,
    renormalize: bool,
    threads: usize,
}

/// Fully resolved settings for a run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Settings {
    pub params: DimensionlessParams,
    pub recoil_law: RecoilLaw,
    pub window: DetectionWindow,
    pub threads: Option<usize>,
}

impl ConfigFile {
    pub fn parse(text: &str) -> Result<ConfigFile> {
        toml::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<ConfigFile> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    fn physical(&self) -> Option<PhysicalConfig> {
        let any = [
            self.wavelength,
            self.mass,
            self.period,
            self.pulse_duration,
            self.rabi_frequency,
            self.detuning,
            self.fwhm_hbar_kl,
        ]
        .iter()
        .any(Option::is_some);
        if !any {
            return None;
        }
        let d = PhysicalConfig::default();
        Some(PhysicalConfig {
            wavelength: self.wavelength.unwrap_or(d.wavelength),
            mass: self.mass.unwrap_or(d.mass),
            period: self.period.unwrap_or(d.period),
            pulse_duration: self.pulse_duration.unwrap_or(d.pulse_duration),
            rabi_frequency: self.rabi_frequency.or(d.rabi_frequency),
            detuning: self.detuning.or(d.detuning),
            n_se_mean: self.n_se_mean.unwrap_or(d.n_se_mean),
            fwhm_hbar_kl: self.fwhm_hbar_kl.unwrap_or(d.fwhm_hbar_kl),
        })
    }

    /// Resolves defaults, physical conversion and overrides. Without an
    /// explicit `n_max` the ladder is sized for the initial Gaussian.
    pub fn resolve(&self) -> Result<Settings> {
        let mut p = match self.physical() {
            Some(phys) => to_dimensionless(&phys)?,
            None => DimensionlessParams::default(),
        };
        if let Some(v) = self.tau {
            p.tau = v;
        }
        if let Some(v) = self.phi_d {
            p.phi_d = v;
        }
        if let Some(v) = self.n_kicks {
            p.n_kicks = v;
        }
        if let Some(v) = self.n_se_mean {
            p.n_se_mean = v;
        }
        if let Some(v) = self.initial_fwhm {
            p.initial_fwhm = v;
        }
        if let Some(v) = self.atoms {
            p.n_atoms = v;
        }
        if let Some(v) = self.seed {
            p.seed = v;
        }
        p.validate()?;
        p.n_max = match self.n_max {
            Some(v) => v,
            None => p.required_n_max(p.gaussian_extent()),
        };

        let d = DetectionWindow::default();
        let window = DetectionWindow {
            p_min: self.window_min.unwrap_or(d.p_min),
            p_max: self.window_max.unwrap_or(d.p_max),
            threshold: self.threshold.unwrap_or(d.threshold),
            renormalize: self.renormalize.unwrap_or(d.renormalize),
        };
        window.validate()?;
        if self.threads == Some(0) {
            return Err(Error::invalid("threads", "must be at least 1"));
        }
        Ok(Settings {
            params: p,
            recoil_law: self.recoil_law.unwrap_or_default(),
            window,
            threads: self.threads,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn empty_config_gives_defaults() {
        let s = ConfigFile::parse("").unwrap().resolve().unwrap();
        assert_eq!(s.params, DimensionlessParams::default());
        assert_eq!(s.window, DetectionWindow::default());
        assert_eq!(s.recoil_law, RecoilLaw::Uniform);
    }

    #[test]
    fn unknown_key_is_rejected() {
        assert!(matches!(
            ConfigFile::parse("taus = 1.0"),
            Err(Error::Config(_))
        ));
    }

    #[test]
    fn physical_keys_convert_and_dimensionless_keys_override() {
        let c = ConfigFile::parse("period = 66.7e-6\nn_kicks = 10\nrecoil_law = \"two-point\"")
            .unwrap();
        let s = c.resolve().unwrap();
        assert!((s.params.tau / (2.0 * PI) - 1.0007).abs() < 1e-3);
        assert_eq!(s.params.n_kicks, 10);
        assert_eq!(s.recoil_law, RecoilLaw::TwoPoint);

        let c = ConfigFile::parse("period = 66.7e-6\ntau = 3.0").unwrap();
        assert_eq!(c.resolve().unwrap().params.tau, 3.0);
    }

    #[test]
    fn overlay_prefers_top() {
        let base = ConfigFile::parse("seed = 1\natoms = 10").unwrap();
        let top = ConfigFile {
            seed: Some(2),
            ..Default::default()
        };
        let s = base.overlay(top).resolve().unwrap();
        assert_eq!(s.params.seed, 2);
        assert_eq!(s.params.n_atoms, 10);
    }

    #[test]
    fn bad_window_is_rejected() {
        let c = ConfigFile::parse("window_min = 10.0\nwindow_max = -10.0").unwrap();
        assert!(c.resolve().is_err());
    }
}
