//! Spontaneous emission as random momentum recoil between kicks.
//!
//! Each emission displaces the atom's momentum by a random amount, which
//! moves its quasimomentum around the Brillouin zone. The per-event recoil
//! variance fixes the momentum diffusion coefficient `D = n_se_mean * var`.

use rand::Rng;
use rand_distr::{Distribution, Poisson};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quantum::BlochState;

/// Distribution of a single recoil, in units of hbar G.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RecoilLaw {
    /// Uniform on [-1/2, 1/2).
    #[default]
    Uniform,
    /// +-1/sqrt(12) with equal probability (same variance as `Uniform`).
    TwoPoint,
}

impl RecoilLaw {
    pub fn sample<R: Rng + ?Sized>(self, rng: &mut R) -> f64 {
        match self {
            RecoilLaw::Uniform => rng.random::<f64>() - 0.5,
            RecoilLaw::TwoPoint => {
                let s = 1.0 / 12f64.sqrt();
                if rng.random::<bool>() {
                    s
                } else {
                    -s
                }
            }
        }
    }

    pub fn variance(self) -> f64 {
        1.0 / 12.0
    }
}

impl std::str::FromStr for RecoilLaw {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "uniform" => Ok(RecoilLaw::Uniform),
            "two-point" | "two_point" => Ok(RecoilLaw::TwoPoint),
            other => Err(Error::invalid(
                "recoil_law",
                format!("`{other}` is not one of uniform, two-point"),
            )),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SEModel {
    pub n_se_mean: f64,
    pub recoil_law: RecoilLaw,
}

impl SEModel {
    pub fn new(n_se_mean: f64, recoil_law: RecoilLaw) -> Result<Self> {
        if !(n_se_mean >= 0.0 && n_se_mean.is_finite()) {
            return Err(Error::invalid(
                "n_se_mean",
                format!("must be non-negative, got {n_se_mean}"),
            ));
        }
        Ok(SEModel {
            n_se_mean,
            recoil_law,
        })
    }

    pub fn none() -> Self {
        SEModel {
            n_se_mean: 0.0,
            recoil_law: RecoilLaw::Uniform,
        }
    }

    pub fn is_active(&self) -> bool {
        self.n_se_mean > 0.0
    }

    /// Momentum diffusion per kick period, `n_se_mean * var(recoil)`.
    pub fn diffusion_coefficient(&self) -> f64 {
        self.n_se_mean * self.recoil_law.variance()
    }
}

/// Number of emissions in one kick cycle, Poisson with mean `n_se_mean`.
pub fn sample_se_count<R: Rng + ?Sized>(rng: &mut R, model: &SEModel) -> u32 {
    if !model.is_active() {
        return 0;
    }
    let poisson = Poisson::new(model.n_se_mean).expect("validated positive rate");
    poisson.sample(rng) as u32
}

/// Shifts the whole state by momentum `delta`; see [`BlochState::translate`].
pub fn apply_recoil(mut state: BlochState, delta: f64) -> Result<BlochState> {
    state.translate(delta)?;
    Ok(state)
}

/// Draws the emissions of one cycle and applies their recoils in place.
/// Returns the number of emissions. Without noise the state and the RNG are
/// left untouched.
pub fn decohere_between_kicks<R: Rng + ?Sized>(
    state: &mut BlochState,
    model: &SEModel,
    rng: &mut R,
) -> Result<u32> {
    let count = sample_se_count(rng, model);
    for _ in 0..count {
        let delta = model.recoil_law.sample(rng);
        state.translate(delta)?;
    }
    Ok(count)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::{atom_stream, Purpose};

    #[test]
    fn no_emission_without_rate() {
        let mut rng = atom_stream(1, 0, Purpose::Emission);
        let m = SEModel::none();
        assert!((0..1000).all(|_| sample_se_count(&mut rng, &m) == 0));
        let s = BlochState::plane_wave(2, 0.37, 10).unwrap();
        let mut t = s.clone();
        assert_eq!(decohere_between_kicks(&mut t, &m, &mut rng).unwrap(), 0);
        assert_eq!(t.beta().to_bits(), s.beta().to_bits());
        assert_eq!(t, s);
    }

    #[test]
    fn probability_of_at_least_one_event() {
        let m = SEModel::new(0.14, RecoilLaw::Uniform).unwrap();
        let mut rng = atom_stream(2, 0, Purpose::Emission);
        let draws = 200_000;
        let hits = (0..draws)
            .filter(|_| sample_se_count(&mut rng, &m) >= 1)
            .count() as f64;
        let p = 1.0 - (-0.14f64).exp();
        let sigma = (p * (1.0 - p) / draws as f64).sqrt();
        assert!((hits / draws as f64 - p).abs() < 3.0 * sigma);
    }

    #[test]
    fn poisson_mean() {
        let m = SEModel::new(0.1, RecoilLaw::Uniform).unwrap();
        let mut rng = atom_stream(3, 0, Purpose::Emission);
        let n = 1_000_000;
        let total: u64 = (0..n).map(|_| sample_se_count(&mut rng, &m) as u64).sum();
        assert!((total as f64 / n as f64 - 0.1).abs() < 1e-3);
    }

    #[test]
    fn recoil_variance() {
        let mut rng = atom_stream(4, 0, Purpose::Emission);
        for law in [RecoilLaw::Uniform, RecoilLaw::TwoPoint] {
            let n = 400_000;
            let xs: Vec<f64> = (0..n).map(|_| law.sample(&mut rng)).collect();
            let mean = xs.iter().sum::<f64>() / n as f64;
            let var = xs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / n as f64;
            assert!((var - 1.0 / 12.0).abs() < 0.01 / 12.0, "{law:?}: {var}");
            assert!(mean.abs() < 4.0 * (1.0f64 / 12.0 / n as f64).sqrt());
        }
    }

    #[test]
    fn rejects_negative_rate() {
        assert!(SEModel::new(-0.1, RecoilLaw::Uniform).is_err());
        assert!("gaussian".parse::<RecoilLaw>().is_err());
        assert_eq!(
            "two-point".parse::<RecoilLaw>().unwrap(),
            RecoilLaw::TwoPoint
        );
    }

    #[test]
    fn recoil_changes_beta_at_event_rate() {
        let m = SEModel::new(0.3, RecoilLaw::Uniform).unwrap();
        let mut rng = atom_stream(5, 0, Purpose::Emission);
        let trials = 50_000;
        let mut changed = 0;
        for _ in 0..trials {
            let mut s = BlochState::plane_wave(0, 0.5, 8).unwrap();
            decohere_between_kicks(&mut s, &m, &mut rng).unwrap();
            if s.beta() != 0.5 {
                changed += 1;
            }
        }
        let p = 1.0 - (-0.3f64).exp();
        let sigma = (p * (1.0 - p) / trials as f64).sqrt();
        assert!((changed as f64 / trials as f64 - p).abs() < 4.0 * sigma);
    }
}
