//! Time-of-flight detection emulation.
//!
//! Measured energies come from a finite momentum window and a signal
//! threshold. Coherent resonant transport puts its energy into ballistic
//! wings that leave the window, whereas noise-driven transport broadens the
//! centre. The windowed energy therefore favours the noisy ensemble even
//! when the true energies agree.

use serde::{Deserialize, Serialize};

use crate::decoherence::{RecoilLaw, SEModel};
use crate::ensemble::{Ensemble, EnsembleResult, InitialDistribution, MomentumHistogram};
use crate::error::{Error, Result};
use crate::units::DimensionlessParams;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DetectionWindow {
    pub p_min: f64,
    pub p_max: f64,
    /// Bins with less probability than this are zeroed.
    pub threshold: f64,
    /// Rescale surviving bins to unit total.
    pub renormalize: bool,
}

impl Default for DetectionWindow {
    fn default() -> Self {
        DetectionWindow {
            p_min: -60.0,
            p_max: 60.0,
            threshold: 0.0,
            renormalize: false,
        }
    }
}

impl DetectionWindow {
    /// No cuts at all.
    pub fn unbounded() -> Self {
        DetectionWindow {
            p_min: f64::NEG_INFINITY,
            p_max: f64::INFINITY,
            ..Default::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.p_min < self.p_max) {
            return Err(Error::invalid(
                "window",
                format!("p_min {} must be below p_max {}", self.p_min, self.p_max),
            ));
        }
        if !(self.threshold >= 0.0) {
            return Err(Error::invalid("threshold", "must be non-negative"));
        }
        Ok(())
    }

    fn keeps(&self, n: i64, p: f64) -> bool {
        let x = n as f64;
        x >= self.p_min && x <= self.p_max && p >= self.threshold
    }
}

/// Zeroes bins outside the window or below threshold, accumulating the
/// removed probability in `discarded_mass`.
pub fn apply_window(hist: &MomentumHistogram, w: &DetectionWindow) -> Result<MomentumHistogram> {
    w.validate()?;
    let mut out = hist.clone();
    let mut discarded = 0.0;
    for (i, p) in out.probs.iter_mut().enumerate() {
        let n = hist.n_min + i as i64;
        if !w.keeps(n, *p) {
            discarded += *p;
            *p = 0.0;
        }
    }
    let kept: f64 = out.probs.iter().sum();
    if kept <= 0.0 {
        return Err(Error::EmptySignal);
    }
    out.discarded_mass += discarded;
    if w.renormalize {
        out.probs.iter_mut().for_each(|p| *p /= kept);
    }
    Ok(out)
}

/// `sum n^2 P(n) / 2` over the bins that survive the detection cuts.
pub fn windowed_mean_energy(hist: &MomentumHistogram, w: &DetectionWindow) -> Result<f64> {
    Ok(apply_window(hist, w)?.energy())
}

/// True and windowed energies of a coherent and a noisy ensemble after
/// `params.n_kicks` kicks.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Enhancement {
    pub e_meas_coherent: f64,
    pub e_meas_noisy: f64,
    pub e_true_coherent: f64,
    pub e_true_noisy: f64,
    pub stderr_coherent: f64,
    pub stderr_noisy: f64,
}

impl Enhancement {
    pub fn apparent_gain(&self) -> f64 {
        self.e_meas_noisy / self.e_meas_coherent
    }

    pub fn true_relative_difference(&self) -> f64 {
        (self.e_true_noisy - self.e_true_coherent).abs() / self.e_true_coherent
    }
}

/// Runs the ensemble without noise and with `params.n_se_mean` emissions
/// per kick. Both arms use the same seed, so they start from identical
/// initial momenta.
pub fn enhancement_experiment(
    params: &DimensionlessParams,
    initial: &InitialDistribution,
    recoil_law: RecoilLaw,
    window: &DetectionWindow,
) -> Result<Enhancement> {
    window.validate()?;
    let noisy_se = SEModel::new(params.n_se_mean, recoil_law)?;
    // Both arms share the ladder, which must be sized for the noisy one.
    let coherent_params = DimensionlessParams {
        n_se_mean: 0.0,
        ..params.clone()
    };
    let coherent = Ensemble::new(coherent_params, initial.clone(), SEModel::none()).run()?;
    let noisy = Ensemble::new(params.clone(), initial.clone(), noisy_se).run()?;
    let arm = |r: &EnsembleResult| -> Result<(f64, f64, f64)> {
        let hist = r.histograms.last().expect("final histogram recorded");
        let e = r.final_energy();
        Ok((windowed_mean_energy(hist, window)?, e.energy, e.stderr))
    };
    let (e_meas_coherent, e_true_coherent, stderr_coherent) = arm(&coherent)?;
    let (e_meas_noisy, e_true_noisy, stderr_noisy) = arm(&noisy)?;
    Ok(Enhancement {
        e_meas_coherent,
        e_meas_noisy,
        e_true_coherent,
        e_true_noisy,
        stderr_coherent,
        stderr_noisy,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn hist(n_min: i64, probs: Vec<f64>) -> MomentumHistogram {
        MomentumHistogram {
            probs,
            ..MomentumHistogram::empty(n_min, 0)
        }
    }

    #[test]
    fn wide_window_is_identity() {
        let h = hist(-2, vec![0.1, 0.2, 0.4, 0.2, 0.1]);
        let out = apply_window(&h, &DetectionWindow::default()).unwrap();
        assert_eq!(out, h);
        assert_eq!(
            windowed_mean_energy(&h, &DetectionWindow::default()).unwrap(),
            h.energy()
        );
    }

    #[test]
    fn window_records_discarded_mass() {
        let mut h = MomentumHistogram::empty(-80, 161);
        h.probs[80] = 0.95;
        h.probs[80 + 70] = 0.025;
        h.probs[80 - 70] = 0.025;
        let out = apply_window(&h, &DetectionWindow::default()).unwrap();
        assert!((out.discarded_mass - 0.05).abs() < 1e-15);
        assert!((out.total() + out.discarded_mass - 1.0).abs() < 1e-9);
        assert_eq!(out.probability(70), 0.0);
    }

    #[test]
    fn threshold_zeroes_exactly_the_small_bins() {
        let h = hist(-3, vec![5e-4, 0.2, 2e-3, 0.595, 0.2, 9e-4, 1.6e-3]);
        let w = DetectionWindow {
            threshold: 1e-3,
            ..Default::default()
        };
        let out = apply_window(&h, &w).unwrap();
        let zeroed: Vec<i64> = out
            .iter()
            .zip(h.iter())
            .filter(|(a, b)| a.1 == 0.0 && b.1 != 0.0)
            .map(|(a, _)| a.0)
            .collect();
        assert_eq!(zeroed, vec![-3, 2]);
        assert!((out.discarded_mass - 1.4e-3).abs() < 1e-15);
    }

    #[test]
    fn renormalized_window() {
        let h = hist(-1, vec![0.25, 0.5, 0.25]);
        let w = DetectionWindow {
            p_min: -0.5,
            p_max: 1.0,
            renormalize: true,
            ..Default::default()
        };
        let out = apply_window(&h, &w).unwrap();
        assert!((out.total() - 1.0).abs() < 1e-15);
        assert!((out.probability(1) - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn empty_signal() {
        let h = hist(100, vec![1.0]);
        assert!(matches!(
            apply_window(&h, &DetectionWindow::default()),
            Err(Error::EmptySignal)
        ));
        let bad = DetectionWindow {
            p_min: 5.0,
            p_max: 5.0,
            ..Default::default()
        };
        assert!(apply_window(&h, &bad).is_err());
    }

    #[test]
    fn gaussian_energy_inside_window() {
        // sigma = 10 Gaussian binned on integers; the window sits at 6 sigma.
        let sigma: f64 = 10.0;
        let probs: Vec<f64> = (-100..=100)
            .map(|n| (-(n as f64).powi(2) / (2.0 * sigma * sigma)).exp())
            .collect();
        let total: f64 = probs.iter().sum();
        let h = hist(-100, probs.iter().map(|p| p / total).collect());
        let e = windowed_mean_energy(&h, &DetectionWindow::default()).unwrap();
        assert!((e / (sigma * sigma / 2.0) - 1.0).abs() < 0.01, "{e}");
    }
}
