//! Parameter scans and single-point distribution runs.

use std::io::Write;
use std::path::Path;
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analytic::{stationary_distribution, QuadratureSpec, StationaryDistribution};
use crate::decoherence::{RecoilLaw, SEModel};
use crate::detection::{apply_window, DetectionWindow};
use crate::ensemble::{Ensemble, EnsembleResult, InitialDistribution};
use crate::error::{Error, Result};
use crate::output::{self, fingerprint, Metadata};
use crate::rng::derive_seed;
use crate::units::{resonance_info, DimensionlessParams};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScanParameter {
    Tau,
    PhiD,
    NSeMean,
    NKicks,
}

impl ScanParameter {
    pub fn name(self) -> &'static str {
        match self {
            ScanParameter::Tau => "tau",
            ScanParameter::PhiD => "phi_d",
            ScanParameter::NSeMean => "n_se_mean",
            ScanParameter::NKicks => "n_kicks",
        }
    }
}

impl FromStr for ScanParameter {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "tau" => Ok(ScanParameter::Tau),
            "phi_d" | "phi-d" => Ok(ScanParameter::PhiD),
            "n_se_mean" | "n-se-mean" => Ok(ScanParameter::NSeMean),
            "n_kicks" | "n-kicks" => Ok(ScanParameter::NKicks),
            other => Err(Error::invalid(
                "parameter",
                format!("`{other}` is not one of tau, phi_d, n_se_mean, n_kicks"),
            )),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanSpec {
    pub parameter: ScanParameter,
    pub lo: f64,
    pub hi: f64,
    pub steps: usize,
    pub base: DimensionlessParams,
}

impl ScanSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.lo < self.hi) || !self.lo.is_finite() || !self.hi.is_finite() {
            return Err(Error::invalid(
                "range",
                format!("need lo < hi, got [{}, {}]", self.lo, self.hi),
            ));
        }
        if self.lo < 0.0 {
            return Err(Error::invalid(
                "range",
                "scanned parameters are non-negative",
            ));
        }
        if self.steps < 2 {
            return Err(Error::invalid("steps", "a scan needs at least 2 nodes"));
        }
        self.base.validate()
    }

    /// Uniform nodes from `lo` to `hi` inclusive.
    pub fn nodes(&self) -> Vec<f64> {
        let h = (self.hi - self.lo) / (self.steps - 1) as f64;
        (0..self.steps)
            .map(|i| {
                if i + 1 == self.steps {
                    self.hi
                } else {
                    self.lo + h * i as f64
                }
            })
            .collect()
    }

    /// Parameters at node `index`: the scanned value, a seed derived from
    /// the base seed, and a ladder no smaller than the headroom rule needs.
    pub fn node_params(&self, index: usize, extent: f64) -> DimensionlessParams {
        let value = self.nodes()[index];
        let mut p = self.base.clone();
        match self.parameter {
            ScanParameter::Tau => p.tau = value,
            ScanParameter::PhiD => p.phi_d = value,
            ScanParameter::NSeMean => p.n_se_mean = value,
            ScanParameter::NKicks => p.n_kicks = value.round() as usize,
        }
        p.seed = derive_seed(self.base.seed, index as u64);
        p.n_max = p.n_max.max(p.required_n_max(extent));
        p
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanRow {
    pub value: f64,
    pub e_true: f64,
    pub e_meas: f64,
    pub stderr: f64,
    /// `None` on success, otherwise the error that stopped this node.
    pub error: Option<String>,
}

impl ScanRow {
    pub fn ok(&self) -> bool {
        self.error.is_none()
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ScanTable {
    pub parameter: ScanParameter,
    pub fingerprint: String,
    pub seed: u64,
    pub rows: Vec<ScanRow>,
    #[serde(skip)]
    pub runtime_seconds: f64,
}

impl ScanTable {
    /// Interior and end nodes whose E_meas exceeds that of every neighbour,
    /// largest first.
    pub fn local_maxima(&self) -> Vec<usize> {
        let e: Vec<f64> = self
            .rows
            .iter()
            .map(|r| if r.ok() { r.e_meas } else { f64::NAN })
            .collect();
        let mut peaks: Vec<usize> = (0..e.len())
            .filter(|&i| {
                let left = i == 0 || e[i] > e[i - 1];
                let right = i + 1 == e.len() || e[i] > e[i + 1];
                !e[i].is_nan() && left && right
            })
            .collect();
        peaks.sort_by(|&a, &b| e[b].total_cmp(&e[a]));
        peaks
    }

    pub fn nearest_node(&self, value: f64) -> usize {
        (0..self.rows.len())
            .min_by(|&a, &b| {
                (self.rows[a].value - value)
                    .abs()
                    .total_cmp(&(self.rows[b].value - value).abs())
            })
            .expect("scan has at least two rows")
    }

    pub fn failures(&self) -> usize {
        self.rows.iter().filter(|r| !r.ok()).count()
    }

    /// One row per node: parameter value, true and windowed energy,
    /// standard error and status.
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "# fingerprint={} seed={}", self.fingerprint, self.seed)?;
        writeln!(w, "{},E_true,E_meas,stderr,status", self.parameter.name())?;
        for r in &self.rows {
            let status = match &r.error {
                None => "ok".to_string(),
                Some(e) => e.replace([',', '\n'], ";"),
            };
            writeln!(
                w,
                "{:.15e},{:.12e},{:.12e},{:.12e},{status}",
                r.value, r.e_true, r.e_meas, r.stderr
            )?;
        }
        Ok(())
    }
}

#[derive(Serialize)]
struct ScanIdentity<'a> {
    spec: &'a ScanSpec,
    initial: &'a InitialDistribution,
    recoil_law: RecoilLaw,
    window: &'a DetectionWindow,
}

fn run_node(
    params: DimensionlessParams,
    initial: &InitialDistribution,
    recoil_law: RecoilLaw,
    window: &DetectionWindow,
) -> Result<(f64, f64, f64)> {
    let se = SEModel::new(params.n_se_mean, recoil_law)?;
    let result = Ensemble::new(params, initial.clone(), se).run()?;
    let hist = result.histograms.last().expect("final histogram recorded");
    let e_meas = apply_window(hist, window)?.energy();
    let e = result.final_energy();
    Ok((e.energy, e_meas, e.stderr))
}

/// Runs one ensemble per node. Numerical failures are recorded in the row
/// and the scan carries on; invalid input aborts it.
pub fn run_scan(
    spec: &ScanSpec,
    initial: &InitialDistribution,
    recoil_law: RecoilLaw,
    window: &DetectionWindow,
) -> Result<ScanTable> {
    spec.validate()?;
    initial.validate()?;
    window.validate()?;
    SEModel::new(spec.base.n_se_mean, recoil_law)?;
    let start = Instant::now();
    let extent = initial.extent();
    let nodes = spec.nodes();
    let rows: Vec<Result<ScanRow>> = (0..spec.steps)
        .into_par_iter()
        .map(|i| {
            let value = nodes[i];
            match run_node(spec.node_params(i, extent), initial, recoil_law, window) {
                Ok((e_true, e_meas, stderr)) => Ok(ScanRow {
                    value,
                    e_true,
                    e_meas,
                    stderr,
                    error: None,
                }),
                Err(e) if e.is_numerical() => {
                    log::warn!("{} = {value}: {e}", spec.parameter.name());
                    Ok(ScanRow {
                        value,
                        e_true: f64::NAN,
                        e_meas: f64::NAN,
                        stderr: f64::NAN,
                        error: Some(e.to_string()),
                    })
                }
                Err(e) => Err(e),
            }
        })
        .collect();
    let rows = rows.into_iter().collect::<Result<Vec<_>>>()?;
    Ok(ScanTable {
        parameter: spec.parameter,
        fingerprint: fingerprint(&ScanIdentity {
            spec,
            initial,
            recoil_law,
            window,
        }),
        seed: spec.base.seed,
        rows,
        runtime_seconds: start.elapsed().as_secs_f64(),
    })
}

/// Energy after `base.n_kicks` kicks over a uniform grid of kicking periods.
pub fn tau_scan(
    lo: f64,
    hi: f64,
    steps: usize,
    base: &DimensionlessParams,
    initial: &InitialDistribution,
    recoil_law: RecoilLaw,
    window: &DetectionWindow,
) -> Result<ScanTable> {
    let spec = ScanSpec {
        parameter: ScanParameter::Tau,
        lo,
        hi,
        steps,
        base: base.clone(),
    };
    run_scan(&spec, initial, recoil_law, window)
}

/// A fixed-parameter ensemble run with histograms after every kick.
#[derive(Debug, Clone)]
pub struct DistributionRun {
    pub params: DimensionlessParams,
    pub initial: InitialDistribution,
    pub recoil_law: RecoilLaw,
    pub window: DetectionWindow,
    pub result: EnsembleResult,
    /// Windowed energy after each kick.
    pub windowed: Vec<(usize, f64)>,
    /// Stationary distribution on the histogram's support, present at the
    /// main resonances (tau = 4 pi r / q with q <= 2).
    pub overlay: Option<StationaryDistribution>,
    pub runtime_seconds: f64,
}

pub fn run_distribution(
    params: &DimensionlessParams,
    initial: &InitialDistribution,
    recoil_law: RecoilLaw,
    window: &DetectionWindow,
) -> Result<DistributionRun> {
    window.validate()?;
    let start = Instant::now();
    let se = SEModel::new(params.n_se_mean, recoil_law)?;
    let result = Ensemble::new(params.clone(), initial.clone(), se)
        .record_at(0..=params.n_kicks)
        .run()?;
    let windowed = result
        .histograms
        .iter()
        .map(|h| Ok((h.kick, apply_window(h, window)?.energy())))
        .collect::<Result<Vec<_>>>()?;
    let overlay = match resonance_info(params.tau) {
        Some(res) if !res.higher_order => {
            let h = result.histograms.last().expect("final histogram recorded");
            Some(stationary_distribution(
                params.phi_d,
                initial,
                h.n_min..=h.n_max_bin(),
                &QuadratureSpec::default(),
            )?)
        }
        _ => None,
    };
    Ok(DistributionRun {
        params: params.clone(),
        initial: initial.clone(),
        recoil_law,
        window: *window,
        result,
        windowed,
        overlay,
        runtime_seconds: start.elapsed().as_secs_f64(),
    })
}

#[derive(Serialize)]
struct DistributionParameters<'a> {
    params: &'a DimensionlessParams,
    initial: &'a InitialDistribution,
    recoil_law: RecoilLaw,
    window: &'a DetectionWindow,
    failed_atoms: usize,
    quadrature: Option<QuadratureSpec>,
}

impl DistributionRun {
    /// Writes `<stem>_histogram.csv`, `<stem>_energy.csv`,
    /// `<stem>_detection.csv`, `<stem>_overlay.csv` (at resonance) and
    /// `<stem>_metadata.json` into `dir`. Returns the paths written.
    pub fn write(&self, dir: &Path, stem: &str) -> Result<Vec<std::path::PathBuf>> {
        let r = &self.result;
        let mut paths = Vec::new();
        let path = dir.join(format!("{stem}_histogram.csv"));
        output::write_file(&path, |w| output::write_histograms(w, r))?;
        paths.push(path);
        let path = dir.join(format!("{stem}_energy.csv"));
        output::write_file(&path, |w| output::write_energies(w, r))?;
        paths.push(path);
        let path = dir.join(format!("{stem}_detection.csv"));
        output::write_file(&path, |w| output::write_detection(w, r, &self.windowed))?;
        paths.push(path);
        if let Some(ps) = &self.overlay {
            let hist = r.histograms.last().expect("final histogram recorded");
            let path = dir.join(format!("{stem}_overlay.csv"));
            output::write_file(&path, |w| output::write_overlay(w, hist, ps, r.seed))?;
            paths.push(path);
        }
        let path = dir.join(format!("{stem}_metadata.json"));
        let meta = Metadata::new(
            r.fingerprint.clone(),
            r.seed,
            self.runtime_seconds,
            DistributionParameters {
                params: &self.params,
                initial: &self.initial,
                recoil_law: self.recoil_law,
                window: &self.window,
                failed_atoms: r.failed_atoms,
                quadrature: self.overlay.as_ref().map(|o| o.spec),
            },
        );
        output::write_json(&path, &meta)?;
        paths.push(path);
        Ok(paths)
    }
}

/// Writes `<stem>.csv` and `<stem>_metadata.json` for a scan.
pub fn write_scan(table: &ScanTable, dir: &Path, stem: &str) -> Result<Vec<std::path::PathBuf>> {
    let csv = dir.join(format!("{stem}.csv"));
    output::write_file(&csv, |w| table.write_csv(w))?;
    let json = dir.join(format!("{stem}_metadata.json"));
    let meta = Metadata::new(
        table.fingerprint.clone(),
        table.seed,
        table.runtime_seconds,
        serde_json::json!({
            "parameter": table.parameter,
            "steps": table.rows.len(),
            "failed_nodes": table.failures(),
        }),
    );
    output::write_json(&json, &meta)?;
    Ok(vec![csv, json])
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn small() -> DimensionlessParams {
        DimensionlessParams {
            n_kicks: 5,
            n_atoms: 64,
            ..Default::default()
        }
    }

    #[test]
    fn nodes_are_inclusive() {
        let spec = ScanSpec {
            parameter: ScanParameter::Tau,
            lo: 0.19 * PI,
            hi: 6.31 * PI,
            steps: 100,
            base: small(),
        };
        let n = spec.nodes();
        assert_eq!(n.len(), 100);
        assert_eq!(n[0], 0.19 * PI);
        assert_eq!(n[99], 6.31 * PI);
    }

    #[test]
    fn rejects_degenerate_specs() {
        let mut spec = ScanSpec {
            parameter: ScanParameter::PhiD,
            lo: 1.0,
            hi: 1.0,
            steps: 5,
            base: small(),
        };
        assert!(spec.validate().is_err());
        spec.hi = 2.0;
        spec.steps = 1;
        assert!(spec.validate().is_err());
    }

    #[test]
    fn two_step_scan_returns_two_rows() {
        let t = tau_scan(
            1.0,
            2.0,
            2,
            &small(),
            &InitialDistribution::gaussian(6.0),
            RecoilLaw::Uniform,
            &DetectionWindow::default(),
        )
        .unwrap();
        assert_eq!(t.rows.len(), 2);
        assert!(t.rows.iter().all(ScanRow::ok));
        let mut buf = Vec::new();
        t.write_csv(&mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap().lines().count(), 4);
    }

    #[test]
    fn failing_nodes_are_recorded_not_dropped() {
        // A window beyond the support empties the signal at every node.
        let window = DetectionWindow {
            p_min: 500.0,
            p_max: 600.0,
            ..Default::default()
        };
        let t = tau_scan(
            1.0,
            2.0,
            3,
            &small(),
            &InitialDistribution::gaussian(6.0),
            RecoilLaw::Uniform,
            &window,
        )
        .unwrap();
        assert_eq!(t.rows.len(), 3);
        assert_eq!(t.failures(), 3);
        assert!(t.local_maxima().is_empty());
    }

    #[test]
    fn local_maxima_are_sorted() {
        let row = |value, e_meas| ScanRow {
            value,
            e_true: 0.0,
            e_meas,
            stderr: 0.0,
            error: None,
        };
        let t = ScanTable {
            parameter: ScanParameter::Tau,
            fingerprint: String::new(),
            seed: 0,
            rows: vec![
                row(0.0, 1.0),
                row(1.0, 3.0),
                row(2.0, 2.0),
                row(3.0, 5.0),
                row(4.0, 4.0),
            ],
            runtime_seconds: 0.0,
        };
        assert_eq!(t.local_maxima(), vec![3, 1]);
        assert_eq!(t.nearest_node(2.4), 2);
    }

    #[test]
    fn zero_kicks_reproduce_binned_initial_distribution() {
        let params = DimensionlessParams {
            n_kicks: 0,
            n_atoms: 4096,
            ..Default::default()
        };
        let init = InitialDistribution::gaussian(6.0);
        let run = run_distribution(
            &params,
            &init,
            RecoilLaw::Uniform,
            &DetectionWindow::default(),
        )
        .unwrap();
        let h = &run.result.histograms[0];
        for (n, w) in init.bin_weights() {
            assert!((h.probability(n) - w).abs() < 2.0 / 4096.0, "bin {n}");
        }
    }
}
