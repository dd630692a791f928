//! Canned recipes for the experiment's figures.
//!
//! All recipes use phi_d = 0.8 pi, N = 30 kicks, an initial Gaussian of
//! FWHM 6 hbar G and the detection window [-60, 60].
//!
//! | id    | content                                                           |
//! |-------|-------------------------------------------------------------------|
//! | fig1a | tau scan over [0.19 pi, 6.31 pi], 100 nodes, no emission           |
//! | fig1b | the same scan without and with 0.14 emissions per kick             |
//! | fig2a | distribution at tau = 2 pi without emission, with P_s overlay      |
//! | fig2b | distribution at tau = 2 pi with 0.1 emissions per kick, and without |
//!
//! Each bundle directory holds the data files, their metadata and a
//! `summary.txt` with one PASS/FAIL line per check.

use std::f64::consts::PI;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::Serialize;

use crate::constants::EXPERIMENT_PHI_D;
use crate::decoherence::RecoilLaw;
use crate::detection::DetectionWindow;
use crate::ensemble::InitialDistribution;
use crate::error::{Error, Result};
use crate::scan::{run_distribution, tau_scan, write_scan, DistributionRun, ScanTable};
use crate::units::DimensionlessParams;

pub const SCAN_LO: f64 = 0.19 * PI;
pub const SCAN_HI: f64 = 6.31 * PI;
pub const SCAN_NODES: usize = 100;
pub const SCAN_ATOMS: usize = 2000;
pub const DISTRIBUTION_ATOMS: usize = 5000;
pub const FIG1B_N_SE: f64 = 0.14;
pub const FIG2B_N_SE: f64 = 0.1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum FigureId {
    Fig1a,
    Fig1b,
    Fig2a,
    Fig2b,
}

impl FigureId {
    pub const ALL: [FigureId; 4] = [
        FigureId::Fig1a,
        FigureId::Fig1b,
        FigureId::Fig2a,
        FigureId::Fig2b,
    ];

    pub fn name(self) -> &'static str {
        match self {
            FigureId::Fig1a => "fig1a",
            FigureId::Fig1b => "fig1b",
            FigureId::Fig2a => "fig2a",
            FigureId::Fig2b => "fig2b",
        }
    }
}

impl FromStr for FigureId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        FigureId::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| Error::UnknownFigure(s.to_string()))
    }
}

#[derive(Debug, Clone)]
pub struct ReproduceOptions {
    /// Atoms per ensemble; defaults to 2000 per scan node and 5000 per
    /// distribution.
    pub atoms: Option<usize>,
    pub seed: u64,
    pub recoil_law: RecoilLaw,
    pub out_dir: PathBuf,
}

impl Default for ReproduceOptions {
    fn default() -> Self {
        ReproduceOptions {
            atoms: None,
            seed: DimensionlessParams::default().seed,
            recoil_law: RecoilLaw::Uniform,
            out_dir: PathBuf::from("out"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn new(name: &str, passed: bool, detail: String) -> Self {
        Check {
            name: name.to_string(),
            passed,
            detail,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Bundle {
    pub figure: FigureId,
    pub dir: PathBuf,
    pub files: Vec<PathBuf>,
    pub checks: Vec<Check>,
}

impl Bundle {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

/// Recipe parameters before the emission rate is chosen.
pub fn recipe_params(atoms: usize, seed: u64) -> DimensionlessParams {
    let p = DimensionlessParams {
        tau: 2.0 * PI,
        phi_d: EXPERIMENT_PHI_D,
        n_kicks: 30,
        n_se_mean: 0.0,
        n_atoms: atoms,
        seed,
        initial_fwhm: 6.0,
        ..Default::default()
    };
    let extent = p.gaussian_extent();
    p.with_auto_n_max(extent)
}

fn with_se(p: &DimensionlessParams, n_se_mean: f64) -> DimensionlessParams {
    let p = DimensionlessParams {
        n_se_mean,
        ..p.clone()
    };
    let extent = p.gaussian_extent();
    p.with_auto_n_max(extent)
}

/// The three largest local maxima of E_meas sit at the nodes nearest
/// 2 pi, 4 pi and 6 pi.
pub fn resonant_peak_check(table: &ScanTable) -> Check {
    let mut expected: Vec<usize> = [2.0, 4.0, 6.0]
        .iter()
        .map(|m| table.nearest_node(m * PI))
        .collect();
    let mut top: Vec<usize> = table.local_maxima().into_iter().take(3).collect();
    let describe = |idx: &[usize]| {
        idx.iter()
            .map(|&i| {
                format!(
                    "{:.4}pi ({:.2})",
                    table.rows[i].value / PI,
                    table.rows[i].e_meas
                )
            })
            .collect::<Vec<_>>()
            .join(", ")
    };
    let detail = format!(
        "largest maxima at [{}]; resonant nodes [{}]",
        describe(&top),
        describe(&expected)
    );
    top.sort_unstable();
    expected.sort_unstable();
    Check::new(
        "three largest E_meas maxima at resonant nodes",
        top == expected,
        detail,
    )
}

/// E_meas of the noisy scan exceeds the coherent one at every resonant node.
pub fn enhancement_check(coherent: &ScanTable, noisy: &ScanTable) -> Check {
    let mut passed = true;
    let mut parts = Vec::new();
    for m in [2.0, 4.0, 6.0] {
        let i = coherent.nearest_node(m * PI);
        let (c, n) = (coherent.rows[i].e_meas, noisy.rows[i].e_meas);
        passed &= n > c;
        parts.push(format!("{m}pi: {n:.2} vs {c:.2}"));
    }
    Check::new(
        "E_meas enhanced by emission at resonant nodes",
        passed,
        parts.join(", "),
    )
}

fn final_windowed(run: &DistributionRun) -> f64 {
    run.windowed.last().expect("final kick recorded").1
}

fn normalization_check(run: &DistributionRun) -> Check {
    let total = run
        .result
        .histograms
        .last()
        .expect("final histogram")
        .total();
    Check::new(
        "histogram normalized to 1e-9",
        (total - 1.0).abs() < 1e-9,
        format!("total probability {total:.12}"),
    )
}

fn fig2a(opts: &ReproduceOptions, dir: &Path) -> Result<(Vec<PathBuf>, Vec<Check>)> {
    let params = recipe_params(opts.atoms.unwrap_or(DISTRIBUTION_ATOMS), opts.seed);
    let initial = InitialDistribution::gaussian(params.initial_fwhm);
    let run = run_distribution(
        &params,
        &initial,
        opts.recoil_law,
        &DetectionWindow::default(),
    )?;
    let files = run.write(dir, "distribution")?;
    let e_true = run.result.final_energy().energy;
    let e_meas = final_windowed(&run);
    let checks = vec![
        normalization_check(&run),
        Check::new(
            "analytic overlay written",
            run.overlay.is_some(),
            "distribution_overlay.csv".into(),
        ),
        Check::new(
            "ballistic wings leave the window (E_meas < 0.8 E_true)",
            e_meas < 0.8 * e_true,
            format!("E_meas {e_meas:.3}, E_true {e_true:.3}"),
        ),
    ];
    Ok((files, checks))
}

fn fig2b(opts: &ReproduceOptions, dir: &Path) -> Result<(Vec<PathBuf>, Vec<Check>)> {
    let base = recipe_params(opts.atoms.unwrap_or(DISTRIBUTION_ATOMS), opts.seed);
    let noisy_params = with_se(&base, FIG2B_N_SE);
    let initial = InitialDistribution::gaussian(base.initial_fwhm);
    let window = DetectionWindow::default();
    let coherent = run_distribution(&base, &initial, opts.recoil_law, &window)?;
    let noisy = run_distribution(&noisy_params, &initial, opts.recoil_law, &window)?;
    let mut files = coherent.write(dir, "coherent")?;
    files.extend(noisy.write(dir, "noisy")?);

    let hist = |r: &DistributionRun| r.result.histograms.last().expect("final histogram").clone();
    let (vc, vn) = (
        hist(&coherent).central_variance(30),
        hist(&noisy).central_variance(30),
    );
    let (mc, mn) = (final_windowed(&coherent), final_windowed(&noisy));
    let (tc, tn) = (
        coherent.result.final_energy().energy,
        noisy.result.final_energy().energy,
    );
    let checks = vec![
        normalization_check(&noisy),
        Check::new(
            "emission broadens the centre (variance on |n| <= 30)",
            vn > vc,
            format!("noisy {vn:.3}, coherent {vc:.3}"),
        ),
        Check::new(
            "windowed energy enhanced by emission",
            mn > mc,
            format!("E_meas noisy {mn:.3}, coherent {mc:.3}"),
        ),
        Check::new(
            "true energies agree within 5%",
            (tn - tc).abs() <= 0.05 * tc,
            format!("E_true noisy {tn:.3}, coherent {tc:.3}"),
        ),
    ];
    Ok((files, checks))
}

fn scan(opts: &ReproduceOptions, n_se_mean: f64) -> Result<ScanTable> {
    let base = with_se(
        &recipe_params(opts.atoms.unwrap_or(SCAN_ATOMS), opts.seed),
        n_se_mean,
    );
    tau_scan(
        SCAN_LO,
        SCAN_HI,
        SCAN_NODES,
        &base,
        &InitialDistribution::gaussian(base.initial_fwhm),
        opts.recoil_law,
        &DetectionWindow::default(),
    )
}

fn fig1a(opts: &ReproduceOptions, dir: &Path) -> Result<(Vec<PathBuf>, Vec<Check>)> {
    let table = scan(opts, 0.0)?;
    let files = write_scan(&table, dir, "scan")?;
    let checks = vec![
        Check::new(
            "no failed nodes",
            table.failures() == 0,
            format!("{} of {} nodes failed", table.failures(), table.rows.len()),
        ),
        resonant_peak_check(&table),
    ];
    Ok((files, checks))
}

fn fig1b(opts: &ReproduceOptions, dir: &Path) -> Result<(Vec<PathBuf>, Vec<Check>)> {
    let coherent = scan(opts, 0.0)?;
    let noisy = scan(opts, FIG1B_N_SE)?;
    let mut files = write_scan(&coherent, dir, "scan_coherent")?;
    files.extend(write_scan(&noisy, dir, "scan_noisy")?);
    let checks = vec![
        Check::new(
            "no failed nodes",
            coherent.failures() + noisy.failures() == 0,
            format!(
                "{} + {} nodes failed",
                coherent.failures(),
                noisy.failures()
            ),
        ),
        enhancement_check(&coherent, &noisy),
    ];
    Ok((files, checks))
}

/// Runs a recipe and writes its bundle to `opts.out_dir/<id>/`.
pub fn reproduce(figure: FigureId, opts: &ReproduceOptions) -> Result<Bundle> {
    let dir = opts.out_dir.join(figure.name());
    std::fs::create_dir_all(&dir)?;
    let (mut files, checks) = match figure {
        FigureId::Fig1a => fig1a(opts, &dir)?,
        FigureId::Fig1b => fig1b(opts, &dir)?,
        FigureId::Fig2a => fig2a(opts, &dir)?,
        FigureId::Fig2b => fig2b(opts, &dir)?,
    };
    let mut text = String::new();
    let atoms = opts
        .atoms
        .map_or_else(|| "default".to_string(), |a| a.to_string());
    writeln!(
        text,
        "{} phi_d=0.8pi N=30 FWHM=6 window=[-60,60] atoms={atoms} seed={}",
        figure.name(),
        opts.seed
    )
    .expect("writing to a string");
    for c in &checks {
        let tag = if c.passed { "PASS" } else { "FAIL" };
        writeln!(text, "{tag}  {}: {}", c.name, c.detail).expect("writing to a string");
    }
    let summary = dir.join("summary.txt");
    std::fs::write(&summary, text)?;
    files.push(summary);
    Ok(Bundle {
        figure,
        dir,
        files,
        checks,
    })
}
