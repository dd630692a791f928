//! Plain CSV and JSON writers.
//!
//! Every data file starts with a `# fingerprint=... seed=...` comment line.
//! Data files carry no timestamps or timings, so re-running the same
//! configuration reproduces them byte for byte; wall-clock runtime goes to
//! the JSON metadata only.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::analytic::StationaryDistribution;
use crate::ensemble::{EnsembleResult, MomentumHistogram};
use crate::error::Result;

/// First 16 hex digits of the SHA-256 of the JSON encoding of `value`.
pub fn fingerprint<T: Serialize + ?Sized>(value: &T) -> String {
    let json = serde_json::to_vec(value).expect("parameter types serialize infallibly");
    let digest = Sha256::digest(&json);
    hex::encode(&digest[..8])
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    if let Some(dir) = path.parent() {
        std::fs::create_dir_all(dir)?;
    }
    Ok(BufWriter::new(File::create(path)?))
}

fn header<W: Write>(w: &mut W, fingerprint: &str, seed: u64) -> Result<()> {
    writeln!(w, "# fingerprint={fingerprint} seed={seed}")?;
    Ok(())
}

/// `N,n,probability` rows for every recorded histogram.
pub fn write_histograms<W: Write>(mut w: W, result: &EnsembleResult) -> Result<()> {
    header(&mut w, &result.fingerprint, result.seed)?;
    writeln!(w, "N,n,probability")?;
    for h in &result.histograms {
        for (n, p) in h.iter() {
            writeln!(w, "{},{n},{p:.12e}", h.kick)?;
        }
    }
    Ok(())
}

/// `N,E,stderr` rows, one per kick.
pub fn write_energies<W: Write>(mut w: W, result: &EnsembleResult) -> Result<()> {
    header(&mut w, &result.fingerprint, result.seed)?;
    writeln!(w, "N,E,stderr")?;
    for e in &result.energies {
        writeln!(w, "{},{:.12e},{:.12e}", e.kick, e.energy, e.stderr)?;
    }
    Ok(())
}

/// True and windowed energies per kick. `e_meas` is empty at kicks
/// without a recorded histogram.
pub fn write_detection<W: Write>(
    mut w: W,
    result: &EnsembleResult,
    windowed: &[(usize, f64)],
) -> Result<()> {
    header(&mut w, &result.fingerprint, result.seed)?;
    writeln!(w, "N,E_true,stderr,E_meas")?;
    for e in &result.energies {
        let meas = windowed
            .iter()
            .find(|m| m.0 == e.kick)
            .map(|m| format!("{:.12e}", m.1))
            .unwrap_or_default();
        writeln!(w, "{},{:.12e},{:.12e},{meas}", e.kick, e.energy, e.stderr)?;
    }
    Ok(())
}

/// `n,probability` for the stationary distribution.
pub fn write_stationary<W: Write>(
    mut w: W,
    ps: &StationaryDistribution,
    fingerprint: &str,
    seed: u64,
) -> Result<()> {
    header(&mut w, fingerprint, seed)?;
    writeln!(w, "n,probability")?;
    for (n, p) in ps.iter() {
        writeln!(w, "{n},{p:.12e}")?;
    }
    Ok(())
}

/// Simulated histogram next to the analytic stationary distribution.
pub fn write_overlay<W: Write>(
    mut w: W,
    hist: &MomentumHistogram,
    ps: &StationaryDistribution,
    seed: u64,
) -> Result<()> {
    header(&mut w, &hist.fingerprint, seed)?;
    writeln!(w, "n,probability,P_s")?;
    for (n, p) in hist.iter() {
        writeln!(w, "{n},{p:.12e},{:.12e}", ps.probability(n))?;
    }
    Ok(())
}

pub fn write_json<T: Serialize + ?Sized>(path: &Path, value: &T) -> Result<()> {
    let mut w = create(path)?;
    serde_json::to_writer_pretty(&mut w, value)?;
    writeln!(w)?;
    w.flush()?;
    Ok(())
}

/// Opens `path` (creating parent directories) and hands a buffered writer to `f`.
pub fn write_file<F>(path: &Path, f: F) -> Result<()>
where
    F: FnOnce(&mut BufWriter<File>) -> Result<()>,
{
    let mut w = create(path)?;
    f(&mut w)?;
    w.flush()?;
    Ok(())
}

/// Sidecar metadata for a run.
#[derive(Debug, Clone, Serialize)]
pub struct Metadata<P: Serialize> {
    pub fingerprint: String,
    pub seed: u64,
    pub runtime_seconds: f64,
    pub version: &'static str,
    pub parameters: P,
}

impl<P: Serialize> Metadata<P> {
    pub fn new(fingerprint: String, seed: u64, runtime_seconds: f64, parameters: P) -> Self {
        Metadata {
            fingerprint,
            seed,
            runtime_seconds,
            version: env!("CARGO_PKG_VERSION"),
            parameters,
        }
    }
}
