//! Monte Carlo averaging over a thermal cloud of kicked atoms.
//!
//! Each atom starts in a momentum eigenstate drawn from the initial
//! distribution and evolves independently (kick, spontaneous emission,
//! free flight). The ensemble is an incoherent mixture, so observables are
//! plain averages over atoms. Atoms are processed in fixed-size chunks whose
//! partial sums are combined in atom order; the result is bitwise identical
//! for any number of worker threads.

use rand::Rng;
use rand_distr::{Distribution, Normal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, Normal as NormalCdf};

use crate::decoherence::{decohere_between_kicks, SEModel};
use crate::error::{Error, Result};
use crate::output::fingerprint;
use crate::quantum::{split_momentum, BlochState, FloquetPropagator};
use crate::rng::{atom_stream, Purpose};
use crate::units::{fwhm_per_sigma, DimensionlessParams};

/// Atoms per reduction chunk. Part of the reproducibility contract: changing
/// it changes the floating-point summation order.
const CHUNK: usize = 64;
/// Chunks evaluated in parallel before their sums are folded in.
const BATCH: usize = 64;

/// Fraction of atoms allowed to overflow the ladder before a run fails.
pub const MAX_FAILURE_FRACTION: f64 = 1e-3;

/// Initial momentum distribution of the cloud, in units of hbar G.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum InitialDistribution {
    Gaussian {
        center: f64,
        fwhm: f64,
    },
    /// Every atom at exactly `center`.
    Delta {
        center: f64,
    },
    /// Integer-bin weights h(n'); momenta are uniform within each unit bin
    /// `[n' - 1/2, n' + 1/2)`.
    Table {
        bins: Vec<(i64, f64)>,
    },
}

impl InitialDistribution {
    pub fn gaussian(fwhm: f64) -> Self {
        InitialDistribution::Gaussian { center: 0.0, fwhm }
    }

    pub fn delta() -> Self {
        InitialDistribution::Delta { center: 0.0 }
    }

    /// All atoms in the bin around n = 0 with uniformly spread quasimomentum.
    pub fn unit_bin() -> Self {
        InitialDistribution::Table {
            bins: vec![(0, 1.0)],
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            InitialDistribution::Gaussian { center, fwhm } => {
                if !(center.is_finite() && *fwhm >= 0.0 && fwhm.is_finite()) {
                    return Err(Error::invalid(
                        "initial_distribution",
                        format!("bad gaussian center {center} / fwhm {fwhm}"),
                    ));
                }
            }
            InitialDistribution::Delta { center } => {
                if !center.is_finite() {
                    return Err(Error::invalid("initial_distribution", "non-finite center"));
                }
            }
            InitialDistribution::Table { bins } => {
                if bins.is_empty() || bins.iter().any(|&(_, w)| !(w >= 0.0 && w.is_finite())) {
                    return Err(Error::invalid(
                        "initial_distribution",
                        "table needs at least one bin and non-negative weights",
                    ));
                }
                if bins.iter().map(|b| b.1).sum::<f64>() <= 0.0 {
                    return Err(Error::invalid(
                        "initial_distribution",
                        "table has zero mass",
                    ));
                }
            }
        }
        Ok(())
    }

    /// Standard deviation of a Gaussian with the given FWHM.
    pub fn sigma(&self) -> Option<f64> {
        match self {
            InitialDistribution::Gaussian { fwhm, .. } => Some(fwhm / fwhm_per_sigma()),
            _ => None,
        }
    }

    /// Bound on |p0| used for ladder headroom (six sigma for Gaussians).
    pub fn extent(&self) -> f64 {
        match self {
            InitialDistribution::Gaussian { center, fwhm } => {
                center.abs() + 6.0 * fwhm / fwhm_per_sigma()
            }
            InitialDistribution::Delta { center } => center.abs(),
            InitialDistribution::Table { bins } => bins
                .iter()
                .filter(|b| b.1 > 0.0)
                .map(|b| b.0.abs() as f64 + 0.5)
                .fold(0.0, f64::max),
        }
    }

    /// Momentum at cumulative probability `u` in [0, 1).
    pub fn quantile(&self, u: f64) -> f64 {
        match self {
            InitialDistribution::Gaussian { center, fwhm } => {
                let sigma = fwhm / fwhm_per_sigma();
                if sigma == 0.0 {
                    return *center;
                }
                let normal = NormalCdf::new(*center, sigma).expect("validated gaussian");
                normal.inverse_cdf(u.max(f64::MIN_POSITIVE))
            }
            InitialDistribution::Delta { center } => *center,
            InitialDistribution::Table { bins } => {
                let total: f64 = bins.iter().map(|b| b.1).sum();
                let target = u * total;
                let mut acc = 0.0;
                for &(n, w) in bins {
                    if w > 0.0 && target < acc + w {
                        let v = ((target - acc) / w).clamp(0.0, 1.0 - f64::EPSILON);
                        return n as f64 - 0.5 + v;
                    }
                    acc += w;
                }
                // u rounding up to the total lands in the last occupied bin
                let &(n, _) = bins.iter().rev().find(|b| b.1 > 0.0).expect("validated");
                n as f64 + 0.5 - f64::EPSILON
            }
        }
    }

    /// Integer-bin weights h(n') under the `[n - 1/2, n + 1/2)` binning.
    pub fn bin_weights(&self) -> Vec<(i64, f64)> {
        match self {
            InitialDistribution::Gaussian { center, fwhm } => {
                let sigma = fwhm / fwhm_per_sigma();
                if sigma == 0.0 {
                    return vec![((center + 0.5).floor() as i64, 1.0)];
                }
                let normal = NormalCdf::new(*center, sigma).expect("validated gaussian");
                let lo = (center - 8.0 * sigma).floor() as i64 - 1;
                let hi = (center + 8.0 * sigma).ceil() as i64 + 1;
                let raw: Vec<(i64, f64)> = (lo..=hi)
                    .map(|n| {
                        let w = normal.cdf(n as f64 + 0.5) - normal.cdf(n as f64 - 0.5);
                        (n, w)
                    })
                    .collect();
                let total: f64 = raw.iter().map(|b| b.1).sum();
                raw.into_iter().map(|(n, w)| (n, w / total)).collect()
            }
            InitialDistribution::Delta { center } => vec![((center + 0.5).floor() as i64, 1.0)],
            InitialDistribution::Table { bins } => {
                let total: f64 = bins.iter().map(|b| b.1).sum();
                bins.iter().map(|&(n, w)| (n, w / total)).collect()
            }
        }
    }
}

/// How initial momenta are drawn across the ensemble.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Sampling {
    /// Independent draws from the initial distribution.
    Independent,
    /// Atom i draws its cumulative probability uniformly from
    /// `[i / N, (i + 1) / N)`. Unbiased, with far smaller variance for
    /// observables that depend sharply on quasimomentum.
    #[default]
    Stratified,
}

/// An initial momentum split into ladder index and quasimomentum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InitialMomentum {
    pub p: f64,
    pub n: i64,
    pub beta: f64,
}

impl InitialMomentum {
    pub fn new(p: f64) -> Self {
        let (n, beta) = split_momentum(p);
        InitialMomentum { p, n, beta }
    }
}

/// Draws one initial momentum.
pub fn sample_atom<R: Rng + ?Sized>(rng: &mut R, dist: &InitialDistribution) -> InitialMomentum {
    let p = match dist {
        InitialDistribution::Gaussian { center, fwhm } => {
            let sigma = fwhm / fwhm_per_sigma();
            if sigma == 0.0 {
                *center
            } else {
                Normal::new(*center, sigma)
                    .expect("validated gaussian")
                    .sample(rng)
            }
        }
        InitialDistribution::Delta { center } => *center,
        InitialDistribution::Table { .. } => dist.quantile(rng.random()),
    };
    InitialMomentum::new(p)
}

/// Observables of one atom.
#[derive(Debug, Clone)]
pub struct AtomObservables {
    /// Kinetic energy after each kick, index 0 being the initial state.
    pub energies: Vec<f64>,
    /// Mean momentum after each kick.
    pub momenta: Vec<f64>,
    /// States at the requested kick indices, in ascending kick order.
    pub snapshots: Vec<(usize, BlochState)>,
}

/// Evolves one atom from momentum `p0` through `params.n_kicks` periods of
/// kick, spontaneous emission and free flight.
pub fn evolve_atom<R: Rng + ?Sized>(
    p0: f64,
    params: &DimensionlessParams,
    se: &SEModel,
    rng: &mut R,
    record_at: &[usize],
) -> Result<AtomObservables> {
    let prop = FloquetPropagator::new(params.tau, params.phi_d, params.n_max);
    evolve_with(&prop, p0, params, se, rng, record_at)
}

fn evolve_with<R: Rng + ?Sized>(
    prop: &FloquetPropagator,
    p0: f64,
    params: &DimensionlessParams,
    se: &SEModel,
    rng: &mut R,
    record_at: &[usize],
) -> Result<AtomObservables> {
    let mut state = BlochState::at_momentum(p0, params.n_max)?;
    let mut ws = prop.workspace(state.beta(), params.n_max);
    let n = params.n_kicks;
    let mut obs = AtomObservables {
        energies: Vec::with_capacity(n + 1),
        momenta: Vec::with_capacity(n + 1),
        snapshots: Vec::with_capacity(record_at.len()),
    };
    let record = |k: usize, s: &BlochState, obs: &mut AtomObservables| {
        obs.energies.push(s.energy());
        obs.momenta.push(s.mean_momentum());
        if record_at.contains(&k) {
            obs.snapshots.push((k, s.clone()));
        }
    };
    record(0, &state, &mut obs);
    for k in 1..=n {
        prop.kick(&mut state, &mut ws)?;
        decohere_between_kicks(&mut state, se, rng)?;
        prop.free(&mut state, &mut ws);
        record(k, &state, &mut obs);
    }
    Ok(obs)
}

/// Coarse-grained momentum distribution: probability of `p` in
/// `[n - 1/2, n + 1/2)` for each integer bin n.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MomentumHistogram {
    /// Momentum of the first bin.
    pub n_min: i64,
    pub probs: Vec<f64>,
    /// Number of kicks applied.
    pub kick: usize,
    pub atoms: usize,
    pub fingerprint: String,
    /// Probability removed by detection cuts (zero before detection).
    pub discarded_mass: f64,
}

impl MomentumHistogram {
    pub fn empty(n_min: i64, bins: usize) -> Self {
        MomentumHistogram {
            n_min,
            probs: vec![0.0; bins],
            kick: 0,
            atoms: 0,
            fingerprint: String::new(),
            discarded_mass: 0.0,
        }
    }

    pub fn n_max_bin(&self) -> i64 {
        self.n_min + self.probs.len() as i64 - 1
    }

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

    pub fn total(&self) -> f64 {
        self.probs.iter().sum()
    }

    pub fn mean(&self) -> f64 {
        self.iter().map(|(n, p)| n as f64 * p).sum::<f64>() / self.total()
    }

    /// `sum n^2 P(n) / 2` over all bins, without renormalization.
    pub fn energy(&self) -> f64 {
        self.iter().map(|(n, p)| (n * n) as f64 * p).sum::<f64>() / 2.0
    }

    /// Variance of n restricted to `|n| <= radius`, renormalized to that range.
    pub fn central_variance(&self, radius: i64) -> f64 {
        let (mut w, mut m1, mut m2) = (0.0, 0.0, 0.0);
        for (n, p) in self.iter().filter(|(n, _)| n.abs() <= radius) {
            w += p;
            m1 += n as f64 * p;
            m2 += (n * n) as f64 * p;
        }
        m2 / w - (m1 / w).powi(2)
    }

    /// Decay length of the least-squares fit `ln P = a - |n| / l` over
    /// `|n| <= radius`, using bins with positive probability.
    pub fn exponential_decay_length(&self, radius: i64) -> f64 {
        let pts: Vec<(f64, f64)> = self
            .iter()
            .filter(|&(n, p)| n.abs() <= radius && p > 0.0)
            .map(|(n, p)| (n.abs() as f64, p.ln()))
            .collect();
        let m = pts.len() as f64;
        let sx: f64 = pts.iter().map(|q| q.0).sum();
        let sy: f64 = pts.iter().map(|q| q.1).sum();
        let sxx: f64 = pts.iter().map(|q| q.0 * q.0).sum();
        let sxy: f64 = pts.iter().map(|q| q.0 * q.1).sum();
        let slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
        -1.0 / slope
    }

    /// Outermost positive-momentum local maximum among bins with at least
    /// `floor` probability.
    pub fn outermost_peak(&self, floor: f64) -> Option<i64> {
        let len = self.probs.len();
        (1..len.saturating_sub(1))
            .rev()
            .map(|i| (i, self.n_min + i as i64))
            .filter(|&(_, n)| n > 0)
            .find(|&(i, _)| {
                let p = self.probs[i];
                p >= floor && p > self.probs[i - 1] && p >= self.probs[i + 1]
            })
            .map(|(_, n)| n)
    }
}

fn bin_shift(beta: f64) -> i64 {
    // n + beta lands in bin n + 1 exactly when beta >= 1/2
    (beta >= 0.5) as i64
}

fn deposit(probs: &mut [f64], n_min: i64, state: &BlochState, weight: f64) {
    let shift = bin_shift(state.beta());
    for (n, c) in state.iter() {
        let i = (n + shift - n_min) as usize;
        probs[i] += weight * c.norm_sqr();
    }
}

/// Equal-weight coarse-grained histogram of the given Bloch states.
pub fn coarse_grain<'a, I>(states: I) -> MomentumHistogram
where
    I: IntoIterator<Item = &'a BlochState>,
{
    let states: Vec<&BlochState> = states.into_iter().collect();
    let n_max = states.iter().map(|s| s.n_max()).max().unwrap_or(0) as i64;
    let mut hist = MomentumHistogram::empty(-n_max, 2 * n_max as usize + 2);
    let w = 1.0 / states.len().max(1) as f64;
    for s in &states {
        deposit(&mut hist.probs, hist.n_min, s, w);
    }
    hist.atoms = states.len();
    hist
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnergyPoint {
    pub kick: usize,
    /// Mean kinetic energy over atoms.
    pub energy: f64,
    /// Monte Carlo standard error of `energy`, from the spread of per-atom
    /// energies. Conservative under stratified sampling.
    pub stderr: f64,
    pub mean_momentum: f64,
    /// Ensemble momentum variance `<p^2> - <p>^2`.
    pub momentum_variance: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EnsembleResult {
    pub fingerprint: String,
    pub seed: u64,
    pub n_atoms: usize,
    pub failed_atoms: usize,
    pub energies: Vec<EnergyPoint>,
    pub histograms: Vec<MomentumHistogram>,
}

impl EnsembleResult {
    pub fn energy_at(&self, kick: usize) -> Option<&EnergyPoint> {
        self.energies.get(kick)
    }

    pub fn final_energy(&self) -> &EnergyPoint {
        self.energies.last().expect("at least the initial point")
    }

    pub fn histogram_at(&self, kick: usize) -> Option<&MomentumHistogram> {
        self.histograms.iter().find(|h| h.kick == kick)
    }

    /// Least-squares slope of E(N) over kicks `from..=to`.
    pub fn energy_slope(&self, from: usize, to: usize) -> f64 {
        let pts = &self.energies[from..=to];
        let m = pts.len() as f64;
        let sx: f64 = pts.iter().map(|e| e.kick as f64).sum();
        let sy: f64 = pts.iter().map(|e| e.energy).sum();
        let sxx: f64 = pts.iter().map(|e| (e.kick as f64).powi(2)).sum();
        let sxy: f64 = pts.iter().map(|e| e.kick as f64 * e.energy).sum();
        (m * sxy - sx * sy) / (m * sxx - sx * sx)
    }
}

/// Everything that determines an ensemble run, hashed into its fingerprint.
#[derive(Debug, Clone, Serialize)]
pub struct RunIdentity<'a> {
    pub params: &'a DimensionlessParams,
    pub initial: &'a InitialDistribution,
    pub se: &'a SEModel,
    pub sampling: Sampling,
    pub record_at: &'a [usize],
}

/// Configurable ensemble run.
#[derive(Debug, Clone)]
pub struct Ensemble {
    params: DimensionlessParams,
    initial: InitialDistribution,
    se: SEModel,
    record_at: Vec<usize>,
    sampling: Sampling,
}

impl Ensemble {
    /// Records the histogram after the final kick by default.
    pub fn new(params: DimensionlessParams, initial: InitialDistribution, se: SEModel) -> Self {
        let record_at = vec![params.n_kicks];
        Ensemble {
            params,
            initial,
            se,
            record_at,
            sampling: Sampling::default(),
        }
    }

    pub fn record_at(mut self, kicks: impl IntoIterator<Item = usize>) -> Self {
        let mut v: Vec<usize> = kicks.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        self.record_at = v;
        self
    }

    pub fn sampling(mut self, sampling: Sampling) -> Self {
        self.sampling = sampling;
        self
    }

    pub fn params(&self) -> &DimensionlessParams {
        &self.params
    }

    pub fn fingerprint(&self) -> String {
        fingerprint(&RunIdentity {
            params: &self.params,
            initial: &self.initial,
            se: &self.se,
            sampling: self.sampling,
            record_at: &self.record_at,
        })
    }

    fn initial_momentum(&self, atom: usize) -> f64 {
        let mut rng = atom_stream(self.params.seed, atom, Purpose::Initial);
        match self.sampling {
            Sampling::Independent => sample_atom(&mut rng, &self.initial).p,
            Sampling::Stratified => {
                let u = (atom as f64 + rng.random::<f64>()) / self.params.n_atoms as f64;
                self.initial.quantile(u)
            }
        }
    }

    /// Final state of one atom of the ensemble, drawn from the same random
    /// streams as in [`Self::run`].
    pub fn atom_final_state(&self, atom: usize) -> Result<BlochState> {
        if atom >= self.params.n_atoms {
            return Err(Error::invalid(
                "atom",
                format!("index {atom} outside ensemble of {}", self.params.n_atoms),
            ));
        }
        self.initial.validate()?;
        self.params.validate_headroom(self.initial.extent())?;
        let p0 = self.initial_momentum(atom);
        let mut rng = atom_stream(self.params.seed, atom, Purpose::Emission);
        let k = self.params.n_kicks;
        let obs = evolve_atom(p0, &self.params, &self.se, &mut rng, &[k])?;
        Ok(obs.snapshots.into_iter().next().expect("final snapshot").1)
    }

    pub fn run(&self) -> Result<EnsembleResult> {
        self.initial.validate()?;
        self.params.validate_headroom(self.initial.extent())?;
        if let Some(&k) = self.record_at.iter().find(|&&k| k > self.params.n_kicks) {
            return Err(Error::invalid(
                "record_at",
                format!("kick {k} is beyond n_kicks = {}", self.params.n_kicks),
            ));
        }
        self.execute()
    }

    fn execute(&self) -> Result<EnsembleResult> {
        let params = &self.params;
        let prop = FloquetPropagator::new(params.tau, params.phi_d, params.n_max);
        let n_chunks = params.n_atoms.div_ceil(CHUNK);
        let mut total = Accumulator::new(params.n_kicks, self.record_at.len(), params.n_max);
        for first in (0..n_chunks).step_by(BATCH) {
            let last = (first + BATCH).min(n_chunks);
            let chunks: Vec<Result<Accumulator>> = (first..last)
                .into_par_iter()
                .map(|c| self.run_chunk(&prop, c))
                .collect();
            for chunk in chunks {
                total.merge(&chunk?);
            }
        }
        let limit = (MAX_FAILURE_FRACTION * params.n_atoms as f64).floor() as usize;
        if total.failed > limit || total.ok == 0 {
            return Err(Error::TooManyFailures {
                failed: total.failed,
                total: params.n_atoms,
            });
        }
        Ok(total.finish(self))
    }

    fn run_chunk(&self, prop: &FloquetPropagator, chunk: usize) -> Result<Accumulator> {
        let params = &self.params;
        let mut acc = Accumulator::new(params.n_kicks, self.record_at.len(), params.n_max);
        let end = ((chunk + 1) * CHUNK).min(params.n_atoms);
        for atom in chunk * CHUNK..end {
            let p0 = self.initial_momentum(atom);
            let mut rng = atom_stream(params.seed, atom, Purpose::Emission);
            match evolve_with(prop, p0, params, &self.se, &mut rng, &self.record_at) {
                Ok(obs) => acc.add(&obs),
                Err(Error::LadderOverflow { n_max, mass }) => {
                    log::debug!("atom {atom} (p0 = {p0:.4}) overflowed n_max = {n_max}: edge mass {mass:.3e}");
                    acc.failed += 1;
                }
                Err(e) => return Err(e),
            }
        }
        Ok(acc)
    }
}

/// Runs the ensemble, recording the histogram after the last kick.
pub fn run_ensemble(
    params: &DimensionlessParams,
    initial: &InitialDistribution,
    se: &SEModel,
) -> Result<EnsembleResult> {
    Ensemble::new(params.clone(), initial.clone(), *se).run()
}

#[derive(Debug, Clone)]
struct Accumulator {
    ok: usize,
    failed: usize,
    e_sum: Vec<f64>,
    e_sq: Vec<f64>,
    p_sum: Vec<f64>,
    hists: Vec<Vec<f64>>,
    n_min: i64,
}

impl Accumulator {
    fn new(n_kicks: usize, n_hist: usize, n_max: usize) -> Self {
        Accumulator {
            ok: 0,
            failed: 0,
            e_sum: vec![0.0; n_kicks + 1],
            e_sq: vec![0.0; n_kicks + 1],
            p_sum: vec![0.0; n_kicks + 1],
            hists: vec![vec![0.0; 2 * n_max + 2]; n_hist],
            n_min: -(n_max as i64),
        }
    }

    fn add(&mut self, obs: &AtomObservables) {
        self.ok += 1;
        for (k, (&e, &p)) in obs.energies.iter().zip(&obs.momenta).enumerate() {
            self.e_sum[k] += e;
            self.e_sq[k] += e * e;
            self.p_sum[k] += p;
        }
        for (h, (_, state)) in self.hists.iter_mut().zip(&obs.snapshots) {
            deposit(h, self.n_min, state, 1.0);
        }
    }

    fn merge(&mut self, other: &Accumulator) {
        self.ok += other.ok;
        self.failed += other.failed;
        let add = |a: &mut [f64], b: &[f64]| a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
        add(&mut self.e_sum, &other.e_sum);
        add(&mut self.e_sq, &other.e_sq);
        add(&mut self.p_sum, &other.p_sum);
        for (a, b) in self.hists.iter_mut().zip(&other.hists) {
            add(a, b);
        }
    }

    fn finish(self, run: &Ensemble) -> EnsembleResult {
        let n = self.ok as f64;
        let fp = run.fingerprint();
        let energies = (0..self.e_sum.len())
            .map(|k| {
                let mean = self.e_sum[k] / n;
                let var = if self.ok > 1 {
                    ((self.e_sq[k] / n - mean * mean) * n / (n - 1.0)).max(0.0)
                } else {
                    0.0
                };
                let p = self.p_sum[k] / n;
                EnergyPoint {
                    kick: k,
                    energy: mean,
                    stderr: (var / n).sqrt(),
                    mean_momentum: p,
                    momentum_variance: 2.0 * mean - p * p,
                }
            })
            .collect();
        let histograms = self
            .hists
            .into_iter()
            .zip(&run.record_at)
            .map(|(mut probs, &kick)| {
                probs.iter_mut().for_each(|x| *x /= n);
                MomentumHistogram {
                    n_min: self.n_min,
                    probs,
                    kick,
                    atoms: self.ok,
                    fingerprint: fp.clone(),
                    discarded_mass: 0.0,
                }
            })
            .collect();
        EnsembleResult {
            fingerprint: fp,
            seed: run.params.seed,
            n_atoms: run.params.n_atoms,
            failed_atoms: self.failed,
            energies,
            histograms,
        }
    }
}
