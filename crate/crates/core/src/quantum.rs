//! Floquet evolution of a single Bloch state on a truncated momentum ladder.
//!
//! A Bloch state at quasimomentum `beta` in [0, 1) holds amplitudes `c_n` for
//! integer n in `[-n_max, n_max]`; the physical momentum of component n is
//! `p = n + beta`. One kick period is the delta kick `exp(-i phi_d cos x)`
//! followed by free propagation `exp(-i tau p^2 / 2)`. Neither operation
//! changes `beta`.

use std::f64::consts::PI;
use std::io::Write;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};

/// Probability allowed on either edge of the ladder before evolution is
/// declared to have overflowed.
pub const EDGE_TOLERANCE: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq)]
pub struct BlochState {
    beta: f64,
    n_max: usize,
    amps: Vec<Complex64>,
}

impl BlochState {
    /// Momentum eigenstate `p = n + beta`.
    pub fn plane_wave(n: i64, beta: f64, n_max: usize) -> Result<Self> {
        check_beta(beta)?;
        if n_max == 0 {
            return Err(Error::invalid("n_max", "must be at least 1"));
        }
        if n.unsigned_abs() as usize > n_max {
            return Err(Error::LadderOverflow { n_max, mass: 1.0 });
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); 2 * n_max + 1];
        amps[(n + n_max as i64) as usize] = Complex64::new(1.0, 0.0);
        Ok(BlochState { beta, n_max, amps })
    }

    /// Momentum eigenstate at an arbitrary real momentum, split into
    /// `n = floor(p)` and `beta = p - n`.
    pub fn at_momentum(p: f64, n_max: usize) -> Result<Self> {
        let (n, beta) = split_momentum(p);
        Self::plane_wave(n, beta, n_max)
    }

    /// Wraps raw amplitudes ordered from `n = -n_max` to `n = n_max`.
    /// The vector length must be odd; the norm is not adjusted.
    pub fn from_amplitudes(beta: f64, amps: Vec<Complex64>) -> Result<Self> {
        check_beta(beta)?;
        if amps.len() < 3 || amps.len() % 2 == 0 {
            return Err(Error::invalid(
                "amplitudes",
                format!("length must be odd and at least 3, got {}", amps.len()),
            ));
        }
        let n_max = amps.len() / 2;
        Ok(BlochState { beta, n_max, amps })
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    /// Amplitude of ladder site n, zero outside the ladder.
    pub fn amplitude(&self, n: i64) -> Complex64 {
        self.index(n)
            .map(|i| self.amps[i])
            .unwrap_or(Complex64::new(0.0, 0.0))
    }

    /// Ladder sites paired with their amplitudes.
    pub fn iter(&self) -> impl Iterator<Item = (i64, Complex64)> + '_ {
        let lo = -(self.n_max as i64);
        self.amps
            .iter()
            .enumerate()
            .map(move |(i, c)| (lo + i as i64, *c))
    }

    fn index(&self, n: i64) -> Option<usize> {
        let i = n + self.n_max as i64;
        (i >= 0 && (i as usize) < self.amps.len()).then_some(i as usize)
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|c| c.norm_sqr()).sum()
    }

    /// Larger of the two edge occupations `|c_{+-n_max}|^2`.
    pub fn edge_occupation(&self) -> f64 {
        let last = self.amps.len() - 1;
        self.amps[0].norm_sqr().max(self.amps[last].norm_sqr())
    }

    pub fn check_edges(&self) -> Result<()> {
        let mass = self.edge_occupation();
        if mass < EDGE_TOLERANCE {
            Ok(())
        } else {
            Err(Error::LadderOverflow {
                n_max: self.n_max,
                mass,
            })
        }
    }

    /// Mean kinetic energy `sum (n + beta)^2 |c_n|^2 / 2`.
    pub fn energy(&self) -> f64 {
        self.iter()
            .map(|(n, c)| {
                let p = n as f64 + self.beta;
                p * p * c.norm_sqr()
            })
            .sum::<f64>()
            / 2.0
    }

    /// Mean momentum `sum (n + beta) |c_n|^2`.
    pub fn mean_momentum(&self) -> f64 {
        self.iter()
            .map(|(n, c)| (n as f64 + self.beta) * c.norm_sqr())
            .sum()
    }

    /// Occupation probabilities `|c_n|^2`, ordered from `n = -n_max`.
    pub fn momentum_distribution(&self) -> Vec<f64> {
        self.amps.iter().map(|c| c.norm_sqr()).collect()
    }

    /// Writes the state as CSV rows `n,re,im`.
    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "# beta={:.17e} n_max={}", self.beta, self.n_max)?;
        writeln!(w, "n,re,im")?;
        for (n, c) in self.iter() {
            writeln!(w, "{n},{:.17e},{:.17e}", c.re, c.im)?;
        }
        Ok(())
    }

    /// Translates every component by the real momentum `delta`.
    ///
    /// The quasimomentum becomes `frac(beta + delta)` and the integer carry
    /// re-indexes the ladder, so the distribution over `p = n + beta` moves
    /// rigidly by `delta`. Amplitude pushed past the ladder edge is dropped;
    /// any drop above 1e-12 probability, or an edge occupation above
    /// [`EDGE_TOLERANCE`] afterwards, is reported as overflow.
    pub fn translate(&mut self, delta: f64) -> Result<()> {
        if !(delta.abs() < self.n_max as f64 / 2.0) {
            return Err(Error::invalid(
                "delta",
                format!(
                    "|{delta}| must stay below n_max / 2 = {}",
                    self.n_max as f64 / 2.0
                ),
            ));
        }
        let (carry, beta) = split_momentum(self.beta + delta);
        self.beta = beta;
        if carry != 0 {
            let k = carry.unsigned_abs() as usize;
            let len = self.amps.len();
            let dropped: f64 = if carry > 0 {
                self.amps[len - k..].iter().map(|c| c.norm_sqr()).sum()
            } else {
                self.amps[..k].iter().map(|c| c.norm_sqr()).sum()
            };
            if carry > 0 {
                self.amps.rotate_right(k);
                self.amps[..k].fill(Complex64::new(0.0, 0.0));
            } else {
                self.amps.rotate_left(k);
                self.amps[len - k..].fill(Complex64::new(0.0, 0.0));
            }
            if dropped > 1e-12 {
                return Err(Error::LadderOverflow {
                    n_max: self.n_max,
                    mass: dropped,
                });
            }
        }
        self.check_edges()
    }
}

/// Splits a momentum into its integer part and quasimomentum in [0, 1).
pub fn split_momentum(p: f64) -> (i64, f64) {
    let n = p.floor();
    let beta = p - n;
    // p slightly below an integer can round to beta == 1.0
    if beta >= 1.0 {
        (n as i64 + 1, 0.0)
    } else {
        (n as i64, beta)
    }
}

fn check_beta(beta: f64) -> Result<()> {
    if (0.0..1.0).contains(&beta) {
        Ok(())
    } else {
        Err(Error::invalid(
            "beta",
            format!("must lie in [0, 1), got {beta}"),
        ))
    }
}

/// Spectral implementation of the delta kick on a ladder of fixed length.
///
/// The ladder is mapped to `2 n_max + 1` angle points by a discrete Fourier
/// transform, multiplied pointwise by `exp(-i phi_d cos x_j)` and mapped back.
#[derive(Clone)]
pub struct Kicker {
    n_max: usize,
    phases: Vec<Complex64>,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
    scratch_len: usize,
}

impl std::fmt::Debug for Kicker {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Kicker")
            .field("n_max", &self.n_max)
            .finish()
    }
}

impl Kicker {
    pub fn new(phi_d: f64, n_max: usize) -> Self {
        let len = 2 * n_max + 1;
        let mut planner = FftPlanner::new();
        let forward = planner.plan_fft_forward(len);
        let inverse = planner.plan_fft_inverse(len);
        let scale = 1.0 / len as f64;
        let phases = (0..len)
            .map(|j| {
                let x = 2.0 * PI * j as f64 / len as f64;
                Complex64::from_polar(scale, -phi_d * x.cos())
            })
            .collect();
        let scratch_len = forward
            .get_inplace_scratch_len()
            .max(inverse.get_inplace_scratch_len());
        Kicker {
            n_max,
            phases,
            forward,
            inverse,
            scratch_len,
        }
    }

    pub fn scratch(&self) -> Vec<Complex64> {
        vec![Complex64::new(0.0, 0.0); self.scratch_len]
    }

    /// Applies one kick in place, then checks the ladder edges.
    pub fn apply(&self, state: &mut BlochState, scratch: &mut Vec<Complex64>) -> Result<()> {
        if state.n_max != self.n_max {
            return Err(Error::invalid(
                "n_max",
                format!("kicker built for {}, state has {}", self.n_max, state.n_max),
            ));
        }
        if scratch.len() < self.scratch_len {
            scratch.resize(self.scratch_len, Complex64::new(0.0, 0.0));
        }
        let amps = &mut state.amps;
        // Put n = 0 at index 0 so index k carries n = k mod L.
        amps.rotate_left(self.n_max);
        // psi(x_j) = sum_n c_n exp(+i n x_j)
        self.inverse.process_with_scratch(amps, scratch);
        for (a, ph) in amps.iter_mut().zip(&self.phases) {
            *a *= ph;
        }
        self.forward.process_with_scratch(amps, scratch);
        amps.rotate_right(self.n_max);
        state.check_edges()
    }
}

/// Fractional number of cycles in `t x^2`, accurate to a few ulps of the
/// fraction even when `t x^2` is large.
fn fractional_cycles(t: f64, x: f64) -> f64 {
    let hi = x * x;
    let lo = x.mul_add(x, -hi);
    let p = t * hi;
    let err = t.mul_add(hi, -p) + t * lo;
    (p - p.floor()) + err
}

/// Free-propagation phase `exp(-i tau (n + beta)^2 / 2)` for one ladder site.
pub fn free_phase(tau: f64, n: i64, beta: f64) -> Complex64 {
    // tau p^2 / 2 = 2 pi (tau / 4 pi) p^2; reducing the cycle count before
    // multiplying by 2 pi keeps resonant phases exact.
    let cycles = fractional_cycles(tau / (4.0 * PI), n as f64 + beta);
    Complex64::from_polar(1.0, -2.0 * PI * cycles)
}

/// Cached free-propagation phases for one (tau, beta, n_max).
#[derive(Debug, Clone)]
pub struct FreePropagator {
    tau: f64,
    beta: f64,
    phases: Vec<Complex64>,
}

impl FreePropagator {
    pub fn new(tau: f64, beta: f64, n_max: usize) -> Self {
        let lo = -(n_max as i64);
        let phases = (0..2 * n_max + 1)
            .map(|i| free_phase(tau, lo + i as i64, beta))
            .collect();
        FreePropagator { tau, beta, phases }
    }

    pub fn apply(&mut self, state: &mut BlochState) {
        if self.beta.to_bits() != state.beta.to_bits() || self.phases.len() != state.amps.len() {
            *self = FreePropagator::new(self.tau, state.beta, state.n_max);
        }
        for (a, ph) in state.amps.iter_mut().zip(&self.phases) {
            *a *= ph;
        }
    }
}

/// One kick, exact up to the ladder truncation.
pub fn kick(mut state: BlochState, phi_d: f64) -> Result<BlochState> {
    let kicker = Kicker::new(phi_d, state.n_max);
    let mut scratch = kicker.scratch();
    kicker.apply(&mut state, &mut scratch)?;
    Ok(state)
}

/// Free evolution over one period.
pub fn free(mut state: BlochState, tau: f64) -> BlochState {
    let mut prop = FreePropagator::new(tau, state.beta, state.n_max);
    prop.apply(&mut state);
    state
}

/// Kick followed by free evolution.
pub fn step(state: BlochState, tau: f64, phi_d: f64) -> Result<BlochState> {
    Ok(free(kick(state, phi_d)?, tau))
}

/// Reusable one-period Floquet operator for many states on the same ladder.
#[derive(Debug, Clone)]
pub struct FloquetPropagator {
    pub tau: f64,
    pub phi_d: f64,
    kicker: Kicker,
}

impl FloquetPropagator {
    pub fn new(tau: f64, phi_d: f64, n_max: usize) -> Self {
        FloquetPropagator {
            tau,
            phi_d,
            kicker: Kicker::new(phi_d, n_max),
        }
    }

    pub fn kicker(&self) -> &Kicker {
        &self.kicker
    }

    /// Per-state working buffers.
    pub fn workspace(&self, beta: f64, n_max: usize) -> Workspace {
        Workspace {
            scratch: self.kicker.scratch(),
            free: FreePropagator::new(self.tau, beta, n_max),
        }
    }

    pub fn kick(&self, state: &mut BlochState, ws: &mut Workspace) -> Result<()> {
        self.kicker.apply(state, &mut ws.scratch)
    }

    pub fn free(&self, state: &mut BlochState, ws: &mut Workspace) {
        ws.free.apply(state);
    }

    pub fn step(&self, state: &mut BlochState, ws: &mut Workspace) -> Result<()> {
        self.kick(state, ws)?;
        self.free(state, ws);
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct Workspace {
    scratch: Vec<Complex64>,
    free: FreePropagator,
}
