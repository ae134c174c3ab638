//! Seeded random sources for hidden states: Haar-uniform sampling on the
//! unit sphere of a D-dimensional complex Hilbert space, fixed states, and
//! products of independent Haar factors, plus the refresh policies that
//! govern hidden-state behavior across sequential measurements.
//!
//! Every draw is a pure function of `(seed, domain, index)`; no shared
//! mutable RNG state exists anywhere, so trials can run in any order and
//! still reproduce byte-identically.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use serde::{Deserialize, Serialize};

use crate::error::{HqsError, Result};
use crate::hilbert::StateVector;

/// Stream domains keep draws for different purposes statistically disjoint
/// even when they share a seed and an index.
pub mod domain {
    /// Per-trial hidden-state draws.
    pub const HIDDEN: u64 = 1;
    /// Post-measurement refresh decisions and redraws.
    pub const REFRESH: u64 = 2;
    /// Internal sampling performed by the empirical threshold strategy.
    pub const EMPIRICAL: u64 = 3;
    /// Scratch streams for auxiliary scans inside experiments.
    pub const SCAN: u64 = 4;
}

fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9e3779b97f4a7c15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
    z ^ (z >> 31)
}

/// A deterministic random stream addressed by `(seed, domain, index)`.
///
/// Identical addresses yield identical sample sequences, independent of
/// call order anywhere else in the program.
#[derive(Debug)]
pub struct RandomStream {
    rng: ChaCha12Rng,
}

impl RandomStream {
    pub fn derive(seed: u64, domain: u64, index: u64) -> Self {
        let mut state = seed ^ 0x6a09e667f3bcc908;
        let mut key = [0u8; 32];
        let a = splitmix64(&mut state);
        state ^= domain.wrapping_mul(0xd6e8feb86659fd93);
        let b = splitmix64(&mut state);
        state ^= index.wrapping_mul(0xa5a3564e1fc93e07);
        let c = splitmix64(&mut state);
        let d = splitmix64(&mut state);
        key[0..8].copy_from_slice(&a.to_le_bytes());
        key[8..16].copy_from_slice(&b.to_le_bytes());
        key[16..24].copy_from_slice(&c.to_le_bytes());
        key[24..32].copy_from_slice(&d.to_le_bytes());
        Self {
            rng: ChaCha12Rng::from_seed(key),
        }
    }

    /// Uniform draw in [0, 1).
    pub fn uniform(&mut self) -> f64 {
        self.rng.random::<f64>()
    }

    /// A standard-normal pair via Box-Muller.
    pub fn normal_pair(&mut self) -> (f64, f64) {
        // 1 - u maps [0,1) onto (0,1] so the log is finite.
        let u1 = 1.0 - self.rng.random::<f64>();
        let u2 = self.rng.random::<f64>();
        let r = (-2.0 * u1.ln()).sqrt();
        let theta = std::f64::consts::TAU * u2;
        (r * theta.cos(), r * theta.sin())
    }
}

/// Draws a state from the unitarily invariant (Haar) distribution on the
/// unit sphere of the `dim`-dimensional complex space: 2*dim independent
/// standard normals interpreted as dim complex amplitudes, then normalized.
pub fn sample_haar(dim: usize, stream: &mut RandomStream) -> Result<StateVector> {
    if dim < 2 {
        return Err(HqsError::DimensionTooSmall(dim));
    }
    loop {
        let amplitudes: Vec<Complex64> = (0..dim)
            .map(|_| {
                let (re, im) = stream.normal_pair();
                Complex64::new(re, im)
            })
            .collect();
        // A vanishing Gaussian vector has probability zero; redraw if the
        // normalization floor is ever hit.
        match StateVector::new(amplitudes) {
            Ok(state) => return Ok(state),
            Err(HqsError::NotNormalizable { .. }) => continue,
            Err(e) => return Err(e),
        }
    }
}

/// The distribution Pr(.) the hidden state is drawn from.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub enum HiddenDistribution {
    /// Haar-uniform on the full `dim`-dimensional space.
    HaarUniform { dim: usize },
    /// A point mass on one state.
    FixedState(StateVector),
    /// Independent Haar factors on each subsystem, tensored together.
    ProductHaar { dims: Vec<usize> },
}

/// How the hidden state behaves after a measurement.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum RefreshPolicy {
    /// Redrawn fresh from the source distribution after every measurement.
    FullRefresh,
    /// Never changes.
    Persistent,
    /// Kept with probability `kappa`, redrawn with probability `1 - kappa`.
    Mixture { kappa: f64 },
}

/// A sampling distribution over hidden states plus the refresh policy and
/// the seed all of its streams derive from.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct HiddenSource {
    distribution: HiddenDistribution,
    seed: u64,
    refresh_policy: RefreshPolicy,
}

impl HiddenSource {
    pub fn new(
        distribution: HiddenDistribution,
        seed: u64,
        refresh_policy: RefreshPolicy,
    ) -> Result<Self> {
        match &distribution {
            HiddenDistribution::HaarUniform { dim } => {
                if *dim < 2 {
                    return Err(HqsError::DimensionTooSmall(*dim));
                }
            }
            HiddenDistribution::FixedState(_) => {}
            HiddenDistribution::ProductHaar { dims } => {
                if dims.is_empty() {
                    return Err(HqsError::DimensionTooSmall(0));
                }
                for &d in dims {
                    if d < 2 {
                        return Err(HqsError::DimensionTooSmall(d));
                    }
                }
            }
        }
        if let RefreshPolicy::Mixture { kappa } = refresh_policy {
            if !(0.0..=1.0).contains(&kappa) || kappa.is_nan() {
                return Err(HqsError::KappaOutOfRange(kappa));
            }
        }
        Ok(Self {
            distribution,
            seed,
            refresh_policy,
        })
    }

    pub fn haar(dim: usize, seed: u64) -> Result<Self> {
        Self::new(
            HiddenDistribution::HaarUniform { dim },
            seed,
            RefreshPolicy::FullRefresh,
        )
    }

    pub fn fixed(state: StateVector, seed: u64) -> Self {
        Self {
            distribution: HiddenDistribution::FixedState(state),
            seed,
            refresh_policy: RefreshPolicy::FullRefresh,
        }
    }

    pub fn distribution(&self) -> &HiddenDistribution {
        &self.distribution
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn refresh_policy(&self) -> RefreshPolicy {
        self.refresh_policy
    }

    pub fn with_refresh(mut self, policy: RefreshPolicy) -> Result<Self> {
        if let RefreshPolicy::Mixture { kappa } = policy {
            if !(0.0..=1.0).contains(&kappa) || kappa.is_nan() {
                return Err(HqsError::KappaOutOfRange(kappa));
            }
        }
        self.refresh_policy = policy;
        Ok(self)
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    /// Dimension of the states this source produces.
    pub fn dim(&self) -> usize {
        match &self.distribution {
            HiddenDistribution::HaarUniform { dim } => *dim,
            HiddenDistribution::FixedState(state) => state.dim(),
            HiddenDistribution::ProductHaar { dims } => dims.iter().product(),
        }
    }

    pub fn is_haar_on(&self, dim: usize) -> bool {
        matches!(&self.distribution, HiddenDistribution::HaarUniform { dim: d } if *d == dim)
    }

    /// Draws the hidden state for one trial. Depends only on
    /// `(seed, trial_index)`, not on call order.
    pub fn sample_hidden(&self, trial_index: u64) -> StateVector {
        self.sample_in_domain(domain::HIDDEN, trial_index)
    }

    /// Draws from the source distribution in an explicit stream domain.
    pub fn sample_in_domain(&self, stream_domain: u64, index: u64) -> StateVector {
        let mut stream = RandomStream::derive(self.seed, stream_domain, index);
        self.sample_from(&mut stream)
    }

    fn sample_from(&self, stream: &mut RandomStream) -> StateVector {
        match &self.distribution {
            HiddenDistribution::HaarUniform { dim } => {
                sample_haar(*dim, stream).expect("dimension validated at construction")
            }
            HiddenDistribution::FixedState(state) => state.clone(),
            HiddenDistribution::ProductHaar { dims } => {
                let mut factors = dims
                    .iter()
                    .map(|&d| sample_haar(d, stream).expect("dimension validated at construction"));
                let first = factors.next().expect("dims non-empty");
                factors.fold(first, |acc, f| acc.tensor(&f))
            }
        }
    }

    /// Applies the refresh policy after a measurement. The keep/redraw
    /// decision and any redraw come from the stream at `step_index`.
    pub fn refresh_hidden(&self, previous: &StateVector, step_index: u64) -> Result<StateVector> {
        if previous.dim() != self.dim() {
            return Err(HqsError::DimensionMismatch {
                left: previous.dim(),
                right: self.dim(),
            });
        }
        let mut stream = RandomStream::derive(self.seed, domain::REFRESH, step_index);
        // Every policy consumes the decision draw, so Mixture(0) redraws
        // bit-identically to FullRefresh and Mixture(1) to Persistent.
        let decision = stream.uniform();
        let keep = match self.refresh_policy {
            RefreshPolicy::Persistent => true,
            RefreshPolicy::FullRefresh => false,
            RefreshPolicy::Mixture { kappa } => decision < kappa,
        };
        if keep {
            Ok(previous.clone())
        } else {
            Ok(self.sample_from(&mut stream))
        }
    }
}
