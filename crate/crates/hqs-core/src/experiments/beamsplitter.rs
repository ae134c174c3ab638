//! Photon-counting interference at desk scale: two beams of exactly N
//! photons each meet a 50/50 beamsplitter, and the joint photon counts at
//! the two output ports are selected by the hidden-state algorithm on the
//! reachable 2N-photon output sector.
//!
//! The exact output state of |N,N> follows from expanding
//! (a+b)^N (-a+b)^N / (2^N N!) over Fock states (creation operators
//! implied), which reduces to a signed binomial convolution. Odd per-port
//! counts cancel exactly, so those outcomes carry zero Born weight and must
//! never be selected.

use crate::error::{HqsError, Result};
use crate::hilbert::{ProjectiveMeasurement, StateVector};
use crate::selector::select_outcome;
use crate::stats::freq_std_error;

use super::report::{Estimate, ExperimentReport};
use super::{ExperimentConfig, TraceLog, MAX_PHOTONS};

fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

fn binomial(n: usize, k: usize) -> f64 {
    factorial(n) / (factorial(k) * factorial(n - k))
}

/// Real amplitudes of the beamsplitter output of |N,N>, indexed by the
/// photon count m in the first output port (the second port holds 2N - m).
pub fn output_amplitudes(photons: usize) -> Vec<f64> {
    let n = photons;
    let norm = 2f64.powi(n as i32) * factorial(n);
    (0..=2 * n)
        .map(|m| {
            let coeff: f64 = (m.saturating_sub(n)..=m.min(n))
                .map(|k| {
                    let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
                    sign * binomial(n, m - k) * binomial(n, k)
                })
                .sum();
            coeff * (factorial(m) * factorial(2 * n - m)).sqrt() / norm
        })
        .collect()
}

pub fn outcome_labels(photons: usize) -> Vec<String> {
    (0..=2 * photons)
        .map(|m| format!("|{m},{}⟩", 2 * photons - m))
        .collect()
}

pub fn run(config: &ExperimentConfig) -> Result<ExperimentReport> {
    run_traced(config, &mut TraceLog::disabled())
}

pub fn run_traced(config: &ExperimentConfig, log: &mut TraceLog) -> Result<ExperimentReport> {
    let spec = config
        .beamsplitter
        .as_ref()
        .ok_or_else(|| HqsError::Config("beamsplitter requires a beamsplitter section".into()))?;
    let n = spec.photons;
    if n == 0 {
        return Err(HqsError::Config(
            "beamsplitter needs at least one photon per beam".into(),
        ));
    }
    if n > MAX_PHOTONS {
        return Err(HqsError::PhotonCapExceeded(n));
    }

    let amplitudes = output_amplitudes(n);
    let psi = StateVector::from_real(&amplitudes)?;
    let dim = 2 * n + 1;
    let m = ProjectiveMeasurement::standard(outcome_labels(n))?;
    let source = config.hidden_source(dim)?;
    let strategy = config.strategy_for(&source, dim)?;
    let born = m.born_probabilities(&psi)?;

    let mut counts = vec![0u64; dim];
    for trial in 0..config.trials {
        let phi = source.sample_hidden(trial);
        let trace = select_outcome(&psi, &phi, &m, &strategy)?;
        log.record(&trace);
        counts[trace.permutation[trace.selected_rank - 1]] += 1;
    }

    let trials = config.trials as f64;
    let mut estimates = Vec::with_capacity(dim + 1);
    for ((label, &count), &p) in m.labels().iter().zip(&counts).zip(born.probs()) {
        let freq = count as f64 / trials;
        // Outcomes the convolution cancels exactly (odd per-port counts)
        // must have frequency exactly zero, not merely small.
        let estimate = if p < 1e-12 {
            Estimate::gated(format!("freq[{label}]"), freq, None, 0.0, 0.0)
        } else {
            Estimate::gated(
                format!("freq[{label}]"),
                freq,
                Some(freq_std_error(freq, config.trials as usize)),
                p,
                config.tolerance,
            )
        };
        estimates.push(estimate);
    }
    // Fraction of runs with unequal counts at the two ports, despite the
    // phase-free input.
    let equal_freq = counts[n] as f64 / trials;
    estimates.push(Estimate::reported(
        "unequal_count_fraction",
        1.0 - equal_freq,
        None,
    ));

    let notes = vec![format!(
        "hidden state restricted to the {}-photon output sector reachable from |{n},{n}> \
         (dimension {dim})",
        2 * n
    )];
    Ok(ExperimentReport::new(config, estimates, vec![], notes))
}
