//! Deterministic outcome selection from (standard state, hidden state,
//! measurement) via a sorted-probability threshold schedule.
//!
//! Outcomes are ranked by descending Born probability. Rank 1 fires iff the
//! hidden weight q_1 exceeds a threshold chosen so that, averaged over the
//! hidden-state distribution, it fires with probability p_1; each later rank
//! fires with the matching conditional probability given that all earlier
//! ranks failed. Rank D carries a -inf sentinel, so selection is total.
//!
//! Under the Haar distribution the hidden weights (q_1..q_D) in any fixed
//! basis are uniform on the probability simplex, which gives every threshold
//! in closed form. For other sources the thresholds are estimated as
//! empirical conditional quantiles.

use serde::{Deserialize, Serialize};

use crate::error::{HqsError, Result};
use crate::hilbert::{OutcomeDistribution, ProjectiveMeasurement, StateVector};
use crate::sampling::{domain, HiddenSource};

/// Minimum surviving samples before the empirical conditioning band widens.
const MIN_CONDITIONED_SAMPLES: usize = 100;
/// Geometric band widenings attempted before conditioning is declared starved.
const MAX_BAND_RETRIES: usize = 8;

/// How per-rank thresholds are obtained.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub enum ThresholdStrategy {
    /// Closed-form thresholds for a hidden state drawn Haar-uniformly on the
    /// full system dimension. Born reproduction is only guaranteed when the
    /// hidden source actually is that distribution.
    AnalyticHaar,
    /// Thresholds estimated as empirical (conditional) quantiles over fresh
    /// draws from the given source. `sample_count` should be at least 10^4
    /// for statistically meaningful runs.
    EmpiricalQuantile {
        source: HiddenSource,
        sample_count: usize,
        band_epsilon: f64,
    },
}

/// The sorted (p, q, pi) table, the sort permutation, and the selected
/// outcome for one run of the selection algorithm.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SelectionTrace {
    /// Born probabilities of the standard state, descending.
    pub sorted_p: Vec<f64>,
    /// Hidden-state weights in the same permuted order.
    pub sorted_q: Vec<f64>,
    /// Per-rank thresholds; the final rank's -inf sentinel serializes as null.
    #[serde(
        serialize_with = "serialize_thresholds",
        deserialize_with = "deserialize_thresholds"
    )]
    pub thresholds: Vec<f64>,
    /// Map from sorted rank (position) to original outcome index, 0-based.
    pub permutation: Vec<usize>,
    /// 1-based rank of the selected outcome in the sorted table.
    pub selected_rank: usize,
    /// Label of the selected outcome in the original measurement.
    pub selected_label: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
}

fn serialize_thresholds<S: serde::Serializer>(
    v: &[f64],
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    let mapped: Vec<Option<f64>> = v.iter().map(|&x| x.is_finite().then_some(x)).collect();
    mapped.serialize(s)
}

fn deserialize_thresholds<'de, D: serde::Deserializer<'de>>(
    d: D,
) -> std::result::Result<Vec<f64>, D::Error> {
    let raw: Vec<Option<f64>> = Deserialize::deserialize(d)?;
    Ok(raw
        .into_iter()
        .map(|x| x.unwrap_or(f64::NEG_INFINITY))
        .collect())
}

/// Stable descending sort of a distribution. Returns the sorted values and
/// the permutation mapping sorted position to original index; ties keep the
/// original label order, so traces are label-deterministic.
pub fn sort_descending(dist: &OutcomeDistribution) -> (Vec<f64>, Vec<usize>) {
    let probs = dist.probs();
    let mut perm: Vec<usize> = (0..probs.len()).collect();
    perm.sort_by(|&a, &b| probs[b].total_cmp(&probs[a]).then(a.cmp(&b)));
    let sorted = perm.iter().map(|&i| probs[i]).collect();
    (sorted, perm)
}

/// First-rank threshold under Haar: pi_1 = 1 - p1^(1/(D-1)), the value whose
/// exceedance probability under Prob(q1 > c) = (1-c)^(D-1) equals p1.
pub fn haar_threshold_first(p1: f64, dim: usize) -> f64 {
    debug_assert!(dim >= 2);
    (1.0 - p1.powf(1.0 / (dim - 1) as f64)).clamp(0.0, 1.0)
}

/// Full threshold schedule under Haar. Conditional on the values q_1..q_n,
/// the remaining hidden weights are uniform on the simplex of mass
/// r_n = 1 - sum(q_1..q_n), so
/// Prob(q_{n+1} > pi | q_1..q_n) = (1 - pi/r_n)^(D-n-1) and the rank-(n+1)
/// threshold solving that for the conditional target
/// c_{n+1} = p_{n+1} / (1 - p_1 - ... - p_n) is
/// pi_{n+1} = r_n * (1 - c_{n+1}^(1/(D-n-1))).
///
/// The last rank gets a -inf sentinel: its conditional target is 1 and
/// q_D equals r_{D-1} exactly. If the standard-state mass is already
/// exhausted (denominator below 1e-15), remaining middle ranks get the
/// unreachable threshold r_n, deferring to the fallback.
pub fn haar_threshold_schedule(sorted_p: &[f64], sorted_q: &[f64], dim: usize) -> Vec<f64> {
    debug_assert_eq!(sorted_p.len(), dim);
    debug_assert_eq!(sorted_q.len(), dim);
    let mut thresholds = vec![0.0; dim];
    thresholds[0] = haar_threshold_first(sorted_p[0], dim);
    let mut p_used = sorted_p[0];
    let mut q_used = sorted_q[0];
    for idx in 1..dim {
        if idx == dim - 1 {
            thresholds[idx] = f64::NEG_INFINITY;
            break;
        }
        let remaining_p = 1.0 - p_used;
        let remaining_q = (1.0 - q_used).max(0.0);
        thresholds[idx] = if remaining_p <= 1e-15 {
            remaining_q
        } else {
            let c = (sorted_p[idx] / remaining_p).min(1.0);
            let exponent = 1.0 / (dim - idx - 1) as f64;
            remaining_q * (1.0 - c.powf(exponent))
        };
        p_used += sorted_p[idx];
        q_used += sorted_q[idx];
    }
    thresholds
}

/// Empirical threshold schedule for an arbitrary sampleable source.
///
/// pi_1 is the (1 - p_1)-quantile of q_1 over `sample_count` fresh draws;
/// each later threshold is the matching conditional quantile over the draws
/// whose earlier q-values lie within `band_epsilon` of the observed ones
/// (rejection conditioning, band doubled up to 8 times if fewer than 100
/// draws survive). Returns the schedule plus any warnings.
pub fn empirical_threshold_schedule(
    sorted_p: &[f64],
    observed_sorted_q: &[f64],
    sorted_basis: &[StateVector],
    source: &HiddenSource,
    sample_count: usize,
    band_epsilon: f64,
) -> Result<(Vec<f64>, Vec<String>)> {
    let dim = sorted_p.len();
    let mut warnings = Vec::new();

    // q-vectors of the fresh draws, in sorted-basis order.
    let mut samples: Vec<Vec<f64>> = Vec::with_capacity(sample_count);
    for k in 0..sample_count {
        let phi = source.sample_in_domain(domain::EMPIRICAL, k as u64);
        let q: Vec<f64> = sorted_basis
            .iter()
            .map(|v| v.inner_product(&phi).map(|ip| ip.norm_sqr()))
            .collect::<Result<_>>()?;
        samples.push(q);
    }

    let first: Vec<f64> = samples.iter().map(|q| q[0]).collect();
    if is_degenerate(&first) {
        warnings.push(
            "degenerate hidden-state distribution: thresholds are point-mass quantiles".into(),
        );
    }

    let mut thresholds = vec![0.0; dim];
    thresholds[0] = quantile(first, 1.0 - sorted_p[0]);
    let mut p_used = sorted_p[0];
    for idx in 1..dim {
        if idx == dim - 1 {
            thresholds[idx] = f64::NEG_INFINITY;
            break;
        }
        let remaining_p = 1.0 - p_used;
        let c = if remaining_p <= 1e-15 {
            0.0
        } else {
            (sorted_p[idx] / remaining_p).min(1.0)
        };

        let mut band = band_epsilon;
        let mut conditioned: Vec<f64> = Vec::new();
        let mut retries = 0;
        loop {
            conditioned.clear();
            conditioned.extend(samples.iter().filter_map(|q| {
                let inside = (0..idx).all(|k| (q[k] - observed_sorted_q[k]).abs() <= band);
                inside.then_some(q[idx])
            }));
            if conditioned.len() >= MIN_CONDITIONED_SAMPLES {
                break;
            }
            if retries == MAX_BAND_RETRIES {
                return Err(HqsError::ConditioningStarved {
                    rank: idx + 1,
                    retries,
                });
            }
            retries += 1;
            band *= 2.0;
        }
        if retries > 0 {
            warnings.push(format!(
                "rank {}: conditioning band widened {} time(s) to {:.3e}",
                idx + 1,
                retries,
                band
            ));
        }
        thresholds[idx] = quantile(conditioned, 1.0 - c);
        p_used += sorted_p[idx];
    }
    Ok((thresholds, warnings))
}

fn is_degenerate(values: &[f64]) -> bool {
    match values.first() {
        Some(&v0) => values.iter().all(|&v| (v - v0).abs() < 1e-15),
        None => true,
    }
}

/// Lower empirical quantile at `level` in [0, 1].
fn quantile(mut values: Vec<f64>, level: f64) -> f64 {
    assert!(!values.is_empty());
    values.sort_by(f64::total_cmp);
    let pos = (level.clamp(0.0, 1.0) * values.len() as f64).floor() as usize;
    values[pos.min(values.len() - 1)]
}

/// Runs the selection algorithm for one (standard state, hidden state,
/// measurement) triple. Pure: identical inputs give identical traces.
pub fn select_outcome(
    psi: &StateVector,
    phi: &StateVector,
    m: &ProjectiveMeasurement,
    strategy: &ThresholdStrategy,
) -> Result<SelectionTrace> {
    if psi.dim() != m.dim() {
        return Err(HqsError::DimensionMismatch {
            left: psi.dim(),
            right: m.dim(),
        });
    }
    if phi.dim() != m.dim() {
        return Err(HqsError::DimensionMismatch {
            left: phi.dim(),
            right: m.dim(),
        });
    }

    let p = m.born_probabilities(psi)?;
    let q = m.born_probabilities(phi)?;
    let (sorted_p, permutation) = sort_descending(&p);
    let sorted_q: Vec<f64> = permutation.iter().map(|&i| q.probs()[i]).collect();

    let (thresholds, warnings) = match strategy {
        ThresholdStrategy::AnalyticHaar => (
            haar_threshold_schedule(&sorted_p, &sorted_q, m.dim()),
            Vec::new(),
        ),
        ThresholdStrategy::EmpiricalQuantile {
            source,
            sample_count,
            band_epsilon,
        } => {
            if source.dim() != m.dim() {
                return Err(HqsError::StrategyMismatch(format!(
                    "empirical source dimension {} vs measurement dimension {}",
                    source.dim(),
                    m.dim()
                )));
            }
            let sorted_basis: Vec<StateVector> =
                permutation.iter().map(|&i| m.basis()[i].clone()).collect();
            empirical_threshold_schedule(
                &sorted_p,
                &sorted_q,
                &sorted_basis,
                source,
                *sample_count,
                *band_epsilon,
            )?
        }
    };

    // Strict inequality: an exact tie q = pi rejects the rank. The -inf
    // sentinel on the final rank guarantees a selection.
    let selected_idx = sorted_q
        .iter()
        .zip(&thresholds)
        .position(|(q, pi)| q > pi)
        .expect("final-rank sentinel guarantees selection");

    Ok(SelectionTrace {
        selected_rank: selected_idx + 1,
        selected_label: m.labels()[permutation[selected_idx]].clone(),
        sorted_p,
        sorted_q,
        thresholds,
        permutation,
        warnings,
    })
}
