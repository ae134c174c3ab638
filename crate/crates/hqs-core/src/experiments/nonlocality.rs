//! Nonlocality demo: with an entangled standard state, the outcome on
//! subsystem B depends on which measurement is performed on A, at fixed
//! hidden state.

use crate::error::{HqsError, Result};
use crate::sampling::{domain, HiddenSource};
use crate::selector::{select_outcome, ThresholdStrategy};
use crate::stats::freq_std_error;

use super::contextuality::fixed_hidden_state;
use super::report::{Estimate, ExperimentReport, GoldenCheck};
use super::{ExperimentConfig, TraceLog};

/// Splits a joint outcome label "a⊗b" into its per-arm parts.
pub(super) fn split_joint(label: &str) -> Result<(String, String)> {
    match label.split_once('⊗') {
        Some((a, b)) => Ok((a.to_string(), b.to_string())),
        None => Err(HqsError::Config(format!(
            "joint outcome label {label:?} is not of the form a⊗b"
        ))),
    }
}

pub fn run(config: &ExperimentConfig) -> Result<ExperimentReport> {
    run_traced(config, &mut TraceLog::disabled())
}

pub fn run_traced(config: &ExperimentConfig, log: &mut TraceLog) -> Result<ExperimentReport> {
    let psi = config.psi()?;
    let m1 = config.measurement(0)?;
    let m2 = config.measurement(1)?;
    let source = config.hidden_source(psi.dim())?;
    let phi = fixed_hidden_state(&source)?;
    let strategy = ThresholdStrategy::AnalyticHaar;

    let trace1 = select_outcome(&psi, &phi, &m1, &strategy)?;
    let trace2 = select_outcome(&psi, &phi, &m2, &strategy)?;
    log.record(&trace1);
    log.record(&trace2);
    let (_, b1) = split_joint(&trace1.selected_label)?;
    let (_, b2) = split_joint(&trace2.selected_label)?;

    let mut golden_checks = Vec::new();
    if let Some(expected) = &config.golden_outcomes {
        if expected.len() != 2 {
            return Err(HqsError::Config(
                "nonlocality golden_outcomes must name one outcome per context".into(),
            ));
        }
        golden_checks.push(GoldenCheck::labels(
            "context 1 joint outcome",
            &expected[0],
            &trace1.selected_label,
        ));
        golden_checks.push(GoldenCheck::labels(
            "context 2 joint outcome",
            &expected[1],
            &trace2.selected_label,
        ));
    }

    let mut estimates = vec![
        Estimate::reported("ctx1.p1", trace1.sorted_p[0], None),
        Estimate::reported("ctx1.q1", trace1.sorted_q[0], None),
        Estimate::reported("ctx1.pi1", trace1.thresholds[0], None),
        Estimate::reported("ctx2.p1", trace2.sorted_p[0], None),
        Estimate::reported("ctx2.q1", trace2.sorted_q[0], None),
        Estimate::reported("ctx2.pi1", trace2.thresholds[0], None),
    ];
    let notes = vec![format!(
        "B outcome at the fixed hidden state: {b1:?} under context 1, {b2:?} under context 2"
    )];

    // Fraction of random hidden states for which B's outcome differs across
    // the two A-contexts. Reported, not gated.
    let scan_source = HiddenSource::haar(psi.dim(), config.seed)?;
    let mut flips = 0u64;
    for k in 0..config.trials {
        let sample = scan_source.sample_in_domain(domain::SCAN, k);
        let t1 = select_outcome(&psi, &sample, &m1, &strategy)?;
        let t2 = select_outcome(&psi, &sample, &m2, &strategy)?;
        log.record(&t1);
        log.record(&t2);
        if split_joint(&t1.selected_label)?.1 != split_joint(&t2.selected_label)?.1 {
            flips += 1;
        }
    }
    let fraction = flips as f64 / config.trials as f64;
    estimates.push(Estimate::reported(
        "b_flip_fraction",
        fraction,
        Some(freq_std_error(fraction, config.trials as usize)),
    ));

    Ok(ExperimentReport::new(
        config,
        estimates,
        golden_checks,
        notes,
    ))
}
