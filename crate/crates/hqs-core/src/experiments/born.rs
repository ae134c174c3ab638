//! Born-reproduction check: averaging outcome selection over a random hidden
//! state must recover the Born distribution of the standard state.

use crate::error::Result;
use crate::selector::select_outcome;
use crate::stats::freq_std_error;

use super::report::{Estimate, ExperimentReport};
use super::{ExperimentConfig, TraceLog};

pub fn run(config: &ExperimentConfig) -> Result<ExperimentReport> {
    run_traced(config, &mut TraceLog::disabled())
}

pub fn run_traced(config: &ExperimentConfig, log: &mut TraceLog) -> Result<ExperimentReport> {
    let psi = config.psi()?;
    let m = config.measurement(0)?;
    let source = config.hidden_source(psi.dim())?;
    let strategy = config.strategy_for(&source, psi.dim())?;

    let born = m.born_probabilities(&psi)?;
    let expected = match &config.expected {
        Some(given) if given.len() == m.dim() => given.clone(),
        Some(given) => {
            return Err(crate::error::HqsError::Config(format!(
                "expected has {} entries for a {}-outcome measurement",
                given.len(),
                m.dim()
            )))
        }
        None => born.probs().to_vec(),
    };

    let mut counts = vec![0u64; m.dim()];
    for trial in 0..config.trials {
        let phi = source.sample_hidden(trial);
        let trace = select_outcome(&psi, &phi, &m, &strategy)?;
        log.record(&trace);
        counts[trace.permutation[trace.selected_rank - 1]] += 1;
    }

    let n = config.trials as f64;
    let mut estimates = Vec::with_capacity(m.dim() + 1);
    let mut max_dev = 0.0f64;
    for ((label, &count), &target) in m.labels().iter().zip(&counts).zip(&expected) {
        let freq = count as f64 / n;
        max_dev = max_dev.max((freq - target).abs());
        estimates.push(Estimate::gated(
            format!("freq[{label}]"),
            freq,
            Some(freq_std_error(freq, config.trials as usize)),
            target,
            config.tolerance,
        ));
    }
    estimates.push(Estimate::reported("max_abs_deviation", max_dev, None));

    Ok(ExperimentReport::new(config, estimates, vec![], vec![]))
}
