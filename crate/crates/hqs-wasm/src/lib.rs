//! Browser bindings for the hidden-quantum-state demo page: a contextuality
//! explorer on a qutrit, a Born-convergence histogram, and the sequential
//! correlation sweep over the hidden-state keep-probability.
//!
//! All entry points take and return JSON strings, so the page needs nothing
//! beyond `JSON.parse`. The `*_impl` functions hold the logic and stay
//! callable on native targets; the `#[wasm_bindgen]` wrappers only translate
//! errors.

use serde::Serialize;
use wasm_bindgen::prelude::*;

use hqs_core::experiments::config::SystemSpec;
use hqs_core::experiments::{self, ExperimentConfig, ExperimentKind};
use hqs_core::selector::select_outcome;
use hqs_core::{ProjectiveMeasurement, SelectionTrace, StateVector, ThresholdStrategy};

fn parse_weights(json: &str) -> Result<Vec<f64>, String> {
    let weights: Vec<f64> = serde_json::from_str(json)
        .map_err(|e| format!("weights must be a JSON array of numbers: {e}"))?;
    if weights.len() < 2 {
        return Err("need at least two outcome weights".into());
    }
    if weights.iter().any(|w| !w.is_finite() || *w < 0.0) {
        return Err("weights must be finite and nonnegative".into());
    }
    Ok(weights)
}

fn state_from_weights(weights: &[f64]) -> Result<StateVector, String> {
    let amps: Vec<f64> = weights.iter().map(|w| w.sqrt()).collect();
    StateVector::from_real(&amps).map_err(|e| e.to_string())
}

fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string(value).expect("demo payloads serialize")
}

#[derive(Serialize)]
struct ContextView {
    name: String,
    labels: Vec<String>,
    trace: SelectionTrace,
}

#[derive(Serialize)]
struct ContextualPair {
    contexts: Vec<ContextView>,
    /// True when the label shared by both bases fires in exactly one of them.
    contextual: bool,
    shared_label: String,
}

fn contextual_pair_impl(psi_weights: &str, phi_weights: &str) -> Result<String, String> {
    let pw = parse_weights(psi_weights)?;
    let qw = parse_weights(phi_weights)?;
    if pw.len() != 3 || qw.len() != 3 {
        return Err("the contextuality demo runs on a qutrit: three weights".into());
    }
    let psi = state_from_weights(&pw)?;
    let phi = state_from_weights(&qw)?;

    let sz = ProjectiveMeasurement::standard(vec!["mz=-1".into(), "mz=0".into(), "mz=+1".into()])
        .map_err(|e| e.to_string())?;
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let rotated = ProjectiveMeasurement::new(
        vec![
            StateVector::from_real(&[s, s, 0.0]).unwrap(),
            StateVector::from_real(&[s, -s, 0.0]).unwrap(),
            StateVector::basis_state(3, 2).unwrap(),
        ],
        vec!["+".into(), "-".into(), "mz=+1".into()],
    )
    .map_err(|e| e.to_string())?;

    let strategy = ThresholdStrategy::AnalyticHaar;
    let t1 = select_outcome(&psi, &phi, &sz, &strategy).map_err(|e| e.to_string())?;
    let t2 = select_outcome(&psi, &phi, &rotated, &strategy).map_err(|e| e.to_string())?;
    let shared = "mz=+1".to_string();
    let contextual = (t1.selected_label == shared) != (t2.selected_label == shared);
    let payload = ContextualPair {
        contexts: vec![
            ContextView {
                name: "S_z basis".into(),
                labels: sz.labels().to_vec(),
                trace: t1,
            },
            ContextView {
                name: "rotated basis".into(),
                labels: rotated.labels().to_vec(),
                trace: t2,
            },
        ],
        contextual,
        shared_label: shared,
    };
    Ok(to_json(&payload))
}

/// Contextuality explorer: one qutrit psi and one hidden phi (outcome
/// weights, not amplitudes), selected in the S_z basis and in the rotated
/// basis {|+>, |->, |mz=+1>} that still contains mz=+1.
#[wasm_bindgen]
pub fn contextual_pair(psi_weights: &str, phi_weights: &str) -> Result<String, JsError> {
    contextual_pair_impl(psi_weights, phi_weights).map_err(|e| JsError::new(&e))
}

#[derive(Serialize)]
struct Histogram {
    labels: Vec<String>,
    born: Vec<f64>,
    freq: Vec<f64>,
    std_error: Vec<f64>,
    trials: u32,
}

fn born_histogram_impl(psi_weights: &str, trials: u32, seed: u32) -> Result<String, String> {
    let weights = parse_weights(psi_weights)?;
    if weights.len() > 8 {
        return Err("demo caps the dimension at 8".into());
    }
    let trials = trials.clamp(1, 200_000);
    let mut config = ExperimentConfig::defaults(ExperimentKind::BornCheck);
    config.seed = seed as u64;
    config.trials = trials as u64;
    config.system = Some(SystemSpec {
        psi: weights.iter().map(|w| [w.sqrt(), 0.0]).collect(),
    });
    config.measurements = vec![];
    let report = experiments::run(&config).map_err(|e| e.to_string())?;

    let dim = weights.len();
    let mut payload = Histogram {
        labels: (0..dim).map(|i| i.to_string()).collect(),
        born: Vec::with_capacity(dim),
        freq: Vec::with_capacity(dim),
        std_error: Vec::with_capacity(dim),
        trials,
    };
    for label in &payload.labels {
        let estimate = report
            .estimate(&format!("freq[{label}]"))
            .ok_or("missing frequency estimate")?;
        payload.freq.push(estimate.value);
        payload.born.push(estimate.expected.unwrap_or(f64::NAN));
        payload
            .std_error
            .push(estimate.std_error.unwrap_or(f64::NAN));
    }
    Ok(to_json(&payload))
}

/// Born-convergence histogram: outcome frequencies over `trials` fresh Haar
/// hidden states against the Born distribution of the given weights.
#[wasm_bindgen]
pub fn born_histogram(psi_weights: &str, trials: u32, seed: u32) -> Result<String, JsError> {
    born_histogram_impl(psi_weights, trials, seed).map_err(|e| JsError::new(&e))
}

#[derive(Serialize)]
struct Sweep {
    kappas: Vec<f64>,
    r_x: Vec<f64>,
    r_z: Vec<f64>,
    trials: u32,
    length: u32,
}

fn sequential_sweep_impl(
    kappas: &str,
    trials: u32,
    length: u32,
    seed: u32,
) -> Result<String, String> {
    let kappas: Vec<f64> =
        serde_json::from_str(kappas).map_err(|e| format!("kappas must be a JSON array: {e}"))?;
    if kappas.is_empty() || kappas.iter().any(|k| !(0.0..=1.0).contains(k)) {
        return Err("kappas must lie in [0, 1]".into());
    }
    let trials = trials.clamp(1, 20_000);
    let length = length.clamp(4, 100) & !1; // even, capped

    let mut config = ExperimentConfig::defaults(ExperimentKind::Sequential);
    config.seed = seed as u64;
    config.trials = trials as u64;
    let spec = config
        .sequential
        .as_mut()
        .expect("default carries a sequential section");
    spec.length = length as usize;
    spec.kappas = kappas.clone();
    let report = experiments::run(&config).map_err(|e| e.to_string())?;

    let mut payload = Sweep {
        kappas: kappas.clone(),
        r_x: Vec::with_capacity(kappas.len()),
        r_z: Vec::with_capacity(kappas.len()),
        trials,
        length,
    };
    for kappa in &kappas {
        let rx = report
            .estimate(&format!("sweep.r_x[kappa={kappa}]"))
            .ok_or("missing sweep estimate")?;
        let rz = report
            .estimate(&format!("sweep.r_z[kappa={kappa}]"))
            .ok_or("missing sweep estimate")?;
        payload.r_x.push(rx.value);
        payload.r_z.push(rz.value);
    }
    Ok(to_json(&payload))
}

/// Sequential-measurement sweep: lag-1 correlations of repeated X (and Z)
/// outcomes as the hidden-state keep-probability kappa varies.
#[wasm_bindgen]
pub fn sequential_sweep(
    kappas: &str,
    trials: u32,
    length: u32,
    seed: u32,
) -> Result<String, JsError> {
    sequential_sweep_impl(kappas, trials, length, seed).map_err(|e| JsError::new(&e))
}
