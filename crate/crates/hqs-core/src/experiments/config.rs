//! Experiment configuration: a JSON-friendly schema with amplitudes as
//! `[re, im]` pairs, plus compiled-in default configs carrying the golden
//! qutrit and two-qubit values so no external file is needed.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{HqsError, Result};
use crate::hilbert::{ProjectiveMeasurement, StateVector};
use crate::sampling::{HiddenDistribution, HiddenSource, RefreshPolicy};
use crate::selector::ThresholdStrategy;

use super::ExperimentKind;

/// Amplitude encoding in configs: `[re, im]`.
pub type Amp = [f64; 2];

pub const DEFAULT_SEED: u64 = 42;

fn amps(values: &[f64]) -> Vec<Amp> {
    values.iter().map(|&re| [re, 0.0]).collect()
}

pub(crate) fn state_from_amps(amps: &[Amp]) -> Result<StateVector> {
    StateVector::new(
        amps.iter()
            .map(|&[re, im]| Complex64::new(re, im))
            .collect(),
    )
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SystemSpec {
    /// Standard-state amplitudes; may be unnormalized.
    pub psi: Vec<Amp>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeasurementSpec {
    pub labels: Vec<String>,
    pub basis: Vec<Vec<Amp>>,
}

impl MeasurementSpec {
    pub fn build(&self) -> Result<ProjectiveMeasurement> {
        let basis = self
            .basis
            .iter()
            .map(|v| state_from_amps(v))
            .collect::<Result<Vec<_>>>()?;
        ProjectiveMeasurement::new(basis, self.labels.clone())
    }

    pub fn from_measurement(m: &ProjectiveMeasurement) -> Self {
        Self {
            labels: m.labels().to_vec(),
            basis: m
                .basis()
                .iter()
                .map(|v| v.amplitudes().iter().map(|a| [a.re, a.im]).collect())
                .collect(),
        }
    }
}

/// Hidden-source spec; `distribution` is one of "haar", "fixed",
/// "product_haar" and `refresh` one of "full", "persistent", "mixture".
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HiddenSpec {
    pub distribution: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default = "default_refresh")]
    pub refresh: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kappa: Option<f64>,
    /// Fixed-state amplitudes (distribution = "fixed").
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub state: Option<Vec<Amp>>,
    /// Subsystem dimensions (distribution = "product_haar").
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dims: Option<Vec<usize>>,
}

fn default_refresh() -> String {
    "full".into()
}

impl HiddenSpec {
    pub fn haar() -> Self {
        Self {
            distribution: "haar".into(),
            seed: None,
            refresh: default_refresh(),
            kappa: None,
            state: None,
            dims: None,
        }
    }

    pub fn fixed(amplitudes: Vec<Amp>) -> Self {
        Self {
            distribution: "fixed".into(),
            state: Some(amplitudes),
            ..Self::haar()
        }
    }

    /// Builds the source. `system_dim` supplies the dimension for "haar";
    /// `fallback_seed` applies when the spec carries no seed of its own.
    pub fn build(&self, system_dim: usize, fallback_seed: u64) -> Result<HiddenSource> {
        let distribution = match self.distribution.as_str() {
            "haar" => HiddenDistribution::HaarUniform { dim: system_dim },
            "fixed" => {
                let state = self.state.as_ref().ok_or_else(|| {
                    HqsError::Config("hidden.distribution \"fixed\" requires hidden.state".into())
                })?;
                HiddenDistribution::FixedState(state_from_amps(state)?)
            }
            "product_haar" => {
                let dims = self.dims.clone().ok_or_else(|| {
                    HqsError::Config(
                        "hidden.distribution \"product_haar\" requires hidden.dims".into(),
                    )
                })?;
                if dims.iter().product::<usize>() != system_dim {
                    return Err(HqsError::Config(format!(
                        "hidden.dims product {} does not match system dimension {}",
                        dims.iter().product::<usize>(),
                        system_dim
                    )));
                }
                HiddenDistribution::ProductHaar { dims }
            }
            other => {
                return Err(HqsError::Config(format!(
                    "unknown hidden.distribution {other:?} (expected haar, fixed, product_haar)"
                )))
            }
        };
        let refresh = match self.refresh.as_str() {
            "full" => RefreshPolicy::FullRefresh,
            "persistent" => RefreshPolicy::Persistent,
            "mixture" => RefreshPolicy::Mixture {
                kappa: self.kappa.ok_or_else(|| {
                    HqsError::Config("hidden.refresh \"mixture\" requires hidden.kappa".into())
                })?,
            },
            other => {
                return Err(HqsError::Config(format!(
                    "unknown hidden.refresh {other:?} (expected full, persistent, mixture)"
                )))
            }
        };
        let source = HiddenSource::new(distribution, self.seed.unwrap_or(fallback_seed), refresh)?;
        let built_dim = source.dim();
        if built_dim != system_dim {
            return Err(HqsError::Config(format!(
                "hidden source dimension {built_dim} does not match system dimension {system_dim}"
            )));
        }
        Ok(source)
    }
}

/// Threshold-strategy spec; `kind` is "analytic" or "empirical".
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StrategySpec {
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sample_count: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub band_epsilon: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SequentialSpec {
    /// Total measurement count per sequence; must be even.
    pub length: usize,
    /// First observable, "z" or "x"; the sequence alternates from there.
    #[serde(default = "default_first")]
    pub first: String,
    /// Mixture keep-probabilities swept in the exploratory report.
    #[serde(default)]
    pub kappas: Vec<f64>,
}

fn default_first() -> String {
    "z".into()
}

/// CHSH settings as real-plane basis rotation angles, in radians.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChshSpec {
    pub a: f64,
    pub a_prime: f64,
    pub b: f64,
    pub b_prime: f64,
    /// Also run the product-state |00> control.
    #[serde(default = "default_true")]
    pub control: bool,
}

fn default_true() -> bool {
    true
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BeamsplitterSpec {
    /// Photons per input beam.
    pub photons: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NoSignalingSpec {
    /// Hidden state for the known-hidden-state counter-demonstration.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub counter_state: Option<Vec<Amp>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub experiment: String,
    pub seed: u64,
    pub trials: u64,
    #[serde(default = "default_tolerance")]
    pub tolerance: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub system: Option<SystemSpec>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub measurements: Vec<MeasurementSpec>,
    pub hidden: HiddenSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub strategy: Option<StrategySpec>,
    /// Expected outcome labels per measurement context (golden checks).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub golden_outcomes: Option<Vec<String>>,
    /// Expected outcome probabilities (born-check gate override).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expected: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sequential: Option<SequentialSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub chsh: Option<ChshSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beamsplitter: Option<BeamsplitterSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub no_signaling: Option<NoSignalingSpec>,
}

fn default_tolerance() -> f64 {
    0.01
}

impl ExperimentConfig {
    pub fn kind(&self) -> Result<ExperimentKind> {
        self.experiment.parse()
    }

    pub fn psi(&self) -> Result<StateVector> {
        let system = self
            .system
            .as_ref()
            .ok_or_else(|| HqsError::Config("config is missing system.psi".into()))?;
        state_from_amps(&system.psi)
    }

    pub fn measurement(&self, index: usize) -> Result<ProjectiveMeasurement> {
        match self.measurements.get(index) {
            Some(spec) => spec.build(),
            None if index == 0 => {
                // Default to the standard basis sized to the system.
                let dim = self.psi()?.dim();
                ProjectiveMeasurement::standard((0..dim).map(|i| i.to_string()).collect())
            }
            None => Err(HqsError::Config(format!(
                "experiment {:?} requires measurements[{index}]",
                self.experiment
            ))),
        }
    }

    pub fn hidden_source(&self, system_dim: usize) -> Result<HiddenSource> {
        self.hidden.build(system_dim, self.seed)
    }

    /// Resolves the threshold strategy and validates the pairing: analytic
    /// Haar thresholds demand a Haar-uniform source on the full dimension.
    pub fn strategy_for(
        &self,
        source: &HiddenSource,
        system_dim: usize,
    ) -> Result<ThresholdStrategy> {
        let kind = self.strategy.as_ref().map(|s| s.kind.as_str());
        match kind {
            None | Some("analytic") => {
                if !source.is_haar_on(system_dim) {
                    if kind.is_none() {
                        // No explicit choice: fall back to the empirical
                        // strategy for non-Haar sources.
                        return Ok(ThresholdStrategy::EmpiricalQuantile {
                            source: source.clone(),
                            sample_count: 100_000,
                            band_epsilon: 0.005,
                        });
                    }
                    return Err(HqsError::StrategyMismatch(
                        "analytic thresholds require a Haar-uniform hidden source on the full \
                         system dimension"
                            .into(),
                    ));
                }
                Ok(ThresholdStrategy::AnalyticHaar)
            }
            Some("empirical") => {
                let spec = self.strategy.as_ref().expect("kind came from spec");
                Ok(ThresholdStrategy::EmpiricalQuantile {
                    source: source.clone(),
                    sample_count: spec.sample_count.unwrap_or(100_000),
                    band_epsilon: spec.band_epsilon.unwrap_or(0.005),
                })
            }
            Some(other) => Err(HqsError::Config(format!(
                "unknown strategy.kind {other:?} (expected analytic or empirical)"
            ))),
        }
    }

    /// Compiled-in default config for each experiment, carrying the golden
    /// qutrit and two-qubit states and measurement contexts.
    pub fn defaults(kind: ExperimentKind) -> Self {
        match kind {
            ExperimentKind::BornCheck => Self {
                experiment: kind.to_string(),
                seed: DEFAULT_SEED,
                trials: 100_000,
                tolerance: 0.01,
                system: Some(SystemSpec {
                    psi: amps(&qutrit_psi_amps()),
                }),
                measurements: vec![sz_qutrit_spec()],
                hidden: HiddenSpec::haar(),
                strategy: None,
                golden_outcomes: None,
                expected: None,
                sequential: None,
                chsh: None,
                beamsplitter: None,
                no_signaling: None,
            },
            ExperimentKind::Contextuality => Self {
                experiment: kind.to_string(),
                seed: DEFAULT_SEED,
                trials: 1000,
                tolerance: 0.01,
                system: Some(SystemSpec {
                    psi: amps(&qutrit_psi_amps()),
                }),
                measurements: vec![sz_qutrit_spec(), rotated_qutrit_spec()],
                hidden: HiddenSpec::fixed(amps(&qutrit_phi_amps())),
                strategy: None,
                golden_outcomes: Some(vec!["mz=+1".into(), "+".into()]),
                expected: None,
                sequential: None,
                chsh: None,
                beamsplitter: None,
                no_signaling: None,
            },
            ExperimentKind::Nonlocality => Self {
                experiment: kind.to_string(),
                seed: DEFAULT_SEED,
                trials: 1000,
                tolerance: 0.01,
                system: Some(SystemSpec {
                    psi: amps(&two_qubit_psi_amps()),
                }),
                measurements: vec![zz_spec(), pmz_spec()],
                hidden: HiddenSpec::fixed(amps(&two_qubit_phi_amps())),
                strategy: None,
                golden_outcomes: Some(vec!["0⊗0".into(), "+⊗1".into()]),
                expected: None,
                sequential: None,
                chsh: None,
                beamsplitter: None,
                no_signaling: None,
            },
            ExperimentKind::NoSignaling => Self {
                experiment: kind.to_string(),
                seed: DEFAULT_SEED,
                trials: 100_000,
                tolerance: 0.01,
                system: Some(SystemSpec {
                    psi: amps(&two_qubit_psi_amps()),
                }),
                measurements: vec![zz_spec(), pmz_spec()],
                hidden: HiddenSpec::haar(),
                strategy: None,
                golden_outcomes: None,
                expected: None,
                sequential: None,
                chsh: None,
                beamsplitter: None,
                no_signaling: Some(NoSignalingSpec {
                    counter_state: Some(amps(&two_qubit_phi_amps())),
                }),
            },
            ExperimentKind::Chsh => Self {
                experiment: kind.to_string(),
                seed: DEFAULT_SEED,
                trials: 100_000,
                tolerance: 0.03,
                system: Some(SystemSpec {
                    psi: singlet_amps(),
                }),
                measurements: vec![],
                hidden: HiddenSpec::haar(),
                strategy: None,
                golden_outcomes: None,
                expected: None,
                sequential: None,
                chsh: Some(ChshSpec {
                    a: 0.0,
                    a_prime: PI / 4.0,
                    b: -3.0 * PI / 8.0,
                    b_prime: 3.0 * PI / 8.0,
                    control: true,
                }),
                beamsplitter: None,
                no_signaling: None,
            },
            ExperimentKind::Sequential => Self {
                experiment: kind.to_string(),
                seed: DEFAULT_SEED,
                trials: 10_000,
                tolerance: 0.02,
                system: Some(SystemSpec {
                    psi: amps(&[FRAC_1_SQRT_2, FRAC_1_SQRT_2]),
                }),
                measurements: vec![],
                hidden: HiddenSpec::haar(),
                strategy: None,
                golden_outcomes: None,
                expected: None,
                sequential: Some(SequentialSpec {
                    length: 20,
                    first: default_first(),
                    kappas: vec![0.0, 0.25, 0.5, 0.75, 1.0],
                }),
                chsh: None,
                beamsplitter: None,
                no_signaling: None,
            },
            ExperimentKind::Beamsplitter => Self {
                experiment: kind.to_string(),
                seed: DEFAULT_SEED,
                trials: 100_000,
                tolerance: 0.01,
                system: None,
                measurements: vec![],
                hidden: HiddenSpec::haar(),
                strategy: None,
                golden_outcomes: None,
                expected: None,
                sequential: None,
                chsh: None,
                beamsplitter: Some(BeamsplitterSpec { photons: 1 }),
                no_signaling: None,
            },
        }
    }
}

fn qutrit_psi_amps() -> [f64; 3] {
    [0.26f64.sqrt(), 0.25f64.sqrt(), 0.49f64.sqrt()]
}

fn qutrit_phi_amps() -> [f64; 3] {
    [0.3f64.sqrt(), 0.3f64.sqrt(), 0.4f64.sqrt()]
}

fn two_qubit_psi_amps() -> [f64; 4] {
    [0.5f64.sqrt(), 0.1f64.sqrt(), 0.0, 0.4f64.sqrt()]
}

fn two_qubit_phi_amps() -> [f64; 4] {
    [
        0.32f64.sqrt(),
        0.48f64.sqrt(),
        0.08f64.sqrt(),
        0.12f64.sqrt(),
    ]
}

fn singlet_amps() -> Vec<Amp> {
    vec![
        [0.0, 0.0],
        [FRAC_1_SQRT_2, 0.0],
        [-FRAC_1_SQRT_2, 0.0],
        [0.0, 0.0],
    ]
}

fn sz_qutrit_spec() -> MeasurementSpec {
    MeasurementSpec {
        labels: vec!["mz=-1".into(), "mz=0".into(), "mz=+1".into()],
        basis: vec![
            amps(&[1.0, 0.0, 0.0]),
            amps(&[0.0, 1.0, 0.0]),
            amps(&[0.0, 0.0, 1.0]),
        ],
    }
}

fn rotated_qutrit_spec() -> MeasurementSpec {
    let s = FRAC_1_SQRT_2;
    MeasurementSpec {
        labels: vec!["+".into(), "-".into(), "mz=+1".into()],
        basis: vec![
            amps(&[s, s, 0.0]),
            amps(&[s, -s, 0.0]),
            amps(&[0.0, 0.0, 1.0]),
        ],
    }
}

pub(crate) fn qubit_z() -> ProjectiveMeasurement {
    ProjectiveMeasurement::standard(vec!["0".into(), "1".into()]).expect("static basis")
}

pub(crate) fn qubit_pm() -> ProjectiveMeasurement {
    let s = FRAC_1_SQRT_2;
    ProjectiveMeasurement::new(
        vec![
            StateVector::from_real(&[s, s]).expect("static basis"),
            StateVector::from_real(&[s, -s]).expect("static basis"),
        ],
        vec!["+".into(), "-".into()],
    )
    .expect("static basis")
}

fn zz_spec() -> MeasurementSpec {
    MeasurementSpec::from_measurement(&qubit_z().tensor(&qubit_z()))
}

fn pmz_spec() -> MeasurementSpec {
    MeasurementSpec::from_measurement(&qubit_pm().tensor(&qubit_z()))
}
