//! Experiment reports: named estimates with standard errors, golden checks,
//! and a single pass/fail verdict, serializable to JSON and to a flat CSV
//! estimates table.

use serde::{Deserialize, Serialize};

use crate::error::{HqsError, Result};

use super::config::ExperimentConfig;

/// One named scalar statistic. When `expected` and `tolerance` are present
/// the gate is |value - expected| <= tolerance; experiments may also record
/// a pass flag computed by another rule (for example strict positivity).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub name: String,
    pub value: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub std_error: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expected: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
    /// Whether this estimate participates in the verdict. Exploratory
    /// quantities are reported with `gated: false`.
    pub gated: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pass: Option<bool>,
}

impl Estimate {
    pub fn gated(
        name: impl Into<String>,
        value: f64,
        std_error: Option<f64>,
        expected: f64,
        tolerance: f64,
    ) -> Self {
        Self {
            name: name.into(),
            value,
            std_error,
            expected: Some(expected),
            tolerance: Some(tolerance),
            gated: true,
            pass: Some((value - expected).abs() <= tolerance),
        }
    }

    /// Gate on strict positivity of the value.
    pub fn gated_positive(name: impl Into<String>, value: f64, std_error: Option<f64>) -> Self {
        Self {
            name: name.into(),
            value,
            std_error,
            expected: None,
            tolerance: None,
            gated: true,
            pass: Some(value > 0.0),
        }
    }

    /// Exploratory value: recorded, never part of the verdict.
    pub fn reported(name: impl Into<String>, value: f64, std_error: Option<f64>) -> Self {
        Self {
            name: name.into(),
            value,
            std_error,
            expected: None,
            tolerance: None,
            gated: false,
            pass: None,
        }
    }

    pub fn with_expected(mut self, expected: f64) -> Self {
        self.expected = Some(expected);
        self
    }
}

/// A golden comparison against a value fixed in advance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GoldenCheck {
    pub description: String,
    pub expected: String,
    pub actual: String,
    pub pass: bool,
}

impl GoldenCheck {
    pub fn labels(description: impl Into<String>, expected: &str, actual: &str) -> Self {
        Self {
            description: description.into(),
            expected: expected.to_string(),
            actual: actual.to_string(),
            pass: expected == actual,
        }
    }

    pub fn value(
        description: impl Into<String>,
        expected: f64,
        actual: f64,
        tolerance: f64,
    ) -> Self {
        Self {
            description: description.into(),
            expected: format!("{expected}"),
            actual: format!("{actual}"),
            pass: (expected - actual).abs() <= tolerance,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
}

/// The full result of one experiment run. Embeds the resolved config and
/// seed, so a report is sufficient to reproduce itself byte-for-byte.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub name: String,
    pub seed: u64,
    pub trials: u64,
    pub verdict: Verdict,
    pub estimates: Vec<Estimate>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub golden_checks: Vec<GoldenCheck>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    pub config: ExperimentConfig,
}

impl ExperimentReport {
    /// Assembles a report; the verdict is pass iff every golden check and
    /// every gated estimate passes.
    pub fn new(
        config: &ExperimentConfig,
        estimates: Vec<Estimate>,
        golden_checks: Vec<GoldenCheck>,
        notes: Vec<String>,
    ) -> Self {
        let gates_ok = estimates
            .iter()
            .filter(|e| e.gated)
            .all(|e| e.pass.unwrap_or(false));
        let goldens_ok = golden_checks.iter().all(|g| g.pass);
        Self {
            name: config.experiment.clone(),
            seed: config.seed,
            trials: config.trials,
            verdict: if gates_ok && goldens_ok {
                Verdict::Pass
            } else {
                Verdict::Fail
            },
            estimates,
            golden_checks,
            notes,
            config: config.clone(),
        }
    }

    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }

    pub fn estimate(&self, name: &str) -> Option<&Estimate> {
        self.estimates.iter().find(|e| e.name == name)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization cannot fail")
    }

    /// Flat estimates table: one row per estimate.
    pub fn to_csv(&self) -> Result<String> {
        let mut writer = csv::Writer::from_writer(Vec::new());
        writer
            .write_record([
                "experiment",
                "estimate",
                "value",
                "std_error",
                "expected",
                "tolerance",
                "gated",
                "pass",
            ])
            .map_err(|e| HqsError::Config(format!("csv: {e}")))?;
        for e in &self.estimates {
            let opt = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
            let pass = e.pass.map(|p| p.to_string()).unwrap_or_default();
            writer
                .write_record([
                    self.name.as_str(),
                    e.name.as_str(),
                    &e.value.to_string(),
                    &opt(e.std_error),
                    &opt(e.expected),
                    &opt(e.tolerance),
                    &e.gated.to_string(),
                    &pass,
                ])
                .map_err(|e| HqsError::Config(format!("csv: {e}")))?;
        }
        let bytes = writer
            .into_inner()
            .map_err(|e| HqsError::Config(format!("csv: {e}")))?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn verdict_requires_all_gates_and_goldens() {
        let config = ExperimentConfig::defaults(super::super::ExperimentKind::Contextuality);
        let good = ExperimentReport::new(
            &config,
            vec![Estimate::gated("x", 0.5, None, 0.5, 0.01)],
            vec![GoldenCheck::labels("outcome", "a", "a")],
            vec![],
        );
        assert!(good.passed());

        let bad_gate = ExperimentReport::new(
            &config,
            vec![Estimate::gated("x", 0.6, None, 0.5, 0.01)],
            vec![],
            vec![],
        );
        assert!(!bad_gate.passed());

        let bad_golden = ExperimentReport::new(
            &config,
            vec![],
            vec![GoldenCheck::labels("outcome", "a", "b")],
            vec![],
        );
        assert!(!bad_golden.passed());

        let ungated_failures_do_not_gate = ExperimentReport::new(
            &config,
            vec![Estimate::reported("y", 123.0, None)],
            vec![],
            vec![],
        );
        assert!(ungated_failures_do_not_gate.passed());
    }

    #[test]
    fn csv_has_one_row_per_estimate() {
        let config = ExperimentConfig::defaults(super::super::ExperimentKind::Contextuality);
        let report = ExperimentReport::new(
            &config,
            vec![
                Estimate::gated("a", 1.0, Some(0.1), 1.0, 0.5),
                Estimate::reported("b", 2.0, None),
            ],
            vec![],
            vec![],
        );
        let csv = report.to_csv().unwrap();
        assert_eq!(csv.lines().count(), 3);
        assert!(csv.starts_with("experiment,estimate,value"));
    }
}
