//! Named, seeded experiments that turn the model's claims into statistical
//! gates and golden checks: Born reproduction, contextuality, nonlocality,
//! no-signaling, CHSH, sequential measurements, and a truncated-Fock
//! beamsplitter demo.
//!
//! Every experiment is a pure function of its config: rerunning with the
//! same config and seed reproduces the report byte-for-byte.

use std::fmt;
use std::str::FromStr;

use crate::error::{HqsError, Result};
use crate::selector::SelectionTrace;

pub mod beamsplitter;
pub mod born;
pub mod chsh;
pub mod config;
pub mod no_signaling;
pub mod nonlocality;
pub mod report;
pub mod sequential;

pub use config::ExperimentConfig;
pub use report::{Estimate, ExperimentReport, GoldenCheck, Verdict};

/// Contextuality shares its machinery with the nonlocality demo; both
/// compare selected outcomes across two measurement contexts at fixed
/// states.
pub mod contextuality;

/// Desk-scale cap on photons per beam in the beamsplitter demo.
pub const MAX_PHOTONS: usize = 6;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExperimentKind {
    BornCheck,
    Contextuality,
    Nonlocality,
    NoSignaling,
    Chsh,
    Sequential,
    Beamsplitter,
}

impl ExperimentKind {
    pub const ALL: [ExperimentKind; 7] = [
        ExperimentKind::BornCheck,
        ExperimentKind::Contextuality,
        ExperimentKind::Nonlocality,
        ExperimentKind::NoSignaling,
        ExperimentKind::Chsh,
        ExperimentKind::Sequential,
        ExperimentKind::Beamsplitter,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ExperimentKind::BornCheck => "born-check",
            ExperimentKind::Contextuality => "contextuality",
            ExperimentKind::Nonlocality => "nonlocality",
            ExperimentKind::NoSignaling => "no-signaling",
            ExperimentKind::Chsh => "chsh",
            ExperimentKind::Sequential => "sequential",
            ExperimentKind::Beamsplitter => "beamsplitter",
        }
    }
}

impl fmt::Display for ExperimentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ExperimentKind {
    type Err = HqsError;

    fn from_str(s: &str) -> Result<Self> {
        ExperimentKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| HqsError::Config(format!("unknown experiment {s:?}")))
    }
}

/// Capped collector for per-trial selection traces.
#[derive(Debug)]
pub struct TraceLog {
    limit: usize,
    traces: Vec<SelectionTrace>,
}

impl TraceLog {
    pub fn capped(limit: usize) -> Self {
        Self {
            limit,
            traces: Vec::new(),
        }
    }

    pub fn disabled() -> Self {
        Self::capped(0)
    }

    pub fn record(&mut self, trace: &SelectionTrace) {
        if self.traces.len() < self.limit {
            self.traces.push(trace.clone());
        }
    }

    pub fn traces(&self) -> &[SelectionTrace] {
        &self.traces
    }

    pub fn into_traces(self) -> Vec<SelectionTrace> {
        self.traces
    }
}

/// Runs the experiment named in the config.
pub fn run(config: &ExperimentConfig) -> Result<ExperimentReport> {
    run_traced(config, &mut TraceLog::disabled())
}

/// Runs the experiment, recording selection traces into `log` (up to its
/// cap) as the trial loops execute.
pub fn run_traced(config: &ExperimentConfig, log: &mut TraceLog) -> Result<ExperimentReport> {
    match config.kind()? {
        ExperimentKind::BornCheck => born::run_traced(config, log),
        ExperimentKind::Contextuality => contextuality::run_traced(config, log),
        ExperimentKind::Nonlocality => nonlocality::run_traced(config, log),
        ExperimentKind::NoSignaling => no_signaling::run_traced(config, log),
        ExperimentKind::Chsh => chsh::run_traced(config, log),
        ExperimentKind::Sequential => sequential::run_traced(config, log),
        ExperimentKind::Beamsplitter => beamsplitter::run_traced(config, log),
    }
}
