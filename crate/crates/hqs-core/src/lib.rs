//! Hidden-quantum-state simulation: a deterministic outcome-selection
//! algorithm in which a standard state and a hidden state, both vectors in
//! the same finite-dimensional Hilbert space, jointly fix every projective
//! measurement outcome, while averaging over a random hidden state
//! reproduces Born-rule statistics.
//!
//! The crate is organized around:
//! - [`hilbert`]: states, measurements, tensor products, Born probabilities;
//! - [`sampling`]: seeded Haar-uniform (and other) hidden-state sources and
//!   post-measurement refresh policies;
//! - [`selector`]: the sorted-probability threshold schedule and outcome
//!   selection;
//! - [`experiments`]: named, seeded experiments (Born reproduction,
//!   contextuality, nonlocality, no-signaling, CHSH, sequential
//!   measurements, beamsplitter interference) producing serializable
//!   reports.
//!
//! ```
//! use hqs_core::{select_outcome, ProjectiveMeasurement, StateVector, ThresholdStrategy};
//!
//! let psi = StateVector::from_real(&[0.26f64.sqrt(), 0.25f64.sqrt(), 0.49f64.sqrt()])?;
//! let phi = StateVector::from_real(&[0.3f64.sqrt(), 0.3f64.sqrt(), 0.4f64.sqrt()])?;
//! let sz = ProjectiveMeasurement::standard(vec![
//!     "mz=-1".into(), "mz=0".into(), "mz=+1".into(),
//! ])?;
//!
//! let trace = select_outcome(&psi, &phi, &sz, &ThresholdStrategy::AnalyticHaar)?;
//! assert_eq!(trace.selected_label, "mz=+1");
//! assert!((trace.thresholds[0] - 0.3).abs() < 1e-12);
//! # Ok::<(), hqs_core::HqsError>(())
//! ```

pub mod error;
pub mod experiments;
pub mod hilbert;
pub mod sampling;
pub mod selector;
pub mod stats;

pub use error::{HqsError, Result};
pub use hilbert::{OutcomeDistribution, ProjectiveMeasurement, StateVector};
pub use sampling::{HiddenDistribution, HiddenSource, RandomStream, RefreshPolicy};
pub use selector::{select_outcome, SelectionTrace, ThresholdStrategy};
