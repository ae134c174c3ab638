//! Finite-dimensional complex Hilbert-space primitives: normalized state
//! vectors, projective measurements (orthonormal bases with outcome labels),
//! tensor products, and Born probabilities.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{HqsError, Result};

/// Tolerance under which a squared norm counts as zero at construction.
pub const NORM_FLOOR: f64 = 1e-9;
/// Orthonormality tolerance for measurement bases.
pub const ORTHO_TOL: f64 = 1e-10;

/// A normalized pure state of a D-dimensional system (D >= 2).
///
/// Plays both roles in the model: the standard state and the hidden state
/// live in the same space and are the same kind of object.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StateVector {
    amplitudes: Vec<Complex64>,
}

impl StateVector {
    /// Builds a state from raw amplitudes, normalizing them. Inputs may be
    /// unnormalized; only a norm below [`NORM_FLOOR`] is rejected.
    pub fn new(amplitudes: Vec<Complex64>) -> Result<Self> {
        if amplitudes.len() < 2 {
            return Err(HqsError::DimensionTooSmall(amplitudes.len()));
        }
        let norm_sq: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
        if norm_sq.sqrt() < NORM_FLOOR {
            return Err(HqsError::NotNormalizable {
                norm: norm_sq.sqrt(),
            });
        }
        let scale = 1.0 / norm_sq.sqrt();
        let amplitudes = amplitudes.into_iter().map(|a| a * scale).collect();
        Ok(Self { amplitudes })
    }

    /// State with real amplitudes (imaginary parts zero).
    pub fn from_real(amplitudes: &[f64]) -> Result<Self> {
        Self::new(
            amplitudes
                .iter()
                .map(|&re| Complex64::new(re, 0.0))
                .collect(),
        )
    }

    /// The computational basis vector `e_index` in dimension `dim`.
    pub fn basis_state(dim: usize, index: usize) -> Result<Self> {
        if dim < 2 {
            return Err(HqsError::DimensionTooSmall(dim));
        }
        assert!(
            index < dim,
            "basis index {index} out of range for dim {dim}"
        );
        let mut amplitudes = vec![Complex64::ZERO; dim];
        amplitudes[index] = Complex64::ONE;
        Ok(Self { amplitudes })
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    /// Squared norm; 1 within 1e-12 for any constructed state.
    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    /// <self|other> with conjugation on `self`.
    pub fn inner_product(&self, other: &Self) -> Result<Complex64> {
        if self.dim() != other.dim() {
            return Err(HqsError::DimensionMismatch {
                left: self.dim(),
                right: other.dim(),
            });
        }
        Ok(self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// Tensor product, row-major: amplitude at joint index `i * other.dim() + j`
    /// is `self_i * other_j`.
    pub fn tensor(&self, other: &Self) -> Self {
        let mut amplitudes = Vec::with_capacity(self.dim() * other.dim());
        for a in &self.amplitudes {
            for b in &other.amplitudes {
                amplitudes.push(a * b);
            }
        }
        // Inputs are unit vectors, so the product already is one.
        Self { amplitudes }
    }
}

/// A projective measurement: a complete orthonormal basis with one stable
/// outcome label per basis vector.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ProjectiveMeasurement {
    basis: Vec<StateVector>,
    labels: Vec<String>,
}

impl ProjectiveMeasurement {
    /// Validates orthonormality eagerly; the selector assumes exact
    /// projective measurements.
    pub fn new(basis: Vec<StateVector>, labels: Vec<String>) -> Result<Self> {
        if labels.len() != basis.len() {
            return Err(HqsError::LabelCountMismatch {
                labels: labels.len(),
                basis: basis.len(),
            });
        }
        let dim = basis.first().map(StateVector::dim).unwrap_or(0);
        if basis.len() != dim {
            return Err(HqsError::LabelCountMismatch {
                labels: basis.len(),
                basis: dim,
            });
        }
        for (i, v) in basis.iter().enumerate() {
            if v.dim() != dim {
                return Err(HqsError::DimensionMismatch {
                    left: v.dim(),
                    right: dim,
                });
            }
            for (j, w) in basis.iter().enumerate().skip(i) {
                let overlap = v.inner_product(w)?.norm();
                let expected = if i == j { 1.0 } else { 0.0 };
                if (overlap - expected).abs() >= ORTHO_TOL {
                    return Err(HqsError::NotOrthonormal {
                        i,
                        j,
                        deviation: (overlap - expected).abs(),
                    });
                }
            }
        }
        for (i, label) in labels.iter().enumerate() {
            if labels[..i].contains(label) {
                return Err(HqsError::DuplicateLabel(label.clone()));
            }
        }
        Ok(Self { basis, labels })
    }

    /// The standard (computational) basis with the given labels.
    pub fn standard(labels: Vec<String>) -> Result<Self> {
        let dim = labels.len();
        let basis = (0..dim)
            .map(|i| StateVector::basis_state(dim, i))
            .collect::<Result<Vec<_>>>()?;
        Self::new(basis, labels)
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[StateVector] {
        &self.basis
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// Joint measurement on the composite system, ordering consistent with
    /// [`StateVector::tensor`]; labels are joined as `"labelA⊗labelB"`.
    pub fn tensor(&self, other: &Self) -> Self {
        let mut basis = Vec::with_capacity(self.dim() * other.dim());
        let mut labels = Vec::with_capacity(self.dim() * other.dim());
        for (va, la) in self.basis.iter().zip(&self.labels) {
            for (vb, lb) in other.basis.iter().zip(&other.labels) {
                basis.push(va.tensor(vb));
                labels.push(format!("{la}⊗{lb}"));
            }
        }
        Self { basis, labels }
    }

    /// Born-rule probabilities of `state` under this measurement.
    pub fn born_probabilities(&self, state: &StateVector) -> Result<OutcomeDistribution> {
        if state.dim() != self.dim() {
            return Err(HqsError::DimensionMismatch {
                left: state.dim(),
                right: self.dim(),
            });
        }
        let probs = self
            .basis
            .iter()
            .map(|v| Ok(v.inner_product(state)?.norm_sqr()))
            .collect::<Result<Vec<f64>>>()?;
        Ok(OutcomeDistribution { probs })
    }
}

/// Born probabilities aligned with a measurement's label order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OutcomeDistribution {
    probs: Vec<f64>,
}

impl OutcomeDistribution {
    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }
}
