//! Alice's projective measurement `M = Σ λ_j |φ_j⟩⟨φ_j|`.

use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::state::{Complex, StateVector};

/// The eigenvalue labels are opaque tags; outcomes are reported as indices.
///
/// Construction does not insist on orthonormality so that printed bases can
/// be loaded and audited; [`ProjectiveMeasurement::orthonormality_residual`]
/// reports how far off they are.
#[derive(Clone, Debug, PartialEq)]
pub struct ProjectiveMeasurement {
    basis: Vec<StateVector>,
    labels: Vec<String>,
}

impl ProjectiveMeasurement {
    /// Labels default to `λ1, λ2, ...`.
    pub fn new(basis: Vec<StateVector>) -> Result<Self> {
        let labels = (1..=basis.len()).map(|j| format!("λ{j}")).collect();
        Self::with_labels(basis, labels)
    }

    pub fn with_labels(basis: Vec<StateVector>, labels: Vec<String>) -> Result<Self> {
        let dim = basis.first().map(|v| v.dim()).ok_or(Error::DimensionMismatch {
            expected: 1,
            found: 0,
        })?;
        if let Some(v) = basis.iter().find(|v| v.dim() != dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: v.dim(),
            });
        }
        if labels.len() != basis.len() {
            return Err(Error::DimensionMismatch {
                expected: basis.len(),
                found: labels.len(),
            });
        }
        let mut seen = HashSet::new();
        for l in &labels {
            if !seen.insert(l) {
                return Err(Error::DuplicateLabel(l.clone()));
            }
        }
        Ok(ProjectiveMeasurement { basis, labels })
    }

    pub fn basis(&self) -> &[StateVector] {
        &self.basis
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.basis.len()
    }

    pub fn is_empty(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.basis[0].dim()
    }

    /// Gram matrix `⟨φ_i|φ_j⟩`.
    pub fn overlaps(&self) -> Vec<Vec<Complex>> {
        self.basis
            .iter()
            .map(|a| {
                self.basis
                    .iter()
                    .map(|b| a.inner(b).expect("equal dims"))
                    .collect()
            })
            .collect()
    }

    /// `max |⟨φ_i|φ_j⟩ - δ_ij|`.
    pub fn orthonormality_residual(&self) -> f64 {
        let mut worst = 0.0_f64;
        for (i, row) in self.overlaps().iter().enumerate() {
            for (j, o) in row.iter().enumerate() {
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((o - target).norm());
            }
        }
        worst
    }

    pub fn require_orthonormal(&self, tol: f64) -> Result<()> {
        let r = self.orthonormality_residual();
        if r > tol {
            return Err(Error::NotOrthonormal(r));
        }
        Ok(())
    }

    /// Amplitudes `⟨φ_j|state⟩`.
    pub fn amplitudes(&self, state: &StateVector) -> Result<Vec<Complex>> {
        self.basis.iter().map(|phi| phi.inner(state)).collect()
    }

    /// Born probabilities `|⟨φ_j|state⟩|²`.
    pub fn probabilities(&self, state: &StateVector) -> Result<Vec<f64>> {
        Ok(self
            .amplitudes(state)?
            .into_iter()
            .map(|a| a.norm_sqr())
            .collect())
    }

    /// Norm of the part of `state` outside the span, assuming orthonormality.
    pub fn span_residual(&self, state: &StateVector) -> Result<f64> {
        let amps = self.amplitudes(state)?;
        let rebuilt = StateVector::combination(&amps, &self.basis)?;
        Ok((state - &rebuilt).norm())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn duplicate_labels_rejected() {
        let b = vec![StateVector::up(), StateVector::down()];
        let err = ProjectiveMeasurement::with_labels(b, vec!["a".into(), "a".into()]);
        assert!(matches!(err, Err(Error::DuplicateLabel(_))));
    }

    #[test]
    fn computational_basis_is_orthonormal() {
        let m = ProjectiveMeasurement::new(vec![StateVector::up(), StateVector::down()]).unwrap();
        assert_eq!(m.orthonormality_residual(), 0.0);
        assert_eq!(m.labels(), &["λ1".to_string(), "λ2".to_string()]);
        let p = m.probabilities(&StateVector::down()).unwrap();
        assert_eq!(p, vec![0.0, 1.0]);
    }
}
