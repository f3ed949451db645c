//! The gate set. Two-qubit matrices are written with the control as the
//! first tensor factor, so the lower-right 2x2 block acts on the target
//! when the control is |1⟩.

use std::f64::consts::{FRAC_1_SQRT_2, PI};
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::state::{cis, Kronecker, Operator, I, ONE, ZERO};

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Gate {
    /// `diag(1, e^{iφ})`.
    Phase { qubit: usize, angle: f64 },
    Hadamard { qubit: usize },
    /// σ_x.
    Not { qubit: usize },
    CNot { control: usize, target: usize },
    /// `diag(1, 1, 1, e^{iφ})`.
    CPhase { control: usize, target: usize, angle: f64 },
    /// Lower block `e^{-3iπ/4}/√2 [[1, i], [i, 1]]`.
    CU { control: usize, target: usize },
    /// Controlled Hadamard.
    CH { control: usize, target: usize },
}

impl Gate {
    pub fn mnemonic(&self) -> &'static str {
        match self {
            Gate::Phase { .. } => "P",
            Gate::Hadamard { .. } => "H",
            Gate::Not { .. } => "NOT",
            Gate::CNot { .. } => "CNOT",
            Gate::CPhase { .. } => "CP",
            Gate::CU { .. } => "CU",
            Gate::CH { .. } => "CH",
        }
    }

    /// Target qubits; for two-qubit gates `[control, target]`.
    pub fn qubits(&self) -> Vec<usize> {
        match *self {
            Gate::Phase { qubit, .. } | Gate::Hadamard { qubit } | Gate::Not { qubit } => vec![qubit],
            Gate::CNot { control, target }
            | Gate::CPhase { control, target, .. }
            | Gate::CU { control, target }
            | Gate::CH { control, target } => vec![control, target],
        }
    }

    pub fn angle(&self) -> Option<f64> {
        match *self {
            Gate::Phase { angle, .. } | Gate::CPhase { angle, .. } => Some(angle),
            _ => None,
        }
    }

    /// Indices distinct and below `qubits`, angle finite.
    pub fn validate(&self, qubits: usize) -> Result<()> {
        let q = self.qubits();
        for &i in &q {
            if i >= qubits {
                return Err(Error::IndexOutOfRange {
                    what: "qubit",
                    index: i,
                    limit: qubits,
                });
            }
        }
        if q.len() == 2 && q[0] == q[1] {
            return Err(Error::InvalidGate(format!(
                "{} control and target are both qubit {}",
                self.mnemonic(),
                q[0]
            )));
        }
        if let Some(a) = self.angle() {
            if !a.is_finite() {
                return Err(Error::InvalidGate(format!("non-finite angle {a}")));
            }
        }
        Ok(())
    }

    pub fn matrix(&self) -> Operator {
        match *self {
            Gate::Phase { angle, .. } => phase(angle),
            Gate::Hadamard { .. } => Operator::hadamard(),
            Gate::Not { .. } => Operator::pauli_x(),
            Gate::CNot { .. } => controlled(&Operator::pauli_x()),
            Gate::CPhase { angle, .. } => controlled(&phase(angle)),
            Gate::CU { .. } => controlled(&cu_block()),
            Gate::CH { .. } => controlled(&Operator::hadamard()),
        }
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.mnemonic())?;
        for q in self.qubits() {
            write!(f, " {q}")?;
        }
        if let Some(a) = self.angle() {
            write!(f, " {}", super::text::format_angle(a))?;
        }
        Ok(())
    }
}

pub fn phase(angle: f64) -> Operator {
    Operator::diagonal(&[ONE, cis(angle)])
}

/// `|0⟩⟨0| ⊗ 1 + |1⟩⟨1| ⊗ u`.
pub fn controlled(u: &Operator) -> Operator {
    Operator::from_fn(4, |r, c| match (r < 2, c < 2) {
        (true, true) => {
            if r == c {
                ONE
            } else {
                ZERO
            }
        }
        (false, false) => u.get(r - 2, c - 2),
        _ => ZERO,
    })
}

fn cu_block() -> Operator {
    let s = cis(-3.0 * PI / 4.0) * FRAC_1_SQRT_2;
    Operator::from_rows(vec![vec![s, s * I], vec![s * I, s]]).expect("2x2")
}

/// `(P(-3π/4) ⊗ 1) · CP(π/2) · CH · CP(π/2)`, the CU gate from the smaller
/// gate set.
pub fn cu_decomposition() -> Operator {
    let p = phase(-3.0 * PI / 4.0).tensor(&Operator::identity(2));
    let cp = controlled(&phase(PI / 2.0));
    let ch = controlled(&Operator::hadamard());
    &(&(&p * &cp) * &ch) * &cp
}

/// `H · P(π) · H`, the NOT gate from the smaller gate set.
pub fn not_decomposition() -> Operator {
    let h = Operator::hadamard();
    &(&h * &phase(PI)) * &h
}

/// Residual of the printed CU entries against [`cu_decomposition`].
pub fn cu_decomposition_residual() -> f64 {
    Gate::CU { control: 0, target: 1 }
        .matrix()
        .max_abs_diff(&cu_decomposition())
        .expect("both 4x4")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn all() -> Vec<Gate> {
        vec![
            Gate::Phase { qubit: 0, angle: 0.3 },
            Gate::Hadamard { qubit: 0 },
            Gate::Not { qubit: 0 },
            Gate::CNot { control: 0, target: 1 },
            Gate::CPhase { control: 0, target: 1, angle: -1.1 },
            Gate::CU { control: 0, target: 1 },
            Gate::CH { control: 0, target: 1 },
        ]
    }

    #[test]
    fn unitary() {
        for g in all() {
            assert!(g.matrix().is_unitary(1e-12), "{g}");
        }
    }

    #[test]
    fn phase_pi_exact() {
        assert_eq!(phase(PI), Operator::diagonal(&[ONE, -ONE]));
    }

    #[test]
    fn decompositions() {
        assert!(cu_decomposition_residual() < 1e-12);
        assert!(not_decomposition().approx_eq(&Operator::pauli_x(), 1e-12));
        assert_eq!(Gate::Not { qubit: 0 }.matrix(), Operator::pauli_x());
    }

    #[test]
    fn validation() {
        assert!(Gate::CNot { control: 1, target: 1 }.validate(2).is_err());
        assert!(Gate::Hadamard { qubit: 2 }.validate(2).is_err());
        assert!(Gate::Phase { qubit: 0, angle: f64::NAN }.validate(1).is_err());
    }
}
