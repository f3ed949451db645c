//! Ordered gate lists on a fixed register. Qubit 0 is the most significant
//! bit of the amplitude index (the top wire), so `|xy⟩` has `x` on qubit 0.

use serde::Serialize;

use super::gate::Gate;
use crate::error::{Error, Result};
use crate::state::{apply_single_qubit, Operator, StateVector};

/// Registers above this size are rejected; dense simulation only.
pub const MAX_QUBITS: usize = 12;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Circuit {
    qubits: usize,
    gates: Vec<Gate>,
    /// Gate count before the point where Bob acts, if marked.
    bob: Option<usize>,
}

impl Circuit {
    pub fn new(qubits: usize) -> Result<Self> {
        if qubits == 0 || qubits > MAX_QUBITS {
            return Err(Error::Precondition(format!(
                "register size {qubits} outside 1..={MAX_QUBITS}"
            )));
        }
        Ok(Circuit {
            qubits,
            gates: Vec::new(),
            bob: None,
        })
    }

    pub fn from_gates(qubits: usize, gates: Vec<Gate>) -> Result<Self> {
        let mut c = Circuit::new(qubits)?;
        for g in gates {
            c.push(g)?;
        }
        Ok(c)
    }

    pub fn push(&mut self, gate: Gate) -> Result<&mut Self> {
        gate.validate(self.qubits)?;
        self.gates.push(gate);
        Ok(self)
    }

    /// Marks the current end of the gate list as the point where Bob acts.
    pub fn mark_bob(&mut self) -> Result<&mut Self> {
        if self.bob.is_some() {
            return Err(Error::Precondition("Bob's position is already marked".into()));
        }
        self.bob = Some(self.gates.len());
        Ok(self)
    }

    pub fn qubits(&self) -> usize {
        self.qubits
    }

    pub fn dim(&self) -> usize {
        1 << self.qubits
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn bob(&self) -> Option<usize> {
        self.bob
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    /// Gates `range` as a circuit of its own, without a marker.
    pub fn slice(&self, range: std::ops::Range<usize>) -> Circuit {
        Circuit {
            qubits: self.qubits,
            gates: self.gates[range].to_vec(),
            bob: None,
        }
    }

    /// Gates before Bob's marker (all gates when unmarked).
    pub fn preparation(&self) -> Circuit {
        self.slice(0..self.bob.unwrap_or(self.gates.len()))
    }

    /// Gates after Bob's marker (none when unmarked).
    pub fn measurement(&self) -> Circuit {
        self.slice(self.bob.unwrap_or(self.gates.len())..self.gates.len())
    }

    /// Appends another circuit's gates; the marker of `other` is dropped.
    pub fn then(&self, other: &Circuit) -> Result<Circuit> {
        if other.qubits != self.qubits {
            return Err(Error::DimensionMismatch {
                expected: self.qubits,
                found: other.qubits,
            });
        }
        let mut out = self.clone();
        out.gates.extend_from_slice(&other.gates);
        Ok(out)
    }

    pub fn apply(&self, input: &StateVector) -> Result<StateVector> {
        if input.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: input.dim(),
            });
        }
        let mut state = input.clone();
        for g in &self.gates {
            state = apply_gate(&state, g, self.qubits)?;
        }
        Ok(state)
    }

    /// The full unitary, column `c` being the image of `|c⟩`.
    pub fn unitary(&self) -> Result<Operator> {
        let d = self.dim();
        let cols: Vec<StateVector> = (0..d)
            .map(|c| self.apply(&StateVector::basis(d, c)?))
            .collect::<Result<_>>()?;
        Ok(Operator::from_fn(d, |r, c| cols[c].amplitude(r)))
    }
}

fn apply_gate(state: &StateVector, gate: &Gate, n: usize) -> Result<StateVector> {
    let m = gate.matrix();
    match gate.qubits()[..] {
        [q] => apply_single_qubit(state, q, &m),
        [c, t] => {
            let (sc, st) = (1usize << (n - 1 - c), 1usize << (n - 1 - t));
            let v = state.amplitudes();
            let mut out = v.to_vec();
            for i in 0..v.len() {
                if i & (sc | st) != 0 {
                    continue;
                }
                let idx = [i, i | st, i | sc, i | sc | st];
                for (r, &dst) in idx.iter().enumerate() {
                    out[dst] = idx.iter().enumerate().map(|(k, &src)| m.get(r, k) * v[src]).sum();
                }
            }
            StateVector::new(out)
        }
        _ => unreachable!("gates act on one or two qubits"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::state::Kronecker;

    #[test]
    fn empty_is_identity() {
        let c = Circuit::new(2).unwrap();
        assert_eq!(c.unitary().unwrap(), Operator::identity(4));
    }

    #[test]
    fn bell_preparation() {
        let c = Circuit::from_gates(
            2,
            vec![Gate::Hadamard { qubit: 0 }, Gate::CNot { control: 0, target: 1 }],
        )
        .unwrap();
        let out = c.apply(&StateVector::ket("00").unwrap()).unwrap();
        let h = 0.5f64.sqrt();
        assert!(out.approx_eq(&StateVector::from_real(&[h, 0.0, 0.0, h]).unwrap(), 1e-15));
    }

    #[test]
    fn reversed_control_matches_swap_conjugation() {
        let rev = Circuit::from_gates(2, vec![Gate::CNot { control: 1, target: 0 }])
            .unwrap()
            .unitary()
            .unwrap();
        // |xy⟩ -> |x+y, y⟩
        for (x, y) in [(0, 0), (0, 1), (1, 0), (1, 1)] {
            let col = 2 * x + y;
            let row = 2 * (x ^ y) + y;
            assert_eq!(rev.get(row, col).re, 1.0);
        }
    }

    #[test]
    fn embedding_agrees_with_kronecker() {
        let g = Gate::CH { control: 0, target: 1 };
        let c = Circuit::from_gates(3, vec![g]).unwrap();
        let expect = g.matrix().tensor(&Operator::identity(2));
        assert!(c.unitary().unwrap().approx_eq(&expect, 1e-15));
    }

    #[test]
    fn rejects_bad_input() {
        let c = Circuit::new(2).unwrap();
        assert!(c.apply(&StateVector::up()).is_err());
        assert!(Circuit::new(0).is_err());
        let mut c = Circuit::new(1).unwrap();
        assert!(c.push(Gate::CNot { control: 0, target: 1 }).is_err());
    }
}
