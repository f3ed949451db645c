//! Checks that a network prepares the right state, that its measurement
//! half maps Alice's basis one-to-one onto computational states, and that
//! running the whole pipeline reproduces the protocol verifier's verdict.

use std::collections::BTreeSet;

use serde::Serialize;

use super::builtin::NetworkBinding;
use super::circuit::Circuit;
use crate::error::{Error, Result};
use crate::protocol::{verify_protocol, RetrodictionProtocol};
use crate::report::{Check, Report};
use crate::state::{project_spin, Complex, Sign, StateVector, Tolerances};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PreparationReport {
    /// `|⟨expected|prepared⟩|`.
    pub overlap: f64,
    #[serde(skip)]
    pub prepared: StateVector,
    pub checks: Report,
}

impl PreparationReport {
    pub fn passed(&self) -> bool {
        self.checks.passed()
    }
}

/// Runs the preparation half on `|0...0⟩`; passes when the overlap modulus
/// with the expected state is at least `1 - pipeline`.
pub fn verify_preparation(binding: &NetworkBinding, tol: &Tolerances) -> Result<PreparationReport> {
    check_preparation(&binding.preparation(), &binding.expected_state, tol)
}

pub fn check_preparation(
    prep: &Circuit,
    expected: &StateVector,
    tol: &Tolerances,
) -> Result<PreparationReport> {
    let prepared = prep.apply(&StateVector::basis(prep.dim(), 0)?)?;
    let overlap = prepared.overlap_modulus(expected)?;
    let mut checks = Report::new("preparation");
    checks.push(
        Check::new("overlap with expected state", (1.0 - overlap).max(0.0), tol.pipeline)
            .with_detail(format!("|⟨ψ|prepared⟩| = {overlap:.12}")),
    );
    checks.push(Check::new(
        "norm preserved",
        (prepared.norm() - 1.0).abs(),
        tol.exact * prep.len().max(1) as f64,
    ));
    Ok(PreparationReport {
        overlap,
        prepared,
        checks,
    })
}

/// Image of one basis vector under the measurement half.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Image {
    /// Computational index holding the largest amplitude.
    pub index: usize,
    /// That amplitude, `[re, im]`.
    pub phase: [f64; 2],
    /// `1 - |amplitude|`; zero for a pure computational state.
    pub spread: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MappingReport {
    pub images: Vec<Image>,
    /// `j -> computational index` when every image is a computational state
    /// and no two coincide.
    pub permutation: Option<Vec<usize>>,
    pub checks: Report,
}

impl MappingReport {
    pub fn bijective(&self) -> bool {
        self.permutation.is_some()
    }

    pub fn passed(&self) -> bool {
        self.checks.passed()
    }
}

/// Applies `meas` to each `φ_j` and checks the images are distinct
/// computational states up to phase. With `expected` the permutation must
/// also match it.
pub fn verify_measurement_mapping(
    meas: &Circuit,
    basis: &[StateVector],
    expected: Option<&[usize]>,
    tol: &Tolerances,
) -> Result<MappingReport> {
    let mut images = Vec::with_capacity(basis.len());
    let mut checks = Report::new("measurement mapping");
    for (j, phi) in basis.iter().enumerate() {
        let out = meas.apply(phi)?;
        let (index, amp) = out
            .amplitudes()
            .iter()
            .copied()
            .enumerate()
            .max_by(|a, b| a.1.norm().total_cmp(&b.1.norm()))
            .unwrap_or((0, Complex::new(0.0, 0.0)));
        let spread = (1.0 - amp.norm()).max(0.0);
        checks.push(
            Check::new(format!("φ{} lands on one computational state", j + 1), spread, tol.pipeline)
                .with_detail(format!("|{}⟩ with amplitude ({:+.6},{:+.6})", ket(index, meas.qubits()), amp.re, amp.im)),
        );
        images.push(Image {
            index,
            phase: [amp.re, amp.im],
            spread,
        });
    }
    let distinct: BTreeSet<usize> = images.iter().map(|i| i.index).collect();
    let all_pure = images.iter().all(|i| i.spread <= tol.pipeline);
    let injective = distinct.len() == images.len();
    checks.push(Check::flag("images pairwise distinct", injective));
    let permutation = (all_pure && injective).then(|| images.iter().map(|i| i.index).collect::<Vec<_>>());
    if let Some(exp) = expected {
        let matches = permutation.as_deref() == Some(exp);
        checks.push(Check::flag("mapping matches the derivation", matches).with_detail(format!(
            "expected {}",
            exp.iter().map(|&c| format!("|{}⟩", ket(c, meas.qubits()))).collect::<Vec<_>>().join(" ")
        )));
    }
    Ok(MappingReport {
        images,
        permutation,
        checks,
    })
}

fn ket(index: usize, qubits: usize) -> String {
    format!("{index:0qubits$b}")
}

/// A table-inconsistent outcome seen through the circuit.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct PipelineCell {
    pub outcome: usize,
    pub axis: usize,
    pub eta: Sign,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EndToEndReport {
    /// Inconsistent cells found by running preparation, Bob's projection,
    /// the measurement half and a computational readout.
    pub circuit_violations: Vec<PipelineCell>,
    /// The same cells according to the protocol verifier.
    pub protocol_violations: Vec<PipelineCell>,
    pub agree: bool,
}

/// Composes the circuit's preparation, `P_η(n_l)`, its measurement half and
/// a computational readout, reads the outcome through the permutation the
/// measurement half induces on the basis and applies the table.
pub fn end_to_end(
    circuit: &Circuit,
    protocol: &RetrodictionProtocol,
    tol: &Tolerances,
) -> Result<EndToEndReport> {
    let meas = circuit.measurement();
    let mapping = verify_measurement_mapping(&meas, protocol.basis(), None, tol)?;
    let perm = mapping.permutation.ok_or_else(|| {
        Error::Precondition("measurement half does not map the basis one-to-one".into())
    })?;
    let psi = circuit.preparation().apply(&StateVector::basis(circuit.dim(), 0)?)?;
    let mut circuit_violations = Vec::new();
    for (l, n) in protocol.axes().iter().enumerate() {
        for eta in Sign::BOTH {
            let out = meas.apply(&project_spin(&psi, n, eta))?;
            for (j, &c) in perm.iter().enumerate() {
                let p = out.amplitude(c).norm_sqr();
                if p > tol.probability_floor && protocol.table().rows()[j][l] != eta {
                    circuit_violations.push(PipelineCell { outcome: j, axis: l, eta });
                }
            }
        }
    }
    let mut protocol_violations: Vec<PipelineCell> = verify_protocol(protocol, tol)
        .violations
        .iter()
        .map(|v| PipelineCell {
            outcome: v.outcome,
            axis: v.axis,
            eta: v.eta,
        })
        .collect();
    circuit_violations.sort();
    protocol_violations.sort();
    Ok(EndToEndReport {
        agree: circuit_violations == protocol_violations,
        circuit_violations,
        protocol_violations,
    })
}
