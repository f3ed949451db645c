//! The two published networks, bound to the protocols they implement.
//!
//! Both act on two qubits, qubit 0 being Alice's ancilla and qubit 1 the
//! spin handed to Bob. The gate order is the one under which the displayed
//! derivations hold; the verifiers in [`super::verify`] lock it.

use std::f64::consts::PI;

use serde::Serialize;

use super::circuit::Circuit;
use super::gate::Gate;
use crate::construction::Builtin;
use crate::error::{Error, Result};
use crate::state::StateVector;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum NetworkBuiltin {
    VaaNetwork,
    SingletNetwork,
}

impl NetworkBuiltin {
    pub const ALL: [NetworkBuiltin; 2] = [NetworkBuiltin::VaaNetwork, NetworkBuiltin::SingletNetwork];

    pub fn name(self) -> &'static str {
        match self {
            NetworkBuiltin::VaaNetwork => "vaa-network",
            NetworkBuiltin::SingletNetwork => "singlet-network",
        }
    }

    pub fn from_name(name: &str) -> Result<NetworkBuiltin> {
        NetworkBuiltin::ALL
            .into_iter()
            .find(|b| b.name() == name)
            .ok_or_else(|| {
                Error::Precondition(format!(
                    "unknown network {name:?} (expected vaa-network or singlet-network)"
                ))
            })
    }

    pub fn binding(self) -> NetworkBinding {
        match self {
            NetworkBuiltin::VaaNetwork => vaa_network(),
            NetworkBuiltin::SingletNetwork => singlet_network(),
        }
    }
}

/// A circuit split at Bob's marker, with what each half should do.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NetworkBinding {
    pub name: String,
    pub circuit: Circuit,
    pub protocol: Builtin,
    /// State the preparation half should produce from `|0...0⟩`.
    #[serde(skip)]
    pub expected_state: StateVector,
    /// Computational basis state each `φ_j` should land on.
    pub expected_mapping: Vec<usize>,
}

impl NetworkBinding {
    pub fn preparation(&self) -> Circuit {
        self.circuit.preparation()
    }

    pub fn measurement(&self) -> Circuit {
        self.circuit.measurement()
    }

    pub fn basis(&self) -> Vec<StateVector> {
        self.protocol.protocol().basis().to_vec()
    }
}

pub fn builtin_networks() -> Vec<NetworkBinding> {
    NetworkBuiltin::ALL.iter().map(|b| b.binding()).collect()
}

/// `P(π)` on the ancilla, CNOT controlled by Bob's qubit, CU, then H on the
/// ancilla.
pub fn vaa_measurement_gates() -> Vec<Gate> {
    vec![
        Gate::Phase { qubit: 0, angle: PI },
        Gate::CNot { control: 1, target: 0 },
        Gate::CU { control: 0, target: 1 },
        Gate::Hadamard { qubit: 0 },
    ]
}

/// Rotates the singlet basis onto the VAA one, up to phases.
pub fn singlet_rotation_gates() -> Vec<Gate> {
    vec![
        Gate::CPhase { control: 0, target: 1, angle: PI },
        Gate::Not { qubit: 1 },
        Gate::Phase { qubit: 0, angle: PI / 2.0 },
        Gate::Phase { qubit: 1, angle: -PI / 2.0 },
    ]
}

fn assemble(prep: Vec<Gate>, meas: Vec<Gate>) -> Circuit {
    let mut c = Circuit::from_gates(2, prep).expect("static gates");
    c.mark_bob().expect("first marker");
    for g in meas {
        c.push(g).expect("static gate");
    }
    c
}

pub fn vaa_network() -> NetworkBinding {
    let h = 0.5f64.sqrt();
    NetworkBinding {
        name: "vaa-network".into(),
        circuit: assemble(
            vec![Gate::Hadamard { qubit: 0 }, Gate::CNot { control: 0, target: 1 }],
            vaa_measurement_gates(),
        ),
        protocol: Builtin::Vaa,
        expected_state: StateVector::from_real(&[h, 0.0, 0.0, h]).expect("dim 4"),
        expected_mapping: vec![0b00, 0b10, 0b01, 0b11],
    }
}

pub fn singlet_network() -> NetworkBinding {
    let h = 0.5f64.sqrt();
    let mut meas = singlet_rotation_gates();
    meas.extend(vaa_measurement_gates());
    NetworkBinding {
        name: "singlet-network".into(),
        circuit: assemble(
            vec![
                Gate::Not { qubit: 1 },
                Gate::CNot { control: 1, target: 0 },
                Gate::Hadamard { qubit: 1 },
                Gate::CNot { control: 1, target: 0 },
            ],
            meas,
        ),
        protocol: Builtin::Singlet,
        expected_state: StateVector::from_real(&[0.0, -h, h, 0.0]).expect("dim 4"),
        expected_mapping: vec![0b00, 0b10, 0b11, 0b01],
    }
}
