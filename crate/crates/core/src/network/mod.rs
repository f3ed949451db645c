//! Gate networks: the gate set, circuits, their text format, the two
//! published networks and the verifiers that tie them to the protocols.

pub mod builtin;
pub mod circuit;
pub mod gate;
pub mod text;
pub mod verify;

pub use builtin::{builtin_networks, singlet_network, vaa_network, NetworkBinding, NetworkBuiltin};
pub use circuit::Circuit;
pub use gate::{controlled, cu_decomposition, cu_decomposition_residual, not_decomposition, phase, Gate};
pub use text::{emit_circuit, format_angle, parse_angle, parse_circuit};
pub use verify::{
    check_preparation, end_to_end, verify_measurement_mapping, verify_preparation, EndToEndReport,
    MappingReport, PreparationReport,
};

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construction::Builtin;
    use crate::state::Tolerances;

    #[test]
    fn builtins_check_out() {
        let tol = Tolerances::default();
        for b in builtin_networks() {
            assert!(verify_preparation(&b, &tol).unwrap().passed(), "{}", b.name);
            let m = verify_measurement_mapping(&b.measurement(), &b.basis(), Some(&b.expected_mapping), &tol)
                .unwrap();
            assert!(m.passed(), "{}: {}", b.name, m.checks);
        }
    }

    #[test]
    fn vaa_half_alone_fails_on_singlet_basis() {
        let tol = Tolerances::default();
        let vaa = vaa_network();
        let m = verify_measurement_mapping(&vaa.measurement(), &Builtin::Singlet.protocol().basis(), None, &tol)
            .unwrap();
        assert!(!m.bijective());
    }

    #[test]
    fn end_to_end_agrees_with_verifier() {
        let tol = Tolerances::default();
        for b in builtin_networks() {
            for p in [b.protocol.protocol(), b.protocol.implied().unwrap()] {
                let r = end_to_end(&b.circuit, &p, &tol).unwrap();
                assert!(r.agree, "{} / {}", b.name, p.name);
            }
        }
    }
}
