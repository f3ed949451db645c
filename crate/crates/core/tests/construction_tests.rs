//! Constraint system, basis construction and the audit of published bases.

use proptest::prelude::*;
use spinretro::construction::{
    audit_printed, axes_from_gram, check_axis_dependence, check_constraints, compare_m4, construct_basis,
    dependence_coefficients, feasibility, linear_relations, min_outcomes_lower_bound, postmeasurement_rank, m4_family, m4_table, solve_coefficients, symmetric_input,
    tetrahedral_axes, two_qubit_table, AxisGram, Builtin, ConstructionInput, FindingKind, UnitaryParams,
};
use spinretro::protocol::verify_protocol;
use spinretro::{Error, Tolerances, UnitAxis};

fn tol() -> Tolerances {
    Tolerances::default()
}

/// `Σ_s ε_s^(l) ε_s^(k) b_s²` written out from the sign strings, without the
/// library's table helpers.
fn gram_by_hand(rows: &[&str], b2: f64) -> Vec<Vec<f64>> {
    let signs: Vec<Vec<f64>> = rows
        .iter()
        .map(|r| r.chars().map(|c| if c == '↑' { 1.0 } else { -1.0 }).collect())
        .collect();
    let m = signs[0].len();
    (0..m)
        .map(|l| (0..m).map(|k| signs.iter().map(|s| s[l] * s[k] * b2).sum()).collect())
        .collect()
}

#[test]
fn symmetric_four_axis_gram_is_minus_one_third() {
    let rows = ["↑↑↓↓", "↑↓↓↑", "↑↓↑↓", "↓↓↑↑", "↓↑↓↑", "↓↑↑↓"];
    let g = gram_by_hand(&rows, 1.0 / 6.0);
    for (l, row) in g.iter().enumerate() {
        for (k, v) in row.iter().enumerate() {
            let want = if l == k { 1.0 } else { -1.0 / 3.0 };
            assert!((v - want).abs() < 1e-12, "G[{l}][{k}] = {v}");
        }
    }
    let sol = solve_coefficients(&m4_table(), &AxisGram::new(g).unwrap(), &tol()).unwrap();
    for b in &sol.b {
        assert!((b - 1.0 / 6f64.sqrt()).abs() < 1e-12);
    }
}

#[test]
fn tetrahedral_axes_sum_to_zero() {
    let axes = tetrahedral_axes();
    let mut s = [0.0; 3];
    for a in &axes {
        for (acc, v) in s.iter_mut().zip(a.components()) {
            *acc += v;
        }
    }
    assert!(s.iter().map(|v| v * v).sum::<f64>().sqrt() < 1e-10);
    for (l, a) in axes.iter().enumerate() {
        for b in &axes[l + 1..] {
            assert!((a.dot(b) + 1.0 / 3.0).abs() < 1e-12);
        }
    }
}

#[test]
fn two_qubit_constraints_hold_at_one_quarter() {
    let r = check_constraints(
        &two_qubit_table(),
        &[0.5; 4],
        &[UnitAxis::X, UnitAxis::Y, UnitAxis::Z],
        &tol(),
    )
    .unwrap();
    assert!(r.passed());
    assert!(r.max_residual() < 1e-12);
}

#[test]
fn four_axis_dependence_uses_minus_ones() {
    let axes = tetrahedral_axes();
    let c = dependence_coefficients(&axes).unwrap();
    for v in c[0] {
        assert!((v + 1.0).abs() < 1e-12);
    }
    assert!(check_axis_dependence(&m4_table(), &c).unwrap().holds());
}

#[test]
fn symmetric_four_axis_construction_is_exact() {
    let r = symmetric_input(4).unwrap().run(&tol()).unwrap();
    assert!(r.checks.passed(), "{}", r.checks);
    let p = r.protocol("m4").unwrap();
    assert!(verify_protocol(&p, &tol()).is_clean());
    assert!(p.measurement().orthonormality_residual() < 1e-10);
}

#[test]
fn five_axes_are_infeasible() {
    let err = symmetric_input(5).unwrap_err();
    assert!(matches!(err, Error::Infeasible(_)));
    assert!(err.to_string().contains("no solutions exist"));
}

#[test]
fn four_axes_that_do_not_sum_to_zero_are_infeasible() {
    let mut axes = tetrahedral_axes();
    axes[3] = UnitAxis::Z;
    assert!(!feasibility(&axes).feasible);
    let mut input = ConstructionInput::new(m4_table());
    input.axes = Some(axes);
    input.coefficients = Some(vec![1.0 / 6f64.sqrt(); 6]);
    assert!(matches!(input.run(&tol()), Err(Error::Infeasible(_))));
}

#[test]
fn gram_factorization_reproduces_the_gram() {
    let g = AxisGram::uniform(4, -1.0 / 3.0).unwrap();
    let axes = axes_from_gram(&g).unwrap();
    assert!(AxisGram::from_axes(&axes).max_abs_diff(&g) < 1e-12);
}

#[test]
fn published_four_axis_basis_fails_around_phi6() {
    let cmp = compare_m4(&UnitaryParams::default(), &tol()).unwrap();
    assert_eq!(cmp.culprits, vec![5]);
    assert!(!cmp.diff.entries.is_empty());
    assert!(cmp.construction.checks.passed());
}

#[test]
fn published_eight_outcome_audit() {
    let a = audit_printed(&Builtin::M3Nonorthogonal.printed(), &tol()).unwrap();
    let norm = a
        .findings
        .iter()
        .find(|f| f.kind == FindingKind::Constraint && f.location.starts_with("normalization"))
        .expect("normalization finding");
    assert!((norm.magnitude - 1.0 / 8.0).abs() < 1e-12);
    let dup = a
        .findings
        .iter()
        .find(|f| f.kind == FindingKind::DuplicateRows)
        .expect("duplicate rows finding");
    assert_eq!(dup.outcomes, vec![6, 7]);
    assert!(a.findings.iter().any(|f| f.kind == FindingKind::Orthonormality));
    assert_eq!(a.exit_code(), 1);
}

#[test]
fn m3_printed_coefficients_sum_to_seven_eighths() {
    let printed = Builtin::M3Nonorthogonal.printed();
    let b = printed.printed_b.unwrap();
    let s: f64 = b.iter().map(|v| v * v).sum();
    assert!((s - 7.0 / 8.0).abs() < 1e-12);
}

#[test]
fn family_outside_its_range_is_rejected() {
    assert!(matches!(m4_family(0.6, 0.5), Err(Error::Infeasible(_))));
}

#[test]
fn vaa_post_measurement_states_need_four_outcomes() {
    let p = Builtin::Vaa.protocol();
    assert_eq!(postmeasurement_rank(p.initial(), p.axes(), 1e-10).unwrap(), 4);
    let lb = min_outcomes_lower_bound(p.initial(), p.axes(), 1e-10).unwrap();
    assert_eq!(lb.triple_ranks.len(), 8);
    assert!(lb.triple_ranks.iter().all(|(_, r)| *r == 3));
    assert_eq!(lb.min_outcomes, 4);
    let rel = linear_relations(p.initial()).unwrap();
    assert!(rel.max() < 1e-12, "{rel:?}");
}

#[test]
fn product_state_spans_less() {
    let psi = spinretro::StateVector::ket("00").unwrap();
    let axes = [UnitAxis::X, UnitAxis::Y, UnitAxis::Z];
    assert_eq!(postmeasurement_rank(&psi, &axes, 1e-10).unwrap(), 2);
    assert!(matches!(min_outcomes_lower_bound(&psi, &axes, 1e-10), Err(Error::Precondition(_))));
}

fn params() -> impl Strategy<Value = UnitaryParams> {
    (prop::collection::vec(-3.0f64..3.0, 8), -3.0f64..3.0)
        .prop_map(|(theta, lambda)| UnitaryParams::shared(theta, lambda))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn every_rotation_gives_a_valid_protocol(p in params()) {
        let b = vec![1.0 / 6f64.sqrt(); 6];
        let r = construct_basis(&m4_table(), &b, &tetrahedral_axes(), &p, &tol()).unwrap();
        prop_assert!(r.checks.passed(), "{}", r.checks);
        let proto = r.protocol("rotated").unwrap();
        prop_assert!(verify_protocol(&proto, &tol()).is_clean());
    }

    /// σ_x pairs slot `a` of one eigenspace with slot `a` of the other, so
    /// only equal rotations keep the spin action intact.
    #[test]
    fn unequal_rotations_are_refused(p in params(), shift in 0.1f64..1.0) {
        let mut q = p.clone();
        q.lambda_minus += shift;
        let b = vec![1.0 / 6f64.sqrt(); 6];
        let err = construct_basis(&m4_table(), &b, &tetrahedral_axes(), &q, &tol()).unwrap_err();
        prop_assert!(matches!(err, Error::ConstraintResidual { .. }), "{err}");
    }

    /// Interior of the family; on its edges two axes coincide and the Gram
    /// factorization loses conditioning.
    #[test]
    fn family_members_construct(b5 in 0.1f64..0.6, b6 in 0.1f64..0.6) {
        prop_assume!(b5 * b5 + b6 * b6 < 0.48);
        let fam = m4_family(b5, b6).unwrap();
        let mut input = ConstructionInput::new(m4_table());
        input.gram = Some(fam.gram.clone());
        input.coefficients = Some(fam.b.clone());
        let r = input.run(&tol()).unwrap();
        prop_assert!(r.checks.passed(), "{}", r.checks);
    }
}
