//! Audit of published protocols: every relation the amplitudes must satisfy
//! is recomputed and each failure is localized to the entries involved.

use std::fmt;

use serde::Serialize;

use super::basis::{construct_basis, ConstructionResult, UnitaryParams};
use super::constraints::{check_constraints, m4_table};
use super::factory::{tetrahedral_axes, Builtin, PrintedProtocol};
use crate::error::Result;
use crate::protocol::verify_protocol;
use crate::report::{Check, Report};
use crate::state::{lift_b, spin_apply, Complex, Operator, Sign, StateVector, Tolerances};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum FindingKind {
    /// `⟨φ_i|φ_j⟩ ≠ δ_ij`.
    Orthonormality,
    /// `Σ b_j φ_j` is not a unit vector.
    InitialNorm,
    /// `⟨φ_j|ψ⟩` differs from the published `b_j`.
    Coefficient,
    /// A constraint on `b` and the table fails.
    Constraint,
    /// `(1⊗σ·n)ψ ≠ Σ ε b φ`.
    SpinAction,
    /// A reachable outcome contradicts the table.
    TableViolation,
    /// Two outcomes carry identical signs on every axis.
    DuplicateRows,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Finding {
    pub kind: FindingKind,
    /// Human-readable position, e.g. `⟨φ2|φ6⟩` or `λ3 on n1`.
    pub location: String,
    pub magnitude: f64,
    /// Outcomes (0-based) the finding involves.
    pub outcomes: Vec<usize>,
}

impl fmt::Display for Finding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = kind_name(self.kind);
        write!(f, "{kind:<16} {:<28} {:.6e}", self.location, self.magnitude)
    }
}

fn kind_name(k: FindingKind) -> &'static str {
    match k {
        FindingKind::Orthonormality => "orthonormality",
        FindingKind::InitialNorm => "initial-norm",
        FindingKind::Coefficient => "coefficient",
        FindingKind::Constraint => "constraint",
        FindingKind::SpinAction => "spin-action",
        FindingKind::TableViolation => "table-violation",
        FindingKind::DuplicateRows => "duplicate-rows",
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AuditReport {
    pub protocol: String,
    pub findings: Vec<Finding>,
    pub checks: Report,
}

impl AuditReport {
    pub fn is_clean(&self) -> bool {
        self.findings.is_empty()
    }

    pub fn exit_code(&self) -> i32 {
        if self.is_clean() {
            0
        } else {
            1
        }
    }

    /// Outcomes shared by every orthonormality finding, the usual sign of a
    /// single mistyped vector.
    pub fn orthonormality_culprits(&self) -> Vec<usize> {
        common_outcomes(self.findings.iter().filter(|f| f.kind == FindingKind::Orthonormality))
    }
}

impl fmt::Display for AuditReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.checks)?;
        writeln!(f, "findings: {}", self.findings.len())?;
        for x in &self.findings {
            writeln!(f, "  {x}")?;
        }
        Ok(())
    }
}

fn common_outcomes<'a>(mut it: impl Iterator<Item = &'a Finding>) -> Vec<usize> {
    let Some(first) = it.next() else {
        return Vec::new();
    };
    let mut common = first.outcomes.clone();
    for f in it {
        common.retain(|j| f.outcomes.contains(j));
    }
    common
}

pub fn audit_printed(printed: &PrintedProtocol, tol: &Tolerances) -> Result<AuditReport> {
    let p = &printed.protocol;
    let basis = p.basis();
    let table = p.table();
    let mut findings = Vec::new();
    let mut checks = Report::new(format!("audit {}", printed.builtin));

    let overlaps = p.measurement().overlaps();
    let mut worst_overlap = 0.0_f64;
    for i in 0..basis.len() {
        for j in i..basis.len() {
            let target = if i == j { 1.0 } else { 0.0 };
            let dev = (overlaps[i][j] - target).norm();
            worst_overlap = worst_overlap.max(dev);
            if dev > tol.pipeline {
                findings.push(Finding {
                    kind: FindingKind::Orthonormality,
                    location: format!("⟨φ{}|φ{}⟩", i + 1, j + 1),
                    magnitude: dev,
                    outcomes: if i == j { vec![i] } else { vec![i, j] },
                });
            }
        }
    }
    checks.push(Check::new("basis orthonormality", worst_overlap, tol.pipeline));

    let norm_dev = (printed.raw_initial_norm - 1.0).abs();
    checks.push(Check::new("‖Σ b_j φ_j‖ = 1", norm_dev, tol.pipeline));
    if norm_dev > tol.pipeline {
        findings.push(Finding {
            kind: FindingKind::InitialNorm,
            location: "Σ b_j φ_j".into(),
            magnitude: norm_dev,
            outcomes: Vec::new(),
        });
    }

    // Coefficients: the published ones when given, otherwise ⟨φ_j|ψ⟩.
    let measured = p.coefficients();
    let b: Vec<Complex> = match &printed.printed_b {
        Some(b) => b.iter().map(|x| Complex::new(*x, 0.0)).collect(),
        None => measured.clone(),
    };
    if let Some(pb) = &printed.printed_b {
        let mut worst = 0.0_f64;
        for (j, (m, x)) in measured.iter().zip(pb).enumerate() {
            let dev = (m - x).norm();
            worst = worst.max(dev);
            if dev > tol.pipeline {
                findings.push(Finding {
                    kind: FindingKind::Coefficient,
                    location: format!("⟨φ{}|ψ⟩ vs b{}", j + 1, j + 1),
                    magnitude: dev,
                    outcomes: vec![j],
                });
            }
        }
        checks.push(Check::new("⟨φ_j|ψ⟩ = b_j", worst, tol.pipeline));
    }

    let moduli: Vec<f64> = b.iter().map(|x| x.norm()).collect();
    let constraints = check_constraints(table, &moduli, p.axes(), tol)?;
    for c in constraints.enforced.checks.iter() {
        if !c.pass {
            findings.push(Finding {
                kind: FindingKind::Constraint,
                location: c.name.clone(),
                magnitude: c.residual,
                outcomes: Vec::new(),
            });
        }
    }
    checks.extend(constraints.enforced.checks.iter().cloned());
    checks.push(constraints.unsquared.clone());

    // The spin action is linear, so test it on the unnormalized expansion.
    let raw = StateVector::combination(&b, basis)?;
    for (l, n) in p.axes().iter().enumerate() {
        let signed: Vec<Complex> = table
            .column(l)
            .iter()
            .zip(&b)
            .map(|(e, x)| x * *e)
            .collect();
        let rhs = StateVector::combination(&signed, basis)?;
        let diff = &spin_apply(&raw, n) - &rhs;
        let r = diff.amplitudes().iter().fold(0.0_f64, |a, c| a.max(c.norm()));
        checks.push(Check::new(format!("(1⊗σ·n{})ψ = Σ ε b φ", l + 1), r, tol.pipeline));
        if r > tol.pipeline {
            findings.push(Finding {
                kind: FindingKind::SpinAction,
                location: format!("axis n{}", l + 1),
                magnitude: r,
                outcomes: Vec::new(),
            });
        }
    }

    let verification = verify_protocol(p, tol);
    checks.push(Check::new(
        "table-consistent outcomes",
        verification.violations.len() as f64,
        0.0,
    ));
    for v in &verification.violations {
        findings.push(Finding {
            kind: FindingKind::TableViolation,
            location: format!("λ{} after {} on n{}", v.outcome + 1, v.eta.arrow(), v.axis + 1),
            magnitude: v.probability,
            outcomes: vec![v.outcome],
        });
    }

    for (i, j) in table.duplicate_rows() {
        findings.push(Finding {
            kind: FindingKind::DuplicateRows,
            location: format!("λ{} = λ{}", i + 1, j + 1),
            magnitude: 0.0,
            outcomes: vec![i, j],
        });
    }

    Ok(AuditReport {
        protocol: printed.builtin.name().into(),
        findings,
        checks,
    })
}

/// Entry where a published and a constructed basis vector differ.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EntryDiff {
    pub outcome: usize,
    pub ancilla: usize,
    pub spin: Sign,
    pub printed: [f64; 2],
    pub constructed: [f64; 2],
    pub diff: f64,
}

impl fmt::Display for EntryDiff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "φ{} |{},{}⟩  printed ({:+.6},{:+.6})  constructed ({:+.6},{:+.6})  |Δ| {:.6}",
            self.outcome + 1,
            self.ancilla,
            self.spin.arrow(),
            self.printed[0],
            self.printed[1],
            self.constructed[0],
            self.constructed[1],
            self.diff
        )
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BasisDiff {
    /// Entries differing by more than the tolerance.
    pub entries: Vec<EntryDiff>,
    pub max_per_outcome: Vec<f64>,
    /// `‖V†V - 1‖` for `V = Σ_j |constructed_j⟩⟨printed_j|`.
    pub unitarity: f64,
    /// `‖[V, 1⊗σ_z]‖`: small when the two bases differ only by a rotation
    /// inside the σ_z eigenspaces.
    pub spin_commutator: f64,
}

pub fn compare_bases(printed: &[StateVector], constructed: &[StateVector], tol: f64) -> Result<BasisDiff> {
    let dim = constructed.first().map(|v| v.dim()).unwrap_or(0);
    let mut entries = Vec::new();
    let mut max_per_outcome = Vec::with_capacity(printed.len());
    let mut v = Operator::zeros(dim);
    for (j, (p, c)) in printed.iter().zip(constructed).enumerate() {
        let mut worst = 0.0_f64;
        for (i, (a, b)) in p.amplitudes().iter().zip(c.amplitudes()).enumerate() {
            let d = (a - b).norm();
            worst = worst.max(d);
            if d > tol {
                entries.push(EntryDiff {
                    outcome: j,
                    ancilla: i / 2,
                    spin: if i % 2 == 0 { Sign::Up } else { Sign::Down },
                    printed: [a.re, a.im],
                    constructed: [b.re, b.im],
                    diff: d,
                });
            }
        }
        max_per_outcome.push(worst);
        v = v.try_add(&Operator::outer(c, p))?;
    }
    let sz = lift_b(&Operator::pauli_z(), dim / 2)?;
    let comm = v.commutator(&sz)?;
    let spin_commutator = comm.entries().iter().fold(0.0_f64, |a, c| a.max(c.norm()));
    Ok(BasisDiff {
        entries,
        max_per_outcome,
        unitarity: v.unitarity_residual(),
        spin_commutator,
    })
}

/// Published four-axis basis against the basis constructed from the same
/// table, coefficients and axes.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct M4Comparison {
    pub construction: ConstructionResult,
    pub diff: BasisDiff,
    pub audit: AuditReport,
    /// Outcomes shared by every orthonormality failure of the published basis.
    pub culprits: Vec<usize>,
}

pub fn compare_m4(params: &UnitaryParams, tol: &Tolerances) -> Result<M4Comparison> {
    let printed = Builtin::M4Symmetric.printed();
    let b = vec![1.0 / 6f64.sqrt(); 6];
    let construction = construct_basis(&m4_table(), &b, &tetrahedral_axes(), params, tol)?;
    let diff = compare_bases(printed.protocol.basis(), &construction.basis, tol.pipeline)?;
    let audit = audit_printed(&printed, tol)?;
    let culprits = audit.orthonormality_culprits();
    Ok(M4Comparison {
        construction,
        diff,
        audit,
        culprits,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constructed_m4_is_exact() {
        let c = compare_m4(&UnitaryParams::default(), &Tolerances::default()).unwrap();
        assert!(c.construction.checks.passed(), "{}", c.construction.checks);
        assert!(!c.diff.entries.is_empty());
    }

    #[test]
    fn m4_printed_defect_is_phi6() {
        let c = compare_m4(&UnitaryParams::default(), &Tolerances::default()).unwrap();
        assert_eq!(c.culprits, vec![5]);
    }

    #[test]
    fn vaa_printed_table_contradicted() {
        let a = audit_printed(&Builtin::Vaa.printed(), &Tolerances::default()).unwrap();
        let n = a
            .findings
            .iter()
            .filter(|f| f.kind == FindingKind::TableViolation)
            .count();
        assert_eq!(n, 12);
        assert_eq!(a.exit_code(), 1);
    }
}
