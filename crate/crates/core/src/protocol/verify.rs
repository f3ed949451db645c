//! Exhaustive check of a protocol over every axis and outcome.

use std::fmt;

use serde::Serialize;

use super::RetrodictionProtocol;
use crate::report::{Check, Report};
use crate::state::{Complex, Sign, StateVector, Tolerances};

/// Alice outcome `j` is reachable after Bob saw `eta` on axis `l`, yet the
/// table answers the opposite sign.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Violation {
    pub outcome: usize,
    pub axis: usize,
    pub eta: Sign,
    /// `|⟨φ_j|φ_η(n_l)⟩|²`, the joint probability given the axis.
    pub probability: f64,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "λ{} reachable after {} on n{} (p = {:.6}) but table says {}",
            self.outcome + 1,
            self.eta.arrow(),
            self.axis + 1,
            self.probability,
            self.eta.flipped().arrow()
        )
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerificationReport {
    pub protocol: String,
    pub violations: Vec<Violation>,
    /// Inconsistent cells with probability between the warning floor and
    /// the probability floor.
    pub warnings: Vec<Violation>,
    pub checks: Report,
}

impl VerificationReport {
    /// No violations and every structural check passed.
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty() && self.checks.passed()
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.checks)?;
        writeln!(f, "violations: {}", self.violations.len())?;
        for v in &self.violations {
            writeln!(f, "  {v}")?;
        }
        if !self.warnings.is_empty() {
            writeln!(f, "warnings: {}", self.warnings.len())?;
            for v in &self.warnings {
                writeln!(f, "  {v}")?;
            }
        }
        Ok(())
    }
}

/// Checks every `(l, η, j)` against the table, plus orthonormality of the
/// basis, normalization, `φ_η(n_l) = Σ_{j∈S_η} b_j φ_j` and
/// `Σ_{j∈S_η} |b_j|² = ‖φ_η(n_l)‖²`.
pub fn verify_protocol(protocol: &RetrodictionProtocol, tol: &Tolerances) -> VerificationReport {
    let meas = protocol.measurement();
    let table = protocol.table();
    let b: Vec<Complex> = protocol.coefficients();
    let mut checks = Report::new(format!("verify {}", protocol.name));

    checks.push(Check::new(
        "basis orthonormality",
        meas.orthonormality_residual(),
        tol.pipeline,
    ));
    checks.push(Check::new(
        "initial state normalization",
        (protocol.initial().norm_sqr() - 1.0).abs(),
        tol.exact,
    ));
    let rebuilt = StateVector::combination(&b, meas.basis()).expect("dims checked");
    checks.push(Check::new(
        "initial state = Σ b_j φ_j",
        rebuilt.max_abs_diff(protocol.initial()).expect("dims checked"),
        tol.pipeline,
    ));

    let mut violations = Vec::new();
    let mut warnings = Vec::new();
    let mut worst_decomp = 0.0_f64;
    let mut worst_completeness = 0.0_f64;
    for l in 0..protocol.m() {
        for eta in Sign::BOTH {
            let post = protocol.post_state(l, eta).expect("axis in range");
            let probs = meas.probabilities(&post).expect("dims checked");
            for (j, &p) in probs.iter().enumerate() {
                if table.rows()[j][l] == eta {
                    continue;
                }
                let v = Violation {
                    outcome: j,
                    axis: l,
                    eta,
                    probability: p,
                };
                if p > tol.probability_floor {
                    violations.push(v);
                } else if p > tol.warning_floor {
                    warnings.push(v);
                }
            }
            let part = table.partition(l, eta);
            let coeffs: Vec<Complex> = part.iter().map(|&j| b[j]).collect();
            let vecs: Vec<StateVector> = part.iter().map(|&j| meas.basis()[j].clone()).collect();
            let decomp = if part.is_empty() {
                post.norm()
            } else {
                StateVector::combination(&coeffs, &vecs)
                    .and_then(|s| s.max_abs_diff(&post))
                    .expect("dims checked")
            };
            worst_decomp = worst_decomp.max(decomp);
            let weight: f64 = coeffs.iter().map(|c| c.norm_sqr()).sum();
            worst_completeness = worst_completeness.max((weight - post.norm_sqr()).abs());
        }
    }
    checks.push(Check::new(
        "φ_η(n_l) = Σ_{j∈S_η} b_j φ_j",
        worst_decomp,
        tol.pipeline,
    ));
    checks.push(Check::new(
        "Σ_{j∈S_η} |b_j|² = ‖φ_η(n_l)‖²",
        worst_completeness,
        tol.pipeline,
    ));
    checks.push(
        Check::new(
            "table-inconsistent reachable outcomes",
            violations.iter().map(|v| v.probability).fold(0.0, f64::max),
            tol.probability_floor,
        )
        .with_detail(format!("{} violation(s)", violations.len())),
    );

    VerificationReport {
        protocol: protocol.name.clone(),
        violations,
        warnings,
        checks,
    }
}
