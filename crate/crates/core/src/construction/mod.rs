//! From a sign table and an axis geometry to a retrodiction protocol.
//!
//! [`constraints`] and [`gram`] decide whether a table, coefficients and
//! axes are compatible, [`basis`] builds Alice's measurement when they are,
//! [`factory`] holds the known protocols as published, [`errata`] audits
//! them and [`rank`] counts the dimensions the post-measurement states need.

pub mod basis;
pub mod constraints;
pub mod errata;
pub mod factory;
pub mod gram;
pub mod input;
pub mod rank;

pub use basis::{construct_basis, gell_mann, ConstructionResult, UnitaryParams};
pub use constraints::{
    check_constraints, m4_family, m4_table, solve_coefficients, CoefficientSolution, ConstraintReport,
    M4Family,
};
pub use errata::{audit_printed, compare_bases, compare_m4, AuditReport, BasisDiff, Finding, FindingKind};
pub use factory::{tetrahedral_axes, two_qubit_table, Builtin, PrintedProtocol};
pub use gram::{
    axes_from_gram, check_axis_dependence, dependence_coefficients, feasibility, table_gram, AxisGram,
    Feasibility,
};
pub use input::{parse_construction_input, symmetric_input, ConstructionInput};
pub use rank::{linear_relations, min_outcomes_lower_bound, postmeasurement_rank, postmeasurement_states};
