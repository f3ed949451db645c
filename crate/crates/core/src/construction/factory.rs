//! The four known protocols with their amplitudes exactly as published.
//!
//! Nothing here is corrected: [`super::errata`] audits these against the
//! constraint system and the construction, and the `implied` variants swap
//! in the table the basis actually supports.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_4};

use serde::Serialize;

use super::constraints::m4_table;
use super::gram::{axes_from_gram, table_gram, AxisGram};
use crate::error::{Error, Result};
use crate::protocol::{implied_table, LookupTable, ProjectiveMeasurement, RetrodictionProtocol};
use crate::state::{cis, Complex, StateVector, UnitAxis, ONE, ZERO};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Builtin {
    /// `(|00⟩ + |11⟩)/√2`, axes x, y, z.
    Vaa,
    /// `(|01⟩ - |10⟩)/√2`, axes x, y, z.
    Singlet,
    /// Qutrit ancilla, four tetrahedral axes.
    M4Symmetric,
    /// Two-qubit ancilla, three non-orthogonal axes.
    M3Nonorthogonal,
}

impl Builtin {
    pub const ALL: [Builtin; 4] = [
        Builtin::Vaa,
        Builtin::Singlet,
        Builtin::M4Symmetric,
        Builtin::M3Nonorthogonal,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Builtin::Vaa => "vaa",
            Builtin::Singlet => "singlet",
            Builtin::M4Symmetric => "m4-symmetric",
            Builtin::M3Nonorthogonal => "m3-nonorthogonal",
        }
    }

    pub fn from_name(name: &str) -> Result<Builtin> {
        Builtin::ALL
            .into_iter()
            .find(|b| b.name() == name)
            .ok_or_else(|| {
                Error::Precondition(format!(
                    "unknown builtin {name:?} (expected one of {})",
                    Builtin::ALL.map(|b| b.name()).join(", ")
                ))
            })
    }

    pub fn printed(self) -> PrintedProtocol {
        match self {
            Builtin::Vaa => vaa(),
            Builtin::Singlet => singlet(),
            Builtin::M4Symmetric => m4_symmetric(),
            Builtin::M3Nonorthogonal => m3_nonorthogonal(),
        }
    }

    pub fn protocol(self) -> RetrodictionProtocol {
        self.printed().protocol
    }

    /// The printed state and basis with the table they actually support.
    pub fn implied(self) -> Result<RetrodictionProtocol> {
        let p = self.protocol();
        let t = implied_table(p.initial(), p.axes(), p.measurement(), 1e-10)?;
        let mut out = p.with_table(t)?;
        out.name = format!("{}-implied", self.name());
        Ok(out)
    }
}

impl std::fmt::Display for Builtin {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PrintedProtocol {
    pub builtin: Builtin,
    /// Initial state normalized; everything else verbatim.
    pub protocol: RetrodictionProtocol,
    /// Published expansion coefficients of the initial state, when given.
    pub printed_b: Option<Vec<f64>>,
    /// Norm of `Σ b_j φ_j` before normalization (1 when the state is given
    /// directly).
    pub raw_initial_norm: f64,
}

fn c(re: f64, im: f64) -> Complex {
    Complex::new(re, im)
}

fn r(re: f64) -> Complex {
    Complex::new(re, 0.0)
}

fn xyz() -> Vec<UnitAxis> {
    vec![UnitAxis::X, UnitAxis::Y, UnitAxis::Z]
}

/// The sign table shared by both two-qubit protocols.
pub fn two_qubit_table() -> LookupTable {
    LookupTable::from_strings(&["↓↓↓", "↑↑↓", "↓↑↑", "↑↓↑"]).expect("static table")
}

fn build(
    builtin: Builtin,
    initial: StateVector,
    axes: Vec<UnitAxis>,
    basis: Vec<StateVector>,
    table: LookupTable,
    printed_b: Option<Vec<f64>>,
    raw_initial_norm: f64,
) -> PrintedProtocol {
    let protocol = RetrodictionProtocol::new(
        builtin.name(),
        initial,
        axes,
        ProjectiveMeasurement::new(basis).expect("static basis"),
        table,
    )
    .expect("static protocol");
    PrintedProtocol {
        builtin,
        protocol,
        printed_b,
        raw_initial_norm,
    }
}

fn vaa() -> PrintedProtocol {
    let h = FRAC_1_SQRT_2;
    let e = cis(FRAC_PI_4);
    let ec = e.conj();
    let basis = [1.0, -1.0]
        .iter()
        .map(|s| vec![r(h), e * 0.5 * s, ec * 0.5 * s, ZERO])
        .chain([1.0, -1.0].iter().map(|s| vec![ZERO, ec * 0.5 * s, e * 0.5 * s, r(h)]))
        .map(|a| StateVector::new(a).expect("dim 4"))
        .collect();
    let initial = StateVector::from_real(&[h, 0.0, 0.0, h]).expect("dim 4");
    build(Builtin::Vaa, initial, xyz(), basis, two_qubit_table(), None, 1.0)
}

fn singlet() -> PrintedProtocol {
    let h = FRAC_1_SQRT_2;
    let e = cis(FRAC_PI_4);
    let ec = e.conj();
    let basis = [1.0, -1.0]
        .iter()
        .map(|s| vec![-ec * 0.5 * s, r(h), ZERO, e * 0.5 * s])
        .chain([1.0, -1.0].iter().map(|s| vec![-e * 0.5 * s, ZERO, r(h), ec * 0.5 * s]))
        .map(|a| StateVector::new(a).expect("dim 4"))
        .collect();
    let initial = StateVector::from_real(&[0.0, h, -h, 0.0]).expect("dim 4");
    build(Builtin::Singlet, initial, xyz(), basis, two_qubit_table(), None, 1.0)
}

/// Tetrahedral axes with `n_1 = x` and `n_2` in the xy-plane.
pub fn tetrahedral_axes() -> Vec<UnitAxis> {
    let (s2, s6) = (2f64.sqrt(), 6f64.sqrt());
    [
        [1.0, 0.0, 0.0],
        [-1.0 / 3.0, 2.0 * s2 / 3.0, 0.0],
        [-1.0 / 3.0, -s2 / 3.0, s6 / 3.0],
        [-1.0 / 3.0, -s2 / 3.0, -s6 / 3.0],
    ]
    .iter()
    .map(|v| UnitAxis::new(v[0], v[1], v[2]).expect("unit"))
    .collect()
}

/// Qutrit level `q` (2, 1 or 0) sits at ancilla index `2 - q`. Arguments are
/// the six amplitudes in the order `2↑ 1↑ 0↑ 2↓ 1↓ 0↓`.
fn qutrit(a2u: Complex, a1u: Complex, a0u: Complex, a2d: Complex, a1d: Complex, a0d: Complex) -> StateVector {
    StateVector::new(vec![a2u, a2d, a1u, a1d, a0u, a0d]).expect("dim 6")
}

fn m4_symmetric() -> PrintedProtocol {
    let [r12, r6, r24, r8, r3] = [12.0, 6.0, 24.0, 8.0, 3.0].map(|v: f64| 1.0 / v.sqrt());
    let basis = vec![
        qutrit(c(r12, -r6), r(r12), r(-0.5), c(r12, r6), r(r12), r(-r12)),
        qutrit(c(-r12, r6), r(r12), r(-0.5), c(-r12, -r6), r(r12), r(-r12)),
        qutrit(c(r12, r24), r(r12 + r8), ZERO, c(r12, -r24), r(r12 - r8), r(r3)),
        qutrit(c(-r12, -r24), r(r12 - r8), ZERO, c(-r12, r24), r(r12 + r8), r(r3)),
        qutrit(c(-r12, -r24), r(r12 + r8), r(0.5), c(-r12, r24), r(r12 - r8), r(-r12)),
        qutrit(c(r12, r24), r(r12 + r8), r(0.5), c(r12, -r24), r(r8 + r12), r(-r12)),
    ];
    let b = vec![1.0 / 6f64.sqrt(); 6];
    expanded(Builtin::M4Symmetric, basis, b, tetrahedral_axes(), m4_table())
}

fn m3_table() -> LookupTable {
    LookupTable::from_strings(&["↓↑↓", "↓↑↑", "↓↓↓", "↓↓↑", "↑↑↓", "↑↓↑", "↑↑↑", "↑↑↑"])
        .expect("static table")
}

fn m3_basis() -> Vec<StateVector> {
    let s = f64::sqrt;
    let k = |bits: &str| StateVector::ket(bits).expect("static ket");
    let sum = |terms: &[(Complex, &str)]| {
        let coeffs: Vec<Complex> = terms.iter().map(|t| t.0).collect();
        let kets: Vec<StateVector> = terms.iter().map(|t| k(t.1)).collect();
        StateVector::combination(&coeffs, &kets).expect("dim 8")
    };
    let common = |u: f64, v: f64| {
        vec![
            (c(0.25, -s(3.0) / 12.0) * u, "uuu"),
            (c(0.25, s(3.0) / 12.0) * u, "uud"),
            (r(0.25 + v), "udu"),
            (r(0.25 - v), "udd"),
        ]
    };
    let mut p5 = common(1.0, s(6.0) / 12.0);
    p5.push((r(s(10.0) / 4.0), "ddd"));
    let mut p6 = common(1.0, s(6.0) / 12.0);
    p6.extend([
        (r(-s(14.0) / 7.0), "duu"),
        (r(-2.0 / 35.0 * s(35.0)), "ddu"),
        (r(-3.0 / 20.0 * s(10.0)), "ddd"),
    ]);
    let tail = [
        (r(-s(14.0) / 7.0), "duu"),
        (r(-3.0 / 70.0 * s(35.0)), "ddu"),
        (r(-s(10.0) / 20.0), "ddd"),
    ];
    let mut p7 = common(1.0, s(6.0) / 6.0);
    p7.extend(tail);
    let mut p8 = common(-1.0, s(6.0) / 6.0);
    p8.extend(tail);
    let q = c(0.25, 0.25 * s(3.0));
    vec![
        k("dud"),
        sum(&[
            (-q, "uuu"),
            (-q.conj(), "uud"),
            (r(0.25), "udu"),
            (r(0.25), "udd"),
            (r(s(35.0) / 10.0), "ddu"),
            (r(-s(10.0) / 20.0), "ddd"),
        ]),
        sum(&[
            (q, "uuu"),
            (q.conj(), "uud"),
            (r(0.25), "udu"),
            (r(0.25), "udd"),
            (r(s(35.0) / 10.0), "ddu"),
            (r(-s(10.0) / 20.0), "ddd"),
        ]),
        sum(&[
            (c(-s(2.0) / 4.0, s(6.0) / 12.0), "uuu"),
            (c(-s(2.0) / 4.0, -s(6.0) / 12.0), "uud"),
            (r(s(2.0) / 4.0 - s(3.0) / 6.0), "udu"),
            (r(s(2.0) / 4.0 + s(3.0) / 6.0), "udd"),
            (r(s(7.0) / 7.0), "duu"),
            (r(-1.0 / 35.0), "ddu"),
            (r(s(5.0) / 10.0), "ddd"),
        ]),
        sum(&p5),
        sum(&p6),
        sum(&p7),
        sum(&p8),
    ]
}

fn m3_nonorthogonal() -> PrintedProtocol {
    let table = m3_table();
    let b: Vec<f64> = [1.0, 0.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0]
        .iter()
        .map(|v| v / 8f64.sqrt())
        .collect();
    let axes = m3_axes(&table, &b).expect("published table gives a PSD Gram matrix");
    expanded(Builtin::M3Nonorthogonal, m3_basis(), b, axes, table)
}

/// The axes are not listed for this protocol; take the geometry the table
/// and coefficients force, `n_l·n_k = Σ ε^l ε^k b² / Σ b²`.
fn m3_axes(table: &LookupTable, b: &[f64]) -> Result<Vec<UnitAxis>> {
    let total: f64 = b.iter().map(|x| x * x).sum();
    let g = table_gram(table, b)?
        .into_iter()
        .map(|row| row.into_iter().map(|v| v / total).collect())
        .collect();
    axes_from_gram(&AxisGram::new(g)?)
}

/// Protocol whose initial state is `Σ b_j φ_j`, normalized.
fn expanded(
    builtin: Builtin,
    basis: Vec<StateVector>,
    b: Vec<f64>,
    axes: Vec<UnitAxis>,
    table: LookupTable,
) -> PrintedProtocol {
    let coeffs: Vec<Complex> = b.iter().map(|x| ONE * *x).collect();
    let raw = StateVector::combination(&coeffs, &basis).expect("static basis");
    let norm = raw.norm();
    build(builtin, raw.normalized(), axes, basis, table, Some(b), norm)
}
