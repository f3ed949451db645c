//! The constraint system linking a sign table, the coefficients `b_j` and
//! the axis geometry.
//!
//! With `ψ = Σ b_j φ_j` (real `b_j >= 0`) the table must satisfy
//!
//! * `Σ b_j² = 1`,
//! * `Σ_j ε_j^(l) b_j² = 0`, equivalently `Σ_{j∈S_η} b_j² = 1/2`,
//! * `n_l · n_k = Σ_j ε_j^(l) ε_j^(k) b_j²`.
//!
//! The unsquared balance `Σ_j ε_j^(l) b_j` is computed and reported but not
//! enforced: the half-sum condition follows from the squared form only.

use serde::Serialize;

use super::gram::{table_gram, AxisGram};
use crate::error::{Error, Result};
use crate::linalg::least_squares;
use crate::protocol::LookupTable;
use crate::report::{Check, Report};
use crate::state::{Sign, Tolerances, UnitAxis};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConstraintReport {
    /// `Σ b_j² - 1`.
    pub normalization: f64,
    /// `Σ_j ε_j^(l) b_j²` per axis.
    pub squared_balance: Vec<f64>,
    /// `Σ_j ε_j^(l) b_j` per axis.
    pub unsquared_balance: Vec<f64>,
    /// `Σ_j ε_j^(l) b_j²` restricted to each partition, `[S_+, S_-]`.
    pub half_sums: Vec<[f64; 2]>,
    /// `Σ_s ε_s^(l) ε_s^(k) b_s²`.
    pub table_gram: Vec<Vec<f64>>,
    /// `max_{l,k} |n_l·n_k - table_gram[l][k]|`.
    pub gram_residual: f64,
    /// Normalization, squared balance, half-sums and geometry.
    pub enforced: Report,
    /// Unsquared balance, reported separately.
    pub unsquared: Check,
}

impl ConstraintReport {
    pub fn passed(&self) -> bool {
        self.enforced.passed()
    }

    /// Largest residual among the enforced constraints.
    pub fn max_residual(&self) -> f64 {
        self.enforced
            .checks
            .iter()
            .map(|c| c.residual)
            .fold(0.0, f64::max)
    }
}

pub fn check_constraints(
    table: &LookupTable,
    b: &[f64],
    axes: &[UnitAxis],
    tol: &Tolerances,
) -> Result<ConstraintReport> {
    if b.len() != table.k() {
        return Err(Error::DimensionMismatch {
            expected: table.k(),
            found: b.len(),
        });
    }
    if axes.len() != table.m() {
        return Err(Error::DimensionMismatch {
            expected: table.m(),
            found: axes.len(),
        });
    }
    let m = table.m();
    let normalization = b.iter().map(|x| x * x).sum::<f64>() - 1.0;
    let mut squared_balance = Vec::with_capacity(m);
    let mut unsquared_balance = Vec::with_capacity(m);
    let mut half_sums = Vec::with_capacity(m);
    for l in 0..m {
        let col = table.column(l);
        squared_balance.push(col.iter().zip(b).map(|(e, x)| e * x * x).sum());
        unsquared_balance.push(col.iter().zip(b).map(|(e, x)| e * x).sum());
        let half = |eta: Sign| -> f64 {
            table.partition(l, eta).iter().map(|&j| b[j] * b[j]).sum()
        };
        half_sums.push([half(Sign::Up), half(Sign::Down)]);
    }
    let tg = table_gram(table, b)?;
    let geometric = AxisGram::from_axes(axes);
    let mut gram_residual = 0.0_f64;
    for l in 0..m {
        for k in 0..m {
            gram_residual = gram_residual.max((geometric.get(l, k) - tg[l][k]).abs());
        }
    }

    let max_abs = |v: &[f64]| v.iter().fold(0.0_f64, |a, x| a.max(x.abs()));
    let half_residual = half_sums
        .iter()
        .flat_map(|h| h.iter().map(|x| (x - 0.5).abs()))
        .fold(0.0, f64::max);

    let mut enforced = Report::new("constraint system");
    enforced.push(Check::new("normalization Σ b_j² = 1", normalization.abs(), tol.exact));
    enforced.push(Check::new(
        "balance Σ_j ε_j b_j² = 0",
        max_abs(&squared_balance),
        tol.pipeline,
    ));
    enforced.push(Check::new("half-sums Σ_{S_η} b_j² = 1/2", half_residual, tol.pipeline));
    enforced.push(Check::new(
        "geometry n_l·n_k = Σ ε^l ε^k b²",
        gram_residual,
        tol.pipeline,
    ));
    let unsquared = Check::new(
        "unsquared balance Σ_j ε_j b_j = 0 (reported only)",
        max_abs(&unsquared_balance),
        tol.pipeline,
    );

    Ok(ConstraintReport {
        normalization,
        squared_balance,
        unsquared_balance,
        half_sums,
        table_gram: tg,
        gram_residual,
        enforced,
        unsquared,
    })
}

/// Solution of the linear system in the unknowns `b_j²`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CoefficientSolution {
    /// Nonnegative roots.
    pub b: Vec<f64>,
    pub b_squared: Vec<f64>,
    /// Rank of the system; below `K` the minimum-norm solution is returned.
    pub rank: usize,
    /// `‖A x - y‖` of the least-squares solve.
    pub residual: f64,
}

/// Solves normalization, the balance conditions and the Gram relations for
/// `b_j²`, then takes nonnegative roots.
pub fn solve_coefficients(
    table: &LookupTable,
    gram: &AxisGram,
    tol: &Tolerances,
) -> Result<CoefficientSolution> {
    let (k, m) = (table.k(), table.m());
    if gram.m() != m {
        return Err(Error::DimensionMismatch {
            expected: m,
            found: gram.m(),
        });
    }
    let cols: Vec<Vec<f64>> = (0..m).map(|l| table.column(l)).collect();
    let mut a = vec![vec![1.0; k]];
    let mut y = vec![1.0];
    for col in &cols {
        a.push(col.clone());
        y.push(0.0);
    }
    for l in 0..m {
        for kk in l + 1..m {
            a.push((0..k).map(|s| cols[l][s] * cols[kk][s]).collect());
            y.push(gram.get(l, kk));
        }
    }
    let sol = least_squares(&a, &y, 1e-12)?;
    if sol.residual > tol.pipeline {
        return Err(Error::Infeasible(format!(
            "the sign table and Gram matrix are inconsistent (residual {:.3e})",
            sol.residual
        )));
    }
    if let Some((j, v)) = sol
        .x
        .iter()
        .enumerate()
        .find(|(_, v)| **v < -tol.pipeline)
    {
        return Err(Error::Infeasible(format!("b_{}² = {v:.6} is negative", j + 1)));
    }
    let b_squared: Vec<f64> = sol.x.iter().map(|v| v.max(0.0)).collect();
    Ok(CoefficientSolution {
        b: b_squared.iter().map(|v| v.sqrt()).collect(),
        b_squared,
        rank: sol.rank,
        residual: sol.residual,
    })
}

/// The four-axis sign table with `S_+(n_1) = {1,2,3}`, `S_+(n_2) = {1,5,6}`,
/// `S_+(n_3) = {3,4,6}` and the fourth column fixed by `n_4 = -(n_1+n_2+n_3)`.
pub fn m4_table() -> LookupTable {
    LookupTable::from_strings(&["↑↑↓↓", "↑↓↓↑", "↑↓↑↓", "↓↓↑↑", "↓↑↓↑", "↓↑↑↓"])
        .expect("static table")
}

/// Two-parameter family of four-axis solutions.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct M4Family {
    pub b: Vec<f64>,
    pub gram: AxisGram,
}

/// `b_1² = b_4² = 1/2 - b_5² - b_6²`, `b_2² = b_6²`, `b_3² = b_5²`, and the
/// Gram matrix the sign table then forces.
pub fn m4_family(b5: f64, b6: f64) -> Result<M4Family> {
    let (s5, s6) = (b5 * b5, b6 * b6);
    let b1s = 0.5 - s5 - s6;
    if b1s < 0.0 {
        return Err(Error::Infeasible(format!(
            "b_5² + b_6² = {:.6} exceeds 1/2",
            s5 + s6
        )));
    }
    let b: Vec<f64> = [b1s, s6, s5, b1s, s5, s6].iter().map(|v| v.sqrt()).collect();
    let g = table_gram(&m4_table(), &b)?;
    Ok(M4Family {
        gram: AxisGram::new(g)?,
        b,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn vaa_table() -> LookupTable {
        LookupTable::from_strings(&["↓↓↓", "↑↑↓", "↓↑↑", "↑↓↑"]).unwrap()
    }

    #[test]
    fn degenerate_column_reported() {
        let t = LookupTable::from_strings(&["+↓↓", "+↑↓", "+↑↑", "+↓↑"]).unwrap();
        let r = check_constraints(
            &t,
            &[0.5; 4],
            &[UnitAxis::X, UnitAxis::Y, UnitAxis::Z],
            &Tolerances::default(),
        )
        .unwrap();
        assert!((r.squared_balance[0] - 1.0).abs() < 1e-15);
        assert!(!r.passed());
    }

    #[test]
    fn orthogonal_axes_solve_to_quarter() {
        let g = AxisGram::uniform(3, 0.0).unwrap();
        let s = solve_coefficients(&vaa_table(), &g, &Tolerances::default()).unwrap();
        assert_eq!(s.rank, 4);
        for v in &s.b_squared {
            assert!((v - 0.25).abs() < 1e-12);
        }
    }

    #[test]
    fn inconsistent_gram_is_infeasible() {
        let g = AxisGram::uniform(3, 0.9).unwrap();
        let err = solve_coefficients(&vaa_table(), &g, &Tolerances::default()).unwrap_err();
        assert!(err.to_string().contains("no retrodiction protocol"));
    }

    #[test]
    fn m4_family_outside_region() {
        assert!(m4_family(0.6, 0.5).is_err());
        assert!(m4_family(0.4, 0.3).is_ok());
    }
}
