//! Axis geometry: Gram matrices, their factorization into unit vectors, the
//! linear dependence of extra axes and the feasibility rule.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{inverse3, symmetric_eigen};
use crate::protocol::LookupTable;
use crate::report::{Check, Report};
use crate::state::UnitAxis;

/// `G_lk = n_l · n_k`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AxisGram {
    g: Vec<Vec<f64>>,
}

const SYMMETRY_TOL: f64 = 1e-12;
const DIAGONAL_TOL: f64 = 1e-10;
const EIGEN_CLAMP: f64 = -1e-12;
const RANK_TOL: f64 = 1e-10;

impl AxisGram {
    /// Square, symmetric, unit diagonal. Positivity is checked when factoring.
    pub fn new(g: Vec<Vec<f64>>) -> Result<Self> {
        let m = g.len();
        if m == 0 {
            return Err(Error::InfeasibleGeometry("empty Gram matrix".into()));
        }
        for (l, row) in g.iter().enumerate() {
            if row.len() != m {
                return Err(Error::InfeasibleGeometry(format!(
                    "Gram row {} has {} entries, expected {m}",
                    l + 1,
                    row.len()
                )));
            }
            if row.iter().any(|v| !v.is_finite()) {
                return Err(Error::InfeasibleGeometry("non-finite Gram entry".into()));
            }
            if (row[l] - 1.0).abs() > DIAGONAL_TOL {
                return Err(Error::InfeasibleGeometry(format!(
                    "G[{l},{l}] = {} is not 1",
                    row[l]
                )));
            }
            for k in 0..l {
                if (row[k] - g[k][l]).abs() > SYMMETRY_TOL {
                    return Err(Error::InfeasibleGeometry(format!(
                        "Gram matrix is not symmetric at ({l},{k})"
                    )));
                }
            }
        }
        Ok(AxisGram { g })
    }

    pub fn from_axes(axes: &[UnitAxis]) -> Self {
        AxisGram {
            g: axes
                .iter()
                .map(|a| axes.iter().map(|b| a.dot(b)).collect())
                .collect(),
        }
    }

    /// All off-diagonal entries equal to `c`.
    pub fn uniform(m: usize, c: f64) -> Result<Self> {
        Self::new(
            (0..m)
                .map(|l| (0..m).map(|k| if l == k { 1.0 } else { c }).collect())
                .collect(),
        )
    }

    pub fn m(&self) -> usize {
        self.g.len()
    }

    pub fn get(&self, l: usize, k: usize) -> f64 {
        self.g[l][k]
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.g
    }

    pub fn max_abs_diff(&self, other: &AxisGram) -> f64 {
        if self.m() != other.m() {
            return f64::INFINITY;
        }
        self.g
            .iter()
            .zip(&other.g)
            .flat_map(|(a, b)| a.iter().zip(b).map(|(x, y)| (x - y).abs()))
            .fold(0.0, f64::max)
    }
}

/// `Σ_s ε_s^(l) ε_s^(k) b_s²`, the right-hand side of the axis relations.
pub fn table_gram(table: &LookupTable, b: &[f64]) -> Result<Vec<Vec<f64>>> {
    if b.len() != table.k() {
        return Err(Error::DimensionMismatch {
            expected: table.k(),
            found: b.len(),
        });
    }
    let cols: Vec<Vec<f64>> = (0..table.m()).map(|l| table.column(l)).collect();
    Ok((0..table.m())
        .map(|l| {
            (0..table.m())
                .map(|k| {
                    (0..table.k())
                        .map(|s| cols[l][s] * cols[k][s] * b[s] * b[s])
                        .sum()
                })
                .collect()
        })
        .collect())
}

/// Unit vectors realizing `G`, in a canonical orientation: the first axis
/// along x, the first independent one in the xy-plane with y > 0, and the
/// first one leaving that plane with z > 0.
pub fn axes_from_gram(gram: &AxisGram) -> Result<Vec<UnitAxis>> {
    let (values, vectors) = symmetric_eigen(gram.rows());
    if let Some(&low) = values.iter().find(|&&v| v < EIGEN_CLAMP) {
        return Err(Error::InfeasibleGeometry(format!(
            "Gram matrix is not positive semidefinite (eigenvalue {low:.3e})"
        )));
    }
    let rank = values.iter().filter(|&&v| v > RANK_TOL).count();
    if rank > 3 {
        return Err(Error::InfeasibleGeometry(format!(
            "Gram matrix has rank {rank}, axes need rank at most 3"
        )));
    }
    let m = gram.m();
    let raw: Vec<[f64; 3]> = (0..m)
        .map(|l| {
            let mut v = [0.0; 3];
            for (c, out) in v.iter_mut().enumerate() {
                if let (Some(&lam), Some(vec)) = (values.get(c), vectors.get(c)) {
                    *out = lam.max(0.0).sqrt() * vec[l];
                }
            }
            v
        })
        .collect();

    let e1 = unit(raw[0]);
    let e2 = raw
        .iter()
        .map(|v| sub(*v, scale(e1, dot(*v, e1))))
        .find(|w| norm(*w) > 1e-8)
        .map(unit)
        .unwrap_or_else(|| any_perpendicular(e1));
    let e3 = cross(e1, e2);
    let mut coords: Vec<[f64; 3]> = raw
        .iter()
        .map(|v| [dot(*v, e1), dot(*v, e2), dot(*v, e3)])
        .collect();
    if let Some(first) = coords.iter().find(|c| c[2].abs() > 1e-8) {
        if first[2] < 0.0 {
            for c in coords.iter_mut() {
                c[2] = -c[2];
            }
        }
    }
    let axes = coords
        .into_iter()
        .map(UnitAxis::normalized)
        .collect::<Result<Vec<_>>>()
        .map_err(|_| Error::InfeasibleGeometry("Gram matrix yields a zero axis".into()))?;
    let err = AxisGram::from_axes(&axes).max_abs_diff(gram);
    if err > 1e-10 {
        return Err(Error::Construction(format!(
            "realized axes reproduce the Gram matrix only to {err:.3e}"
        )));
    }
    Ok(axes)
}

/// `c^(k)` with `n_{k+3} = Σ_l c_l^(k) n_l`, taking the first three axes as
/// the spanning set.
pub fn dependence_coefficients(axes: &[UnitAxis]) -> Result<Vec<[f64; 3]>> {
    if axes.len() <= 3 {
        return Err(Error::NotApplicable(format!(
            "axis dependence needs more than three axes, got {}",
            axes.len()
        )));
    }
    let mut cols = [[0.0; 3]; 3];
    for (l, a) in axes[..3].iter().enumerate() {
        for (i, v) in a.components().iter().enumerate() {
            cols[i][l] = *v;
        }
    }
    let inv = inverse3(&cols, 1e-10).ok_or_else(|| {
        Error::InfeasibleGeometry("the first three axes are linearly dependent".into())
    })?;
    Ok(axes[3..]
        .iter()
        .map(|a| {
            let n = a.components();
            let mut c = [0.0; 3];
            for (r, out) in c.iter_mut().enumerate() {
                *out = (0..3).map(|i| inv[r][i] * n[i]).sum();
            }
            c
        })
        .collect())
}

/// One row `s` of the sign relation for extra axis `k + 3`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DependenceRow {
    pub outcome: usize,
    pub extra_axis: usize,
    pub sign: f64,
    pub combination: f64,
    pub residual: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DependenceReport {
    pub rows: Vec<DependenceRow>,
    pub checks: Report,
}

impl DependenceReport {
    pub fn holds(&self) -> bool {
        self.checks.passed()
    }

    pub fn failing_rows(&self) -> impl Iterator<Item = &DependenceRow> {
        self.rows.iter().filter(|r| r.residual > 1e-10)
    }
}

/// Checks `ε_s^(k+3) = Σ_l c_l^(k) ε_s^(l)` for every outcome `s`.
pub fn check_axis_dependence(table: &LookupTable, coeffs: &[[f64; 3]]) -> Result<DependenceReport> {
    let m = table.m();
    if m <= 3 {
        return Err(Error::NotApplicable(format!(
            "axis dependence needs more than three axes, got {m}"
        )));
    }
    if coeffs.len() != m - 3 {
        return Err(Error::DimensionMismatch {
            expected: m - 3,
            found: coeffs.len(),
        });
    }
    let mut rows = Vec::new();
    let mut checks = Report::new("axis dependence of the sign table");
    for (k, c) in coeffs.iter().enumerate() {
        let mut worst = 0.0_f64;
        for s in 0..table.k() {
            let r = &table.rows()[s];
            let combination: f64 = (0..3).map(|l| c[l] * r[l].value()).sum();
            let sign = r[k + 3].value();
            let residual = (sign - combination).abs();
            worst = worst.max(residual);
            rows.push(DependenceRow {
                outcome: s,
                extra_axis: k + 3,
                sign,
                combination,
                residual,
            });
        }
        checks.push(Check::new(format!("ε^(n{}) from n1..n3", k + 4), worst, 1e-10));
    }
    Ok(DependenceReport { rows, checks })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Feasibility {
    pub m: usize,
    pub feasible: bool,
    pub reason: String,
}

/// `m <= 3` is always feasible, `m = 4` needs `‖Σ n_l‖ < 1e-10`, and no
/// solutions exist for `m > 4`.
pub fn feasibility(axes: &[UnitAxis]) -> Feasibility {
    let m = axes.len();
    let (feasible, reason) = match m {
        0 => (false, "no axes given".to_string()),
        1 | 2 => (true, "one or two axes: solvable with an unentangled qubit".into()),
        3 => (true, "three axes: solvable with a four- or eight-dimensional space".into()),
        4 => {
            let mut s = [0.0; 3];
            for a in axes {
                for (acc, v) in s.iter_mut().zip(a.components()) {
                    *acc += v;
                }
            }
            let n = norm(s);
            if n < 1e-10 {
                (true, format!("four axes summing to zero (|Σ n_l| = {n:.3e})"))
            } else {
                (false, format!("four axes must sum to zero, |Σ n_l| = {n:.3e}"))
            }
        }
        _ => (false, format!("no solutions exist for m > 4 (m = {m})")),
    };
    Feasibility { m, feasible, reason }
}

fn dot(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn norm(a: [f64; 3]) -> f64 {
    dot(a, a).sqrt()
}

fn scale(a: [f64; 3], s: f64) -> [f64; 3] {
    [a[0] * s, a[1] * s, a[2] * s]
}

fn sub(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

fn unit(a: [f64; 3]) -> [f64; 3] {
    scale(a, 1.0 / norm(a))
}

fn cross(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

fn any_perpendicular(a: [f64; 3]) -> [f64; 3] {
    let trial = if a[0].abs() < 0.9 { [1.0, 0.0, 0.0] } else { [0.0, 1.0, 0.0] };
    unit(sub(trial, scale(a, dot(trial, a))))
}
