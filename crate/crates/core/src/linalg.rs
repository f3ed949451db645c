//! Thin wrappers over `nalgebra` for the few dense factorizations we need.

use nalgebra::{DMatrix, DVector, SymmetricEigen};

use crate::error::{Error, Result};
use crate::state::{Complex, Operator, StateVector};

/// Column matrix whose columns are the given vectors.
pub fn columns(vectors: &[StateVector]) -> Result<DMatrix<Complex>> {
    let dim = vectors.first().map(|v| v.dim()).unwrap_or(0);
    if let Some(bad) = vectors.iter().find(|v| v.dim() != dim) {
        return Err(Error::DimensionMismatch {
            expected: dim,
            found: bad.dim(),
        });
    }
    Ok(DMatrix::from_fn(dim, vectors.len(), |r, c| {
        vectors[c].amplitude(r)
    }))
}

/// Singular values in descending order.
pub fn singular_values(vectors: &[StateVector]) -> Result<Vec<f64>> {
    if vectors.is_empty() {
        return Ok(Vec::new());
    }
    let m = columns(vectors)?;
    let mut sv: Vec<f64> = m.singular_values().iter().copied().collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    Ok(sv)
}

/// Number of singular values above `tol`.
pub fn rank(vectors: &[StateVector], tol: f64) -> Result<usize> {
    Ok(singular_values(vectors)?.iter().filter(|&&s| s > tol).count())
}

pub fn to_dmatrix(op: &Operator) -> DMatrix<Complex> {
    DMatrix::from_fn(op.dim(), op.dim(), |r, c| op.get(r, c))
}

pub fn from_dmatrix(m: &DMatrix<Complex>) -> Operator {
    Operator::from_fn(m.nrows(), |r, c| m[(r, c)])
}

/// `exp(iH)` for Hermitian `H`, via its eigendecomposition.
pub fn exp_i_hermitian(h: &Operator, tol: f64) -> Result<Operator> {
    let herm = h.hermiticity_residual();
    if herm > tol {
        return Err(Error::Precondition(format!(
            "generator is not Hermitian (residual {herm:.3e})"
        )));
    }
    let eig = SymmetricEigen::new(to_dmatrix(h));
    let v = &eig.eigenvectors;
    let phases = DMatrix::from_diagonal(&DVector::from_iterator(
        eig.eigenvalues.len(),
        eig.eigenvalues.iter().map(|&l| Complex::new(0.0, l).exp()),
    ));
    Ok(from_dmatrix(&(v * phases * v.adjoint())))
}

/// Eigenvalues (descending) and matching unit eigenvectors of a real
/// symmetric matrix.
pub fn symmetric_eigen(rows: &[Vec<f64>]) -> (Vec<f64>, Vec<Vec<f64>>) {
    let n = rows.len();
    let m = DMatrix::from_fn(n, n, |r, c| rows[r][c]);
    let eig = SymmetricEigen::new(m);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = order
        .iter()
        .map(|&i| eig.eigenvectors.column(i).iter().copied().collect())
        .collect();
    (values, vectors)
}

/// Minimum-norm least-squares solution of a real system.
#[derive(Clone, Debug, PartialEq)]
pub struct LeastSquares {
    pub x: Vec<f64>,
    /// Euclidean norm of `A x - y`.
    pub residual: f64,
    pub rank: usize,
}

pub fn least_squares(a: &[Vec<f64>], y: &[f64], tol: f64) -> Result<LeastSquares> {
    let rows = a.len();
    if rows != y.len() {
        return Err(Error::DimensionMismatch {
            expected: rows,
            found: y.len(),
        });
    }
    let cols = a.first().map(|r| r.len()).unwrap_or(0);
    if rows == 0 || cols == 0 {
        return Err(Error::DimensionMismatch {
            expected: 1,
            found: 0,
        });
    }
    let m = DMatrix::from_fn(rows, cols, |r, c| a[r][c]);
    let rhs = DVector::from_column_slice(y);
    let svd = m.clone().svd(true, true);
    let rank = svd.singular_values.iter().filter(|&&s| s > tol).count();
    let x = svd
        .solve(&rhs, tol)
        .map_err(|e| Error::Construction(e.to_string()))?;
    let residual = (&m * &x - rhs).norm();
    Ok(LeastSquares {
        x: x.iter().copied().collect(),
        residual,
        rank,
    })
}

pub fn det3(m: &[[f64; 3]; 3]) -> f64 {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

/// Inverse of a 3x3 matrix, `None` when `|det| <= tol`.
pub fn inverse3(m: &[[f64; 3]; 3], tol: f64) -> Option<[[f64; 3]; 3]> {
    let d = det3(m);
    if d.abs() <= tol {
        return None;
    }
    let mut inv = [[0.0; 3]; 3];
    for (r, row) in inv.iter_mut().enumerate() {
        for (c, out) in row.iter_mut().enumerate() {
            // cofactor of (c, r)
            let (r1, r2) = ((c + 1) % 3, (c + 2) % 3);
            let (c1, c2) = ((r + 1) % 3, (r + 2) % 3);
            *out = (m[r1][c1] * m[r2][c2] - m[r1][c2] * m[r2][c1]) / d;
        }
    }
    Some(inv)
}
