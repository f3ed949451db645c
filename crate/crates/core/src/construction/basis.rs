//! Building Alice's basis by inverting the action of Bob's spin operators.
//!
//! Work in the abstract coordinates where `φ_j = e_j`. There `ψ = b` and
//! `(1⊗σ·n_l)ψ = ε^(l) ∘ b`, which fixes the images `s_a = σ_a ψ` of three
//! independent axes. The vectors
//!
//! ```text
//! ζ = +1:  (s_x + i s_y)/√2,  (b + s_z)/√2,  χ_1, χ_3, ...
//! ζ = -1:  (b - s_z)/√2,      (s_x - i s_y)/√2,  χ_2, χ_4, ...
//! ```
//!
//! are orthonormal, the first two in each row are σ_z eigenvectors, and σ_x
//! maps slot `a` of the upper row onto slot `a` of the lower one. Sending
//! slot `a` of row ζ to `Σ_c U_ζ[a][c] |c, ζ⟩` with `U_ζ = exp(iθ_ζ·τ + iΛ_ζ)`
//! therefore defines a unitary `W` that intertwines the spin action, and
//! `φ_j = W e_j`.

use std::f64::consts::FRAC_1_SQRT_2;

use serde::Serialize;

use super::constraints::check_constraints;
use crate::error::{Error, Result};
use crate::linalg::{det3, exp_i_hermitian, inverse3};
use crate::protocol::{LookupTable, ProjectiveMeasurement, RetrodictionProtocol};
use crate::report::{Check, Report};
use crate::state::{spin_apply, Complex, Operator, StateVector, Tolerances, UnitAxis, I, ONE, ZERO};

/// Free parameters of the eigenspace rotations. Empty `theta` means zero.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct UnitaryParams {
    pub theta_plus: Vec<f64>,
    pub theta_minus: Vec<f64>,
    pub lambda_plus: f64,
    pub lambda_minus: f64,
}

impl UnitaryParams {
    /// The same rotation on both eigenspaces.
    pub fn shared(theta: Vec<f64>, lambda: f64) -> Self {
        UnitaryParams {
            theta_plus: theta.clone(),
            theta_minus: theta,
            lambda_plus: lambda,
            lambda_minus: lambda,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConstructionResult {
    #[serde(skip)]
    pub basis: Vec<StateVector>,
    pub coefficients: Vec<f64>,
    #[serde(skip)]
    pub initial: StateVector,
    #[serde(skip)]
    pub axes: Vec<UnitAxis>,
    #[serde(skip)]
    pub table: LookupTable,
    pub params: UnitaryParams,
    /// Abstract coordinates of `σ_x ψ`, `σ_y ψ`, `σ_z ψ`.
    pub spin_images: [Vec<f64>; 3],
    /// Abstract coordinates of the extension vectors.
    pub extension: Vec<Vec<f64>>,
    pub checks: Report,
}

impl ConstructionResult {
    pub fn dim_a(&self) -> usize {
        self.initial.dim_a()
    }

    pub fn protocol(&self, name: impl Into<String>) -> Result<RetrodictionProtocol> {
        RetrodictionProtocol::new(
            name,
            self.initial.normalized(),
            self.axes.clone(),
            ProjectiveMeasurement::new(self.basis.clone())?,
            self.table.clone(),
        )
    }
}

/// Generalized Gell-Mann matrices for `su(d)`, `d² - 1` of them, ordered so
/// that `d = 3` gives the standard λ1..λ8.
pub fn gell_mann(d: usize) -> Vec<Operator> {
    let unit = |r: usize, c: usize, v: Complex| {
        Operator::from_fn(d, move |i, j| if i == r && j == c { v } else { ZERO })
    };
    let mut out = Vec::with_capacity(d * d - 1);
    for k in 1..d {
        for j in 0..k {
            out.push(unit(j, k, ONE).try_add(&unit(k, j, ONE)).expect("same dim"));
            out.push(unit(j, k, -I).try_add(&unit(k, j, I)).expect("same dim"));
        }
        let norm = (2.0 / (k * (k + 1)) as f64).sqrt();
        out.push(Operator::from_fn(d, |i, j| {
            if i != j || i > k {
                ZERO
            } else if i < k {
                Complex::new(norm, 0.0)
            } else {
                Complex::new(-(k as f64) * norm, 0.0)
            }
        }));
    }
    out
}

/// `exp(i Σ θ_k λ_k / 2 + iΛ)`.
pub fn eigenspace_unitary(d: usize, theta: &[f64], lambda: f64) -> Result<Operator> {
    if !theta.is_empty() && theta.len() != d * d - 1 {
        return Err(Error::Precondition(format!(
            "a rotation of a {d}-dimensional eigenspace takes {} parameters, got {}",
            d * d - 1,
            theta.len()
        )));
    }
    let mut h = Operator::zeros(d);
    for (t, g) in theta.iter().zip(gell_mann(d)) {
        h = h.try_add(&g.scale(Complex::new(t / 2.0, 0.0)))?;
    }
    let u = exp_i_hermitian(&h, 1e-12)?;
    Ok(u.scale(Complex::new(0.0, lambda).exp()))
}

type Coords = Vec<Complex>;

fn cinner(a: &[Complex], b: &[Complex]) -> Complex {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

fn cnorm(a: &[Complex]) -> f64 {
    cinner(a, a).re.max(0.0).sqrt()
}

fn real_coords(v: &[f64]) -> Coords {
    v.iter().map(|x| Complex::new(*x, 0.0)).collect()
}

fn combine(a: &[Complex], ca: Complex, b: &[Complex], cb: Complex) -> Coords {
    a.iter().zip(b).map(|(x, y)| ca * x + cb * y).collect()
}

/// First triple of axes (in lexicographic index order) that spans space.
fn independent_triple(axes: &[UnitAxis]) -> Option<[usize; 3]> {
    let m = axes.len();
    for i in 0..m {
        for j in i + 1..m {
            for k in j + 1..m {
                let rows = [axes[i].components(), axes[j].components(), axes[k].components()];
                if det3(&rows).abs() > 1e-8 {
                    return Some([i, j, k]);
                }
            }
        }
    }
    None
}

pub fn construct_basis(
    table: &LookupTable,
    b: &[f64],
    axes: &[UnitAxis],
    params: &UnitaryParams,
    tol: &Tolerances,
) -> Result<ConstructionResult> {
    let k = table.k();
    if !k.is_multiple_of(2) || k < 4 {
        return Err(Error::Precondition(format!(
            "the basis size must be even and at least 4, got {k}"
        )));
    }
    let report = check_constraints(table, b, axes, tol)?;
    if let Some(worst) = report
        .enforced
        .checks
        .iter()
        .filter(|c| c.residual > tol.pipeline)
        .max_by(|x, y| x.residual.total_cmp(&y.residual))
    {
        return Err(Error::ConstraintResidual {
            constraint: worst.name.clone(),
            residual: worst.residual,
            tolerance: tol.pipeline,
        });
    }

    let triple = independent_triple(axes).ok_or_else(|| {
        Error::Precondition("construction needs three linearly independent axes".into())
    })?;
    let n_rows = triple.map(|l| axes[l].components());
    let n_inv = inverse3(&n_rows, 1e-8).expect("triple is independent");
    let images: Vec<Vec<f64>> = (0..table.m())
        .map(|l| table.column(l).iter().zip(b).map(|(e, x)| e * x).collect())
        .collect();
    let s: [Vec<f64>; 3] = std::array::from_fn(|a| {
        (0..k)
            .map(|j| (0..3).map(|r| n_inv[a][r] * images[triple[r]][j]).sum())
            .collect()
    });
    let mut dependence = 0.0_f64;
    for (l, axis) in axes.iter().enumerate() {
        let n = axis.components();
        for j in 0..k {
            let v: f64 = (0..3).map(|a| n[a] * s[a][j]).sum();
            dependence = dependence.max((v - images[l][j]).abs());
        }
    }
    if dependence > tol.pipeline {
        return Err(Error::ConstraintResidual {
            constraint: "extra axes must act as the matching combination of n1..n3".into(),
            residual: dependence,
            tolerance: tol.pipeline,
        });
    }

    let bc = real_coords(b);
    let [sx, sy, sz] = [real_coords(&s[0]), real_coords(&s[1]), real_coords(&s[2])];
    let h = Complex::new(FRAC_1_SQRT_2, 0.0);
    let u1p = combine(&sx, h, &sy, I * h);
    let u2p = combine(&bc, h, &sz, h);
    let u2m = combine(&bc, h, &sz, -h);
    let u1m = combine(&sx, h, &sy, -I * h);

    let mut span: Vec<Coords> = vec![bc.clone(), sx.clone(), sy.clone(), sz.clone()];
    let frame_err = orthonormality(&span);
    if frame_err > tol.pipeline {
        return Err(Error::ConstraintResidual {
            constraint: "ψ and its spin images must be orthonormal".into(),
            residual: frame_err,
            tolerance: tol.pipeline,
        });
    }
    let mut extension: Vec<Coords> = Vec::new();
    for j in 0..k {
        if extension.len() == k - 4 {
            break;
        }
        let mut w: Coords = (0..k).map(|i| if i == j { ONE } else { ZERO }).collect();
        for _ in 0..2 {
            for q in span.iter() {
                let c = cinner(q, &w);
                w = combine(&w, ONE, q, -c);
            }
        }
        let n = cnorm(&w);
        if n > 1e-8 {
            let unit: Coords = w.iter().map(|x| x / n).collect();
            span.push(unit.clone());
            extension.push(unit);
        }
    }
    if extension.len() != k - 4 {
        return Err(Error::Construction("orthogonal complement has the wrong dimension".into()));
    }

    let d = k / 2;
    let mut plus = vec![u1p, u2p];
    let mut minus = vec![u2m, u1m];
    for (i, chi) in extension.iter().enumerate() {
        if i % 2 == 0 {
            plus.push(chi.clone());
        } else {
            minus.push(chi.clone());
        }
    }
    let u_plus = eigenspace_unitary(d, &params.theta_plus, params.lambda_plus)?;
    let u_minus = eigenspace_unitary(d, &params.theta_minus, params.lambda_minus)?;

    let mut basis_amps = vec![vec![ZERO; k]; k];
    for (frames, u, spin) in [(&plus, &u_plus, 0usize), (&minus, &u_minus, 1usize)] {
        for (a, f) in frames.iter().enumerate() {
            for (j, amps) in basis_amps.iter_mut().enumerate() {
                let w = f[j].conj();
                for c in 0..d {
                    amps[2 * c + spin] += w * u.get(a, c);
                }
            }
        }
    }
    let basis: Vec<StateVector> = basis_amps
        .into_iter()
        .map(StateVector::new)
        .collect::<Result<_>>()?;
    let coeffs: Vec<Complex> = real_coords(b);
    let initial = StateVector::combination(&coeffs, &basis)?;

    let mut checks = Report::new("basis construction");
    let ortho = ProjectiveMeasurement::new(basis.clone())?.orthonormality_residual();
    checks.push(Check::new("constructed basis orthonormal", ortho, tol.pipeline));
    let amps: Vec<Complex> = basis.iter().map(|phi| phi.inner(&initial)).collect::<Result<_>>()?;
    let coeff_err = amps
        .iter()
        .zip(b)
        .map(|(a, x)| (a - x).norm())
        .fold(0.0, f64::max);
    checks.push(Check::new("⟨φ_j|ψ⟩ = b_j", coeff_err, tol.pipeline));
    let mut worst_action = 0.0_f64;
    for (l, axis) in axes.iter().enumerate() {
        let lhs = spin_apply(&initial, axis);
        let rhs = StateVector::combination(&real_coords(&images[l]), &basis)?;
        let r = lhs.max_abs_diff(&rhs)?;
        worst_action = worst_action.max(r);
        checks.push(Check::new(
            format!("(1⊗σ·n{})ψ = Σ ε b φ", l + 1),
            r,
            tol.pipeline,
        ));
    }
    if ortho > tol.pipeline {
        return Err(Error::Construction(format!(
            "constructed basis is not orthonormal ({ortho:.3e})"
        )));
    }
    if worst_action > tol.pipeline {
        return Err(Error::ConstraintResidual {
            constraint: "spin action on ψ after the eigenspace rotations \
                         (the two rotations must agree)"
                .into(),
            residual: worst_action,
            tolerance: tol.pipeline,
        });
    }

    Ok(ConstructionResult {
        basis,
        coefficients: b.to_vec(),
        initial,
        axes: axes.to_vec(),
        table: table.clone(),
        params: params.clone(),
        spin_images: s,
        extension: extension
            .iter()
            .map(|c| c.iter().map(|x| x.re).collect())
            .collect(),
        checks,
    })
}

fn orthonormality(vs: &[Coords]) -> f64 {
    let mut worst = 0.0_f64;
    for (i, a) in vs.iter().enumerate() {
        for (j, b) in vs.iter().enumerate() {
            let target = if i == j { ONE } else { ZERO };
            worst = worst.max((cinner(a, b) - target).norm());
        }
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gell_mann_count_and_properties() {
        for d in 2..=4 {
            let g = gell_mann(d);
            assert_eq!(g.len(), d * d - 1);
            for m in &g {
                assert!(m.is_hermitian(1e-15));
                let trace: Complex = (0..d).map(|i| m.get(i, i)).sum();
                assert!(trace.norm() < 1e-15);
                let sq = (m * m).entries().iter().step_by(d + 1).map(|c| c.re).sum::<f64>();
                assert!((sq - 2.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn gell_mann_matches_standard_su3() {
        let g = gell_mann(3);
        assert_eq!(g[1].get(0, 1), -I);
        assert_eq!(g[2].get(1, 1), Complex::new(-1.0, 0.0));
        assert_eq!(g[4].get(2, 0), I);
        assert!((g[7].get(2, 2).re + 2.0 / 3f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn zero_parameters_give_identity() {
        let u = eigenspace_unitary(3, &[], 0.0).unwrap();
        assert!(u.approx_eq(&Operator::identity(3), 1e-15));
        assert!(eigenspace_unitary(3, &[0.1; 3], 0.0).is_err());
    }
}
