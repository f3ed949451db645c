//! Dimension counting for the post-measurement states `P_η(n) ψ`.
//!
//! Alice's basis must contain, for each of Bob's outcomes, vectors that
//! together reproduce `P_η(n) ψ`, and every basis vector carries a single
//! sign per axis. For x, y, z on one Bell pair the six projected states span
//! only four dimensions, and each basis vector can sit in at most one of the
//! eight sign triples, which bounds the number of outcomes from below.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::rank;
use crate::state::{project_spin, Sign, StateVector, UnitAxis};

/// `P_η(n_l) ψ` in the order `(n_1,+), (n_1,-), (n_2,+), ...`.
pub fn postmeasurement_states(psi: &StateVector, axes: &[UnitAxis]) -> Vec<StateVector> {
    axes.iter()
        .flat_map(|n| Sign::BOTH.map(|eta| project_spin(psi, n, eta)))
        .collect()
}

pub fn postmeasurement_rank(psi: &StateVector, axes: &[UnitAxis], tol: f64) -> Result<usize> {
    if !psi.is_normalized(1e-10) {
        return Err(Error::NotNormalized(psi.norm_sqr()));
    }
    rank(&postmeasurement_states(psi, axes), tol)
}

/// Linear relations between the x, y, z post-measurement states.
///
/// In the projection normalization `P_-(y)ψ = P_+(z)ψ + P_-(z)ψ - P_+(y)ψ`,
/// and likewise for x, since both sides equal `ψ - P_+(y)ψ`. With the x and y
/// states scaled by √2 (so each has the norm of a single amplitude pair) the
/// same relation reads `√2·P_-(y)ψ = √2·(P_+(z)ψ + P_-(z)ψ) - √2·P_+(y)ψ`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LinearRelations {
    pub projection_x: f64,
    pub projection_y: f64,
    pub scaled_x: f64,
    pub scaled_y: f64,
}

impl LinearRelations {
    pub fn max(&self) -> f64 {
        [self.projection_x, self.projection_y, self.scaled_x, self.scaled_y]
            .into_iter()
            .fold(0.0, f64::max)
    }
}

pub fn linear_relations(psi: &StateVector) -> Result<LinearRelations> {
    let p = |n: &UnitAxis, eta| project_spin(psi, n, eta);
    let (zp, zm) = (p(&UnitAxis::Z, Sign::Up), p(&UnitAxis::Z, Sign::Down));
    let z_sum = &zp + &zm;
    let residual = |n: &UnitAxis, scale: f64| -> Result<f64> {
        let plus = p(n, Sign::Up).scale_real(scale);
        let minus = p(n, Sign::Down).scale_real(scale);
        let rhs = &z_sum.scale_real(scale) - &plus;
        minus.max_abs_diff(&rhs)
    };
    let s2 = 2f64.sqrt();
    Ok(LinearRelations {
        projection_x: residual(&UnitAxis::X, 1.0)?,
        projection_y: residual(&UnitAxis::Y, 1.0)?,
        scaled_x: residual(&UnitAxis::X, s2)?,
        scaled_y: residual(&UnitAxis::Y, s2)?,
    })
}

/// Witness for the lower bound on the number of Alice outcomes.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LowerBound {
    /// Dimension spanned by the six post-measurement states.
    pub rank: usize,
    /// For each sign triple `(η_1, η_2, η_3)`, the rank of the three states
    /// `P_{-η_l}(n_l) ψ` a basis vector carrying that triple must avoid.
    pub triple_ranks: Vec<([Sign; 3], usize)>,
    /// Each basis vector has one sign pattern and the states need `rank`
    /// independent directions, so at least this many outcomes are needed.
    pub min_outcomes: usize,
}

/// Requires three axes and post-measurement states spanning exactly four
/// dimensions.
pub fn min_outcomes_lower_bound(psi: &StateVector, axes: &[UnitAxis], tol: f64) -> Result<LowerBound> {
    if axes.len() != 3 {
        return Err(Error::Precondition(format!(
            "the lower bound is stated for three axes, got {}",
            axes.len()
        )));
    }
    let r = postmeasurement_rank(psi, axes, tol)?;
    if r != 4 {
        return Err(Error::Precondition(format!(
            "post-measurement states span dimension {r}, the bound needs 4"
        )));
    }
    let states = postmeasurement_states(psi, axes);
    let mut triple_ranks = Vec::with_capacity(8);
    for bits in 0..8usize {
        let triple: [Sign; 3] = std::array::from_fn(|l| Sign::BOTH[(bits >> (2 - l)) & 1]);
        let avoided: Vec<StateVector> = (0..3)
            .map(|l| states[2 * l + triple[l].flipped().index()].clone())
            .collect();
        triple_ranks.push((triple, rank(&avoided, tol)?));
    }
    Ok(LowerBound {
        rank: r,
        triple_ranks,
        min_outcomes: r,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bell() -> StateVector {
        StateVector::from_real(&[0.5f64.sqrt(), 0.0, 0.0, 0.5f64.sqrt()]).unwrap()
    }

    #[test]
    fn bell_pair_rank_four() {
        let axes = [UnitAxis::X, UnitAxis::Y, UnitAxis::Z];
        assert_eq!(postmeasurement_rank(&bell(), &axes, 1e-10).unwrap(), 4);
        let lb = min_outcomes_lower_bound(&bell(), &axes, 1e-10).unwrap();
        assert_eq!(lb.min_outcomes, 4);
        assert!(lb.triple_ranks.iter().all(|(_, r)| *r == 3));
    }

    #[test]
    fn product_state_fails_precondition() {
        let psi = StateVector::ket("00").unwrap();
        let axes = [UnitAxis::X, UnitAxis::Y, UnitAxis::Z];
        assert_eq!(postmeasurement_rank(&psi, &axes, 1e-10).unwrap(), 2);
        assert!(matches!(
            min_outcomes_lower_bound(&psi, &axes, 1e-10),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn relations_hold() {
        assert!(linear_relations(&bell()).unwrap().max() < 1e-15);
    }
}
