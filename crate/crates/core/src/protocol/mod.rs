//! The retrodiction game.
//!
//! Bob measures the spin of his qubit along one of `m` axes, Alice measures
//! the returned pair in her basis `{φ_j}` and reads Bob's result for any
//! axis from her table. Sampling helpers take an explicit RNG; each call
//! consumes exactly one `f64` draw.

mod file;
mod measurement;
mod table;
mod trials;
mod verify;

pub use file::{emit_protocol, parse_protocol};
pub use measurement::ProjectiveMeasurement;
pub use table::LookupTable;
pub use trials::{
    enumerate_outcomes, run_trials, AxisChoice, AxisStats, CellComparison, OutcomeDistribution,
    TrialConfig, TrialRecord, TrialStats, DEFAULT_SEED,
};
pub use verify::{verify_protocol, VerificationReport, Violation};

pub(crate) use table::parse_sign;

use rand::Rng;

use crate::error::{Error, Result};
use crate::state::{project_spin, Complex, Sign, StateVector, Tolerances, UnitAxis};

/// Initial state, Bob's axes, Alice's measurement and her table.
#[derive(Clone, Debug, PartialEq)]
pub struct RetrodictionProtocol {
    pub name: String,
    initial: StateVector,
    axes: Vec<UnitAxis>,
    measurement: ProjectiveMeasurement,
    table: LookupTable,
}

impl RetrodictionProtocol {
    /// Checks dimensions and that the initial state is normalized.
    pub fn new(
        name: impl Into<String>,
        initial: StateVector,
        axes: Vec<UnitAxis>,
        measurement: ProjectiveMeasurement,
        table: LookupTable,
    ) -> Result<Self> {
        if table.m() != axes.len() {
            return Err(Error::MalformedTable(format!(
                "table has {} axis columns but {} axes are given",
                table.m(),
                axes.len()
            )));
        }
        if table.k() != measurement.len() {
            return Err(Error::MalformedTable(format!(
                "table has {} rows but the basis has {} vectors",
                table.k(),
                measurement.len()
            )));
        }
        if initial.dim() != measurement.dim() {
            return Err(Error::DimensionMismatch {
                expected: measurement.dim(),
                found: initial.dim(),
            });
        }
        let n2 = initial.norm_sqr();
        if (n2 - 1.0).abs() > Tolerances::default().exact {
            return Err(Error::NotNormalized(n2));
        }
        Ok(RetrodictionProtocol {
            name: name.into(),
            initial,
            axes,
            measurement,
            table,
        })
    }

    pub fn initial(&self) -> &StateVector {
        &self.initial
    }

    pub fn axes(&self) -> &[UnitAxis] {
        &self.axes
    }

    pub fn measurement(&self) -> &ProjectiveMeasurement {
        &self.measurement
    }

    pub fn basis(&self) -> &[StateVector] {
        self.measurement.basis()
    }

    pub fn table(&self) -> &LookupTable {
        &self.table
    }

    pub fn m(&self) -> usize {
        self.axes.len()
    }

    pub fn k(&self) -> usize {
        self.table.k()
    }

    pub fn dim_a(&self) -> usize {
        self.initial.dim_a()
    }

    /// Same protocol with a different table of matching shape.
    pub fn with_table(&self, table: LookupTable) -> Result<Self> {
        Self::new(
            self.name.clone(),
            self.initial.clone(),
            self.axes.clone(),
            self.measurement.clone(),
            table,
        )
    }

    /// `b_j = ⟨φ_j|ψ⟩`.
    pub fn coefficients(&self) -> Vec<Complex> {
        self.measurement
            .amplitudes(&self.initial)
            .expect("dimensions checked at construction")
    }

    pub fn axis(&self, l: usize) -> Result<&UnitAxis> {
        self.axes.get(l).ok_or(Error::IndexOutOfRange {
            what: "axis",
            index: l,
            limit: self.axes.len(),
        })
    }

    /// Unnormalized `φ_η(n_l)`.
    pub fn post_state(&self, l: usize, eta: Sign) -> Result<StateVector> {
        Ok(project_spin(&self.initial, self.axis(l)?, eta))
    }
}

/// Bob's measurement along axis `l`: η = +1 iff the draw is below
/// `‖P_+ψ‖²`. Returns η and the normalized post-measurement state.
pub fn bob_measure<R: Rng + ?Sized>(
    protocol: &RetrodictionProtocol,
    l: usize,
    rng: &mut R,
) -> Result<(Sign, StateVector)> {
    let up = protocol.post_state(l, Sign::Up)?;
    let p_up = up.norm_sqr();
    let u: f64 = rng.gen();
    if u < p_up {
        Ok((Sign::Up, up.normalized()))
    } else {
        Ok((Sign::Down, protocol.post_state(l, Sign::Down)?.normalized()))
    }
}

/// Alice's measurement: inverse-CDF sampling of `|⟨φ_j|state⟩|²` with one draw.
pub fn alice_measure<R: Rng + ?Sized>(
    state: &StateVector,
    meas: &ProjectiveMeasurement,
    rng: &mut R,
) -> Result<usize> {
    let tol = Tolerances::default().pipeline;
    let residual = meas.span_residual(state)?;
    if residual > tol {
        return Err(Error::BasisIncomplete(residual));
    }
    let probs = meas.probabilities(state)?;
    let u: f64 = rng.gen::<f64>() * probs.iter().sum::<f64>();
    let mut acc = 0.0;
    let mut last = 0;
    for (j, p) in probs.iter().enumerate() {
        if *p > 0.0 {
            last = j;
            acc += p;
            if u < acc {
                return Ok(j);
            }
        }
    }
    Ok(last)
}

/// Table read off from the state and basis: ε_j^(l) is the only η with
/// `|⟨φ_j|φ_η(n_l)⟩|² > floor`. Cells where neither outcome is reachable
/// default to ↑; cells where both are reachable make the basis unusable.
pub fn implied_table(
    initial: &StateVector,
    axes: &[UnitAxis],
    measurement: &ProjectiveMeasurement,
    floor: f64,
) -> Result<LookupTable> {
    let mut rows = vec![vec![Sign::Up; axes.len()]; measurement.len()];
    let mut ambiguous = Vec::new();
    for (l, n) in axes.iter().enumerate() {
        let p_up = measurement.probabilities(&project_spin(initial, n, Sign::Up))?;
        let p_down = measurement.probabilities(&project_spin(initial, n, Sign::Down))?;
        for j in 0..measurement.len() {
            match (p_up[j] > floor, p_down[j] > floor) {
                (true, true) => ambiguous.push(format!("λ{} on n{}", j + 1, l + 1)),
                (false, true) => rows[j][l] = Sign::Down,
                _ => {}
            }
        }
    }
    if !ambiguous.is_empty() {
        return Err(Error::Infeasible(format!(
            "both outcomes reachable for {}",
            ambiguous.join(", ")
        )));
    }
    LookupTable::new(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::FRAC_1_SQRT_2 as H;

    fn eigen_protocol() -> RetrodictionProtocol {
        RetrodictionProtocol::new(
            "eigen",
            StateVector::up(),
            vec![UnitAxis::Z],
            ProjectiveMeasurement::new(vec![StateVector::up(), StateVector::down()]).unwrap(),
            LookupTable::from_strings(&["+", "-"]).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn eigenstate_always_up() {
        let p = eigen_protocol();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..100 {
            let (eta, post) = bob_measure(&p, 0, &mut rng).unwrap();
            assert_eq!(eta, Sign::Up);
            assert!(post.approx_eq(&StateVector::up(), 1e-12));
        }
        assert!(matches!(
            bob_measure(&p, 1, &mut rng),
            Err(Error::IndexOutOfRange { .. })
        ));
    }

    #[test]
    fn alice_sees_basis_vector() {
        let m = ProjectiveMeasurement::new(vec![StateVector::up(), StateVector::down()]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..50 {
            assert_eq!(alice_measure(&StateVector::down(), &m, &mut rng).unwrap(), 1);
        }
    }

    #[test]
    fn outside_span_is_an_error() {
        let m = ProjectiveMeasurement::new(vec![
            StateVector::ket("00").unwrap(),
            StateVector::ket("01").unwrap(),
        ])
        .unwrap();
        let s = StateVector::from_real(&[H, 0.0, H, 0.0]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let err = alice_measure(&s, &m, &mut rng).unwrap_err();
        assert!(err.to_string().contains("basis incomplete for state"));
    }

    #[test]
    fn shape_mismatch_rejected() {
        let err = RetrodictionProtocol::new(
            "bad",
            StateVector::up(),
            vec![UnitAxis::Z, UnitAxis::X],
            ProjectiveMeasurement::new(vec![StateVector::up(), StateVector::down()]).unwrap(),
            LookupTable::from_strings(&["+", "-"]).unwrap(),
        );
        assert!(matches!(err, Err(Error::MalformedTable(_))));
    }
}
