//! Spin-measurement retrodiction.
//!
//! Alice prepares an entangled state, Bob measures the spin of his qubit along
//! one of a known set of axes without telling her which, and Alice then
//! performs a single projective measurement from which she can name Bob's
//! result for *every* axis he might later admit to. This crate builds,
//! checks and simulates such protocols:
//!
//! * [`state`]: dense complex states and operators on `H_A ⊗ H_B`, spin
//!   operators along arbitrary axes and the projection onto spin outcomes.
//! * [`protocol`]: look-up tables, Alice's projective measurement, exhaustive
//!   verification, exact outcome enumeration and seeded Monte Carlo trials.
//! * [`construction`]: the sign-table / coefficient / axis-geometry constraint
//!   system, basis construction by inverting the spin action, the known
//!   protocols as factories and an audit of their printed amplitudes.
//! * [`network`]: a small gate set, circuits, a line-oriented circuit format
//!   and verifiers for preparation and measurement networks.
//!
//! Index convention: a state on `H_A ⊗ H_B` stores amplitude `(a, s)` at
//! `2 * a + s`, with `s = 0` for spin up along z and `s = 1` for spin down.
//! Bob's qubit is always the last (fastest varying) factor.

pub mod construction;
pub mod error;
pub mod linalg;
pub mod network;
pub mod protocol;
pub mod report;
pub mod state;
mod textfmt;

pub use error::{Error, Result};
pub use state::{Complex, Operator, Sign, StateVector, Tolerances, UnitAxis};
