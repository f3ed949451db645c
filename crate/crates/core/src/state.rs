//! Dense states and operators on small Hilbert spaces `H_A ⊗ H_B`.
//!
//! Everything here is tiny (dimension at most 8), so states are plain
//! `Vec<Complex>` and operators are row-major square matrices. Bob's qubit
//! is the last tensor factor: amplitude `(a, s)` lives at index `2 * a + s`
//! with `s = 0` for ↑_z and `s = 1` for ↓_z.

use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Complex amplitude.
pub type Complex = num_complex::Complex64;

pub const ZERO: Complex = Complex::new(0.0, 0.0);
pub const ONE: Complex = Complex::new(1.0, 0.0);
pub const I: Complex = Complex::new(0.0, 1.0);

/// Numerical tolerances used by the checks in this crate.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Identities that hold exactly up to rounding (Pauli algebra, norms).
    pub exact: f64,
    /// Composite pipelines (construction, verification, circuit mapping).
    pub pipeline: f64,
    /// Probabilities above this count as "reachable" outcomes.
    pub probability_floor: f64,
    /// Probabilities between this and `probability_floor` are warnings.
    pub warning_floor: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            exact: 1e-12,
            pipeline: 1e-10,
            probability_floor: 1e-10,
            warning_floor: 1e-12,
        }
    }
}

/// `e^{iθ}`, with the components snapped to exact zero when they are below
/// rounding noise so that multiples of π/2 give exact ±1, ±i.
pub fn cis(theta: f64) -> Complex {
    let snap = |v: f64| if v.abs() < 1e-15 { 0.0 } else { v };
    Complex::new(snap(theta.cos()), snap(theta.sin()))
}

/// Outcome of a spin measurement, η = ±1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Sign {
    Up,
    Down,
}

impl Sign {
    pub const BOTH: [Sign; 2] = [Sign::Up, Sign::Down];

    pub fn value(self) -> f64 {
        match self {
            Sign::Up => 1.0,
            Sign::Down => -1.0,
        }
    }

    pub fn as_i8(self) -> i8 {
        match self {
            Sign::Up => 1,
            Sign::Down => -1,
        }
    }

    pub fn from_i8(v: i8) -> Option<Sign> {
        match v {
            1 => Some(Sign::Up),
            -1 => Some(Sign::Down),
            _ => None,
        }
    }

    pub fn flipped(self) -> Sign {
        match self {
            Sign::Up => Sign::Down,
            Sign::Down => Sign::Up,
        }
    }

    /// Index used for `[up, down]` arrays.
    pub fn index(self) -> usize {
        match self {
            Sign::Up => 0,
            Sign::Down => 1,
        }
    }

    pub fn arrow(self) -> char {
        match self {
            Sign::Up => '↑',
            Sign::Down => '↓',
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Up => "+",
            Sign::Down => "-",
        })
    }
}

/// Kronecker product in the crate's lexicographic index convention.
pub trait Kronecker {
    fn tensor(&self, other: &Self) -> Self;
}

pub fn tensor<T: Kronecker>(a: &T, b: &T) -> T {
    a.tensor(b)
}

// ---------------------------------------------------------------------------
// UnitAxis
// ---------------------------------------------------------------------------

/// Direction along which Bob may measure.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct UnitAxis {
    x: f64,
    y: f64,
    z: f64,
}

impl UnitAxis {
    pub const X: UnitAxis = UnitAxis { x: 1.0, y: 0.0, z: 0.0 };
    pub const Y: UnitAxis = UnitAxis { x: 0.0, y: 1.0, z: 0.0 };
    pub const Z: UnitAxis = UnitAxis { x: 0.0, y: 0.0, z: 1.0 };

    /// Accepts `(x, y, z)` only if it has unit length within `1e-12`.
    pub fn new(x: f64, y: f64, z: f64) -> Result<Self> {
        Self::with_tolerance(x, y, z, Tolerances::default().exact)
    }

    pub fn with_tolerance(x: f64, y: f64, z: f64, tol: f64) -> Result<Self> {
        let n2 = x * x + y * y + z * z;
        if !n2.is_finite() || (n2 - 1.0).abs() > tol {
            return Err(Error::NonUnitAxis(x, y, z));
        }
        Ok(UnitAxis { x, y, z })
    }

    /// Rescales a non-zero vector to unit length.
    pub fn normalized(v: [f64; 3]) -> Result<Self> {
        let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        if !n.is_finite() || n < 1e-300 {
            return Err(Error::NonUnitAxis(v[0], v[1], v[2]));
        }
        Ok(UnitAxis {
            x: v[0] / n,
            y: v[1] / n,
            z: v[2] / n,
        })
    }

    pub fn components(&self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }

    pub fn dot(&self, other: &UnitAxis) -> f64 {
        self.x * other.x + self.y * other.y + self.z * other.z
    }

    pub fn cross(&self, other: &UnitAxis) -> [f64; 3] {
        [
            self.y * other.z - self.z * other.y,
            self.z * other.x - self.x * other.z,
            self.x * other.y - self.y * other.x,
        ]
    }
}

// ---------------------------------------------------------------------------
// StateVector
// ---------------------------------------------------------------------------

/// Pure (possibly unnormalized) state on `H_A ⊗ H_B` with `dim_B = 2`.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    amps: Vec<Complex>,
}

impl StateVector {
    /// Amplitudes in lexicographic `(A, B)` order; the length must be even.
    pub fn new(amps: Vec<Complex>) -> Result<Self> {
        if amps.is_empty() || !amps.len().is_multiple_of(2) {
            return Err(Error::OddDimension(amps.len()));
        }
        Ok(StateVector { amps })
    }

    /// Builds from `(re, im)` pairs.
    pub fn from_pairs(pairs: &[(f64, f64)]) -> Result<Self> {
        Self::new(pairs.iter().map(|&(re, im)| Complex::new(re, im)).collect())
    }

    pub fn from_real(values: &[f64]) -> Result<Self> {
        Self::new(values.iter().map(|&v| Complex::new(v, 0.0)).collect())
    }

    /// Computational basis state `index` in dimension `dim`.
    pub fn basis(dim: usize, index: usize) -> Result<Self> {
        if index >= dim {
            return Err(Error::IndexOutOfRange {
                what: "basis",
                index,
                limit: dim,
            });
        }
        let mut amps = vec![ZERO; dim];
        amps[index] = ONE;
        Self::new(amps)
    }

    /// `|bits⟩` for a string such as `"01"` or `"↑↓"`; the last symbol is Bob.
    pub fn ket(bits: &str) -> Result<Self> {
        let mut index = 0usize;
        let mut n = 0u32;
        for ch in bits.chars() {
            let bit = match ch {
                '0' | '↑' | 'u' => 0,
                '1' | '↓' | 'd' => 1,
                _ => {
                    return Err(Error::Parse {
                        line: 0,
                        message: format!("bad ket symbol {ch:?}"),
                    })
                }
            };
            index = index * 2 + bit;
            n += 1;
        }
        Self::basis(1usize << n, index)
    }

    /// Single qubit `|↑⟩_z`.
    pub fn up() -> Self {
        StateVector { amps: vec![ONE, ZERO] }
    }

    /// Single qubit `|↓⟩_z`.
    pub fn down() -> Self {
        StateVector { amps: vec![ZERO, ONE] }
    }

    pub fn zeros(dim: usize) -> Result<Self> {
        Self::new(vec![ZERO; dim])
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn dim_a(&self) -> usize {
        self.amps.len() / 2
    }

    pub fn amplitudes(&self) -> &[Complex] {
        &self.amps
    }

    pub fn amplitude(&self, index: usize) -> Complex {
        self.amps[index]
    }

    pub fn into_amplitudes(self) -> Vec<Complex> {
        self.amps
    }

    /// `⟨self|other⟩`, conjugate-linear in `self`.
    pub fn inner(&self, other: &StateVector) -> Result<Complex> {
        self.check_dim(other)?;
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn is_normalized(&self, tol: f64) -> bool {
        (self.norm_sqr() - 1.0).abs() <= tol
    }

    /// Unit vector along `self`; a zero vector is returned unchanged.
    pub fn normalized(&self) -> StateVector {
        let n = self.norm();
        if n == 0.0 {
            return self.clone();
        }
        self.scale(Complex::new(1.0 / n, 0.0))
    }

    pub fn scale(&self, c: Complex) -> StateVector {
        StateVector {
            amps: self.amps.iter().map(|a| a * c).collect(),
        }
    }

    pub fn scale_real(&self, c: f64) -> StateVector {
        self.scale(Complex::new(c, 0.0))
    }

    /// `self + c * other`.
    pub fn axpy(&self, c: Complex, other: &StateVector) -> Result<StateVector> {
        self.check_dim(other)?;
        Ok(StateVector {
            amps: self
                .amps
                .iter()
                .zip(&other.amps)
                .map(|(a, b)| a + c * b)
                .collect(),
        })
    }

    /// Linear combination `Σ c_i v_i`.
    pub fn combination(coeffs: &[Complex], vectors: &[StateVector]) -> Result<StateVector> {
        let first = vectors.first().ok_or(Error::DimensionMismatch {
            expected: 1,
            found: 0,
        })?;
        if coeffs.len() != vectors.len() {
            return Err(Error::DimensionMismatch {
                expected: vectors.len(),
                found: coeffs.len(),
            });
        }
        let mut acc = StateVector::zeros(first.dim())?;
        for (c, v) in coeffs.iter().zip(vectors) {
            acc = acc.axpy(*c, v)?;
        }
        Ok(acc)
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &StateVector) -> Result<f64> {
        self.check_dim(other)?;
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }

    /// `|⟨a|b⟩| / (‖a‖‖b‖)`; 1 means equal up to a global phase and scale.
    pub fn overlap_modulus(&self, other: &StateVector) -> Result<f64> {
        let ip = self.inner(other)?;
        let denom = self.norm() * other.norm();
        if denom == 0.0 {
            return Ok(0.0);
        }
        Ok(ip.norm() / denom)
    }

    /// Phase `e^{iθ}` maximizing the overlap, i.e. the `c` minimizing `‖self - c·other‖`
    /// over unit-modulus `c`.
    pub fn relative_phase(&self, other: &StateVector) -> Result<Complex> {
        let ip = other.inner(self)?;
        if ip.norm() == 0.0 {
            return Ok(ONE);
        }
        Ok(ip / ip.norm())
    }

    /// Entrywise distance after aligning the global phase of `other` to `self`.
    pub fn max_abs_diff_up_to_phase(&self, other: &StateVector) -> Result<f64> {
        let phase = self.relative_phase(other)?;
        self.max_abs_diff(&other.scale(phase))
    }

    /// Exact equality within `tol`, entrywise.
    pub fn approx_eq(&self, other: &StateVector, tol: f64) -> bool {
        self.max_abs_diff(other).map(|d| d <= tol).unwrap_or(false)
    }

    /// Equality up to a global phase, entrywise within `tol`.
    pub fn approx_eq_up_to_phase(&self, other: &StateVector, tol: f64) -> bool {
        self.max_abs_diff_up_to_phase(other)
            .map(|d| d <= tol)
            .unwrap_or(false)
    }

    fn check_dim(&self, other: &StateVector) -> Result<()> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: other.dim(),
            });
        }
        Ok(())
    }
}

impl Kronecker for StateVector {
    fn tensor(&self, other: &StateVector) -> StateVector {
        let mut amps = Vec::with_capacity(self.dim() * other.dim());
        for a in &self.amps {
            for b in &other.amps {
                amps.push(a * b);
            }
        }
        StateVector { amps }
    }
}

impl fmt::Display for StateVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, a) in self.amps.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{:+.6}{:+.6}i", a.re, a.im)?;
        }
        write!(f, "]")
    }
}

impl Add for &StateVector {
    type Output = StateVector;
    fn add(self, rhs: &StateVector) -> StateVector {
        self.axpy(ONE, rhs).expect("dimension mismatch in state addition")
    }
}

impl Sub for &StateVector {
    type Output = StateVector;
    fn sub(self, rhs: &StateVector) -> StateVector {
        self.axpy(-ONE, rhs)
            .expect("dimension mismatch in state subtraction")
    }
}

impl Neg for &StateVector {
    type Output = StateVector;
    fn neg(self) -> StateVector {
        self.scale(-ONE)
    }
}

// ---------------------------------------------------------------------------
// Operator
// ---------------------------------------------------------------------------

/// Square complex matrix, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct Operator {
    dim: usize,
    entries: Vec<Complex>,
}

impl Operator {
    pub fn from_rows(rows: Vec<Vec<Complex>>) -> Result<Self> {
        let dim = rows.len();
        let mut entries = Vec::with_capacity(dim * dim);
        for row in rows {
            if row.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: row.len(),
                });
            }
            entries.extend(row);
        }
        if dim == 0 {
            return Err(Error::DimensionMismatch {
                expected: 1,
                found: 0,
            });
        }
        Ok(Operator { dim, entries })
    }

    pub fn from_fn(dim: usize, f: impl Fn(usize, usize) -> Complex) -> Self {
        let mut entries = Vec::with_capacity(dim * dim);
        for r in 0..dim {
            for c in 0..dim {
                entries.push(f(r, c));
            }
        }
        Operator { dim, entries }
    }

    pub fn identity(dim: usize) -> Self {
        Self::from_fn(dim, |r, c| if r == c { ONE } else { ZERO })
    }

    pub fn zeros(dim: usize) -> Self {
        Self::from_fn(dim, |_, _| ZERO)
    }

    pub fn diagonal(values: &[Complex]) -> Self {
        Self::from_fn(values.len(), |r, c| if r == c { values[r] } else { ZERO })
    }

    /// `|a⟩⟨b|`.
    pub fn outer(a: &StateVector, b: &StateVector) -> Self {
        let (va, vb) = (a.amplitudes(), b.amplitudes());
        Self::from_fn(va.len(), |r, c| va[r] * vb[c].conj())
    }

    pub fn pauli_x() -> Self {
        Self::from_fn(2, |r, c| if r != c { ONE } else { ZERO })
    }

    pub fn pauli_y() -> Self {
        Self::from_fn(2, |r, c| match (r, c) {
            (0, 1) => -I,
            (1, 0) => I,
            _ => ZERO,
        })
    }

    pub fn pauli_z() -> Self {
        Self::diagonal(&[ONE, -ONE])
    }

    pub fn hadamard() -> Self {
        let h = Complex::new(FRAC_1_SQRT_2, 0.0);
        Self::from_fn(2, |r, c| if r == 1 && c == 1 { -h } else { h })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, row: usize, col: usize) -> Complex {
        self.entries[row * self.dim + col]
    }

    pub fn entries(&self) -> &[Complex] {
        &self.entries
    }

    pub fn adjoint(&self) -> Operator {
        Self::from_fn(self.dim, |r, c| self.get(c, r).conj())
    }

    pub fn scale(&self, c: Complex) -> Operator {
        Operator {
            dim: self.dim,
            entries: self.entries.iter().map(|e| e * c).collect(),
        }
    }

    pub fn try_add(&self, other: &Operator) -> Result<Operator> {
        self.check_dim(other)?;
        Ok(Operator {
            dim: self.dim,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn try_sub(&self, other: &Operator) -> Result<Operator> {
        self.try_add(&other.scale(-ONE))
    }

    /// Matrix product `self · other`.
    pub fn try_mul(&self, other: &Operator) -> Result<Operator> {
        self.check_dim(other)?;
        let n = self.dim;
        let mut entries = vec![ZERO; n * n];
        for r in 0..n {
            for k in 0..n {
                let a = self.entries[r * n + k];
                if a == ZERO {
                    continue;
                }
                for c in 0..n {
                    entries[r * n + c] += a * other.entries[k * n + c];
                }
            }
        }
        Ok(Operator { dim: n, entries })
    }

    /// `[self, other] = self·other - other·self`.
    pub fn commutator(&self, other: &Operator) -> Result<Operator> {
        self.try_mul(other)?.try_sub(&other.try_mul(self)?)
    }

    pub fn apply(&self, state: &StateVector) -> Result<StateVector> {
        if state.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: state.dim(),
            });
        }
        let v = state.amplitudes();
        let amps = (0..self.dim)
            .map(|r| (0..self.dim).map(|c| self.get(r, c) * v[c]).sum())
            .collect();
        StateVector::new(amps)
    }

    pub fn max_abs_diff(&self, other: &Operator) -> Result<f64> {
        self.check_dim(other)?;
        Ok(self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }

    pub fn approx_eq(&self, other: &Operator, tol: f64) -> bool {
        self.max_abs_diff(other).map(|d| d <= tol).unwrap_or(false)
    }

    /// `max |M - M†|`.
    pub fn hermiticity_residual(&self) -> f64 {
        self.max_abs_diff(&self.adjoint()).unwrap_or(f64::INFINITY)
    }

    /// `max |M†M - 1|`.
    pub fn unitarity_residual(&self) -> f64 {
        self.adjoint()
            .try_mul(self)
            .and_then(|p| p.max_abs_diff(&Operator::identity(self.dim)))
            .unwrap_or(f64::INFINITY)
    }

    /// `max(|M² - M|, |M - M†|)`.
    pub fn projector_residual(&self) -> f64 {
        let idem = self
            .try_mul(self)
            .and_then(|p| p.max_abs_diff(self))
            .unwrap_or(f64::INFINITY);
        idem.max(self.hermiticity_residual())
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermiticity_residual() <= tol
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        self.unitarity_residual() <= tol
    }

    pub fn is_projector(&self, tol: f64) -> bool {
        self.projector_residual() <= tol
    }

    fn check_dim(&self, other: &Operator) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: other.dim,
            });
        }
        Ok(())
    }
}

impl Kronecker for Operator {
    fn tensor(&self, other: &Operator) -> Operator {
        let (n, m) = (self.dim, other.dim);
        Operator::from_fn(n * m, |r, c| {
            self.get(r / m, c / m) * other.get(r % m, c % m)
        })
    }
}

impl Mul for &Operator {
    type Output = Operator;
    fn mul(self, rhs: &Operator) -> Operator {
        self.try_mul(rhs).expect("dimension mismatch in operator product")
    }
}

impl Mul<&StateVector> for &Operator {
    type Output = StateVector;
    fn mul(self, rhs: &StateVector) -> StateVector {
        self.apply(rhs).expect("dimension mismatch in operator application")
    }
}

impl fmt::Display for Operator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.dim {
            write!(f, "[")?;
            for c in 0..self.dim {
                let e = self.get(r, c);
                if c > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{:+.4}{:+.4}i", e.re, e.im)?;
            }
            writeln!(f, "]")?;
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// Spin operators
// ---------------------------------------------------------------------------

/// `σ·n = n_x σ_x + n_y σ_y + n_z σ_z`.
pub fn pauli_along(n: &UnitAxis) -> Operator {
    let [x, y, z] = n.components();
    Operator::from_rows(vec![
        vec![Complex::new(z, 0.0), Complex::new(x, -y)],
        vec![Complex::new(x, y), Complex::new(-z, 0.0)],
    ])
    .expect("2x2")
}

/// `Σ_k v_k σ_k` for an arbitrary real 3-vector.
pub fn pauli_vector(v: [f64; 3]) -> Operator {
    Operator::from_rows(vec![
        vec![Complex::new(v[2], 0.0), Complex::new(v[0], -v[1])],
        vec![Complex::new(v[0], v[1]), Complex::new(-v[2], 0.0)],
    ])
    .expect("2x2")
}

/// `1_A ⊗ op` for an operator on Bob's qubit.
pub fn lift_b(op: &Operator, dim_a: usize) -> Result<Operator> {
    if op.dim() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            found: op.dim(),
        });
    }
    if dim_a == 0 {
        return Err(Error::DimensionMismatch {
            expected: 1,
            found: 0,
        });
    }
    Ok(Operator::identity(dim_a).tensor(op))
}

/// `(1_A ⊗ σ·n)|ψ⟩`, without building the full operator.
pub fn spin_apply(state: &StateVector, n: &UnitAxis) -> StateVector {
    let s = pauli_along(n);
    let v = state.amplitudes();
    let mut out = Vec::with_capacity(v.len());
    for block in v.chunks_exact(2) {
        out.push(s.get(0, 0) * block[0] + s.get(0, 1) * block[1]);
        out.push(s.get(1, 0) * block[0] + s.get(1, 1) * block[1]);
    }
    StateVector::new(out).expect("even dimension preserved")
}

/// `½(1⊗1 + η 1⊗σ·n)|ψ⟩`, left unnormalized: its squared norm is the
/// probability of outcome η.
pub fn project_spin(state: &StateVector, n: &UnitAxis, eta: Sign) -> StateVector {
    let flipped = spin_apply(state, n);
    let half = Complex::new(0.5, 0.0);
    let amps = state
        .amplitudes()
        .iter()
        .zip(flipped.amplitudes())
        .map(|(a, b)| half * (a + eta.value() * b))
        .collect();
    StateVector::new(amps).expect("even dimension preserved")
}

// ---------------------------------------------------------------------------
// Basis conversion
// ---------------------------------------------------------------------------

/// Single-qubit measurement bases, each given in z-basis components.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SpinBasis {
    X,
    Y,
    Z,
}

impl SpinBasis {
    /// Columns are `|↑⟩_b`, `|↓⟩_b` in z components.
    pub fn change_matrix(self) -> Operator {
        let h = FRAC_1_SQRT_2;
        let c = |re: f64, im: f64| Complex::new(re, im);
        let rows = match self {
            SpinBasis::Z => vec![vec![ONE, ZERO], vec![ZERO, ONE]],
            SpinBasis::X => vec![vec![c(h, 0.0), c(h, 0.0)], vec![c(h, 0.0), c(-h, 0.0)]],
            SpinBasis::Y => vec![vec![c(h, 0.0), c(h, 0.0)], vec![c(0.0, h), c(0.0, -h)]],
        };
        Operator::from_rows(rows).expect("2x2")
    }

    pub fn axis(self) -> UnitAxis {
        match self {
            SpinBasis::X => UnitAxis::X,
            SpinBasis::Y => UnitAxis::Y,
            SpinBasis::Z => UnitAxis::Z,
        }
    }
}

/// Number of addressable qubits: the trailing power-of-two factors of `dim`.
pub fn qubit_count(dim: usize) -> usize {
    dim.trailing_zeros() as usize
}

/// Applies a 2x2 matrix to one qubit. Qubits are the trailing power-of-two
/// factors of the dimension, numbered from the most significant; Bob's qubit
/// is always the last one.
pub fn apply_single_qubit(state: &StateVector, qubit: usize, m: &Operator) -> Result<StateVector> {
    let dim = state.dim();
    let n = qubit_count(dim);
    if qubit >= n {
        return Err(Error::IndexOutOfRange {
            what: "qubit",
            index: qubit,
            limit: n,
        });
    }
    let stride = 1usize << (n - 1 - qubit);
    let v = state.amplitudes();
    let mut out = v.to_vec();
    for i in 0..dim {
        if i & stride == 0 {
            let (a, b) = (v[i], v[i | stride]);
            out[i] = m.get(0, 0) * a + m.get(0, 1) * b;
            out[i | stride] = m.get(1, 0) * a + m.get(1, 1) * b;
        }
    }
    StateVector::new(out)
}

/// Re-expresses the components of one qubit: the input holds components in
/// basis `from`, the output holds components of the same state in basis `to`.
pub fn basis_convert(
    state: &StateVector,
    qubit: usize,
    from: SpinBasis,
    to: SpinBasis,
) -> Result<StateVector> {
    let into_z = apply_single_qubit(state, qubit, &from.change_matrix())?;
    apply_single_qubit(&into_z, qubit, &to.change_matrix().adjoint())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::SQRT_2;

    const TOL: f64 = 1e-12;

    fn c(re: f64, im: f64) -> Complex {
        Complex::new(re, im)
    }

    #[test]
    fn tensor_of_basis_states() {
        let v = StateVector::up().tensor(&StateVector::up());
        assert_eq!(v.amplitudes(), &[ONE, ZERO, ZERO, ZERO]);
        let id = Operator::identity(2).tensor(&Operator::identity(2));
        assert_eq!(id, Operator::identity(4));
    }

    #[test]
    fn tensor_expands_superposition_first() {
        let plus = StateVector::from_real(&[1.0 / SQRT_2, 1.0 / SQRT_2]).unwrap();
        let v = plus.tensor(&StateVector::down());
        let h = 1.0 / SQRT_2;
        let expected = StateVector::from_real(&[0.0, h, 0.0, h]).unwrap();
        assert!(v.approx_eq(&expected, TOL));
    }

    #[test]
    fn inner_products_and_mismatch() {
        let (u, d) = (StateVector::up(), StateVector::down());
        assert_eq!(u.inner(&u).unwrap(), ONE);
        assert_eq!(u.inner(&d).unwrap(), ZERO);
        let big = StateVector::ket("00").unwrap();
        assert!(matches!(u.inner(&big), Err(Error::DimensionMismatch { .. })));
        let a = StateVector::from_pairs(&[(0.3, 0.1), (-0.2, 0.7)]).unwrap();
        let b = StateVector::from_pairs(&[(0.5, -0.4), (0.1, 0.2)]).unwrap();
        assert!((a.inner(&b).unwrap() - b.inner(&a).unwrap().conj()).norm() < TOL);
    }

    #[test]
    fn pauli_along_coordinate_axes() {
        assert_eq!(pauli_along(&UnitAxis::Z), Operator::pauli_z());
        assert_eq!(pauli_along(&UnitAxis::X), Operator::pauli_x());
        assert_eq!(pauli_along(&UnitAxis::Y), Operator::pauli_y());
    }

    #[test]
    fn pauli_product_x_then_y_is_i_sigma_z() {
        let p = &pauli_along(&UnitAxis::X) * &pauli_along(&UnitAxis::Y);
        assert!(p.approx_eq(&Operator::pauli_z().scale(I), TOL));
    }

    #[test]
    fn non_unit_axis_rejected() {
        assert!(matches!(
            UnitAxis::new(1.0, 1.0, 0.0),
            Err(Error::NonUnitAxis(..))
        ));
        assert!(UnitAxis::new(0.6, 0.8, 0.0).is_ok());
    }

    #[test]
    fn lift_b_examples() {
        assert_eq!(lift_b(&Operator::pauli_z(), 1).unwrap(), Operator::pauli_z());
        let h = 1.0 / SQRT_2;
        let bell = StateVector::from_real(&[h, 0.0, 0.0, h]).unwrap();
        let out = lift_b(&Operator::pauli_x(), 2).unwrap().apply(&bell).unwrap();
        let expected = StateVector::from_real(&[0.0, h, h, 0.0]).unwrap();
        assert!(out.approx_eq(&expected, TOL));
    }

    #[test]
    fn lifted_commutator() {
        for k in 1..=4 {
            let x = lift_b(&Operator::pauli_x(), k).unwrap();
            let y = lift_b(&Operator::pauli_y(), k).unwrap();
            let z = lift_b(&Operator::pauli_z(), k).unwrap();
            let comm = x.commutator(&y).unwrap();
            assert!(comm.approx_eq(&z.scale(c(0.0, 2.0)), TOL));
        }
    }

    #[test]
    fn project_eigenstate_unchanged() {
        let up = StateVector::up();
        let p = project_spin(&up, &UnitAxis::Z, Sign::Up);
        assert!(p.approx_eq(&up, TOL));
        assert!(project_spin(&up, &UnitAxis::Z, Sign::Down).norm_sqr() < TOL);
    }

    #[test]
    fn project_singlet_along_z() {
        // Bob is the second factor: η = +1 leaves |↓↑⟩, η = −1 leaves |↑↓⟩.
        let h = 1.0 / SQRT_2;
        let singlet = StateVector::from_real(&[0.0, h, -h, 0.0]).unwrap();
        let up = project_spin(&singlet, &UnitAxis::Z, Sign::Up);
        let down = project_spin(&singlet, &UnitAxis::Z, Sign::Down);
        assert!(up.approx_eq(&StateVector::from_real(&[0.0, 0.0, -h, 0.0]).unwrap(), TOL));
        assert!(down.approx_eq(&StateVector::from_real(&[0.0, h, 0.0, 0.0]).unwrap(), TOL));
        assert!((up.norm_sqr() - 0.5).abs() < TOL);
    }

    #[test]
    fn basic_transformations() {
        let h = 1.0 / SQRT_2;
        let up_x = basis_convert(&StateVector::up(), 0, SpinBasis::X, SpinBasis::Z).unwrap();
        assert!(up_x.approx_eq(&StateVector::from_real(&[h, h]).unwrap(), TOL));
        let down_x = basis_convert(&StateVector::down(), 0, SpinBasis::X, SpinBasis::Z).unwrap();
        assert!(down_x.approx_eq(&StateVector::from_real(&[h, -h]).unwrap(), TOL));
        let up_y = basis_convert(&StateVector::up(), 0, SpinBasis::Y, SpinBasis::Z).unwrap();
        assert!(up_y.approx_eq(&StateVector::from_pairs(&[(h, 0.0), (0.0, h)]).unwrap(), TOL));
        let down_y = basis_convert(&StateVector::down(), 0, SpinBasis::Y, SpinBasis::Z).unwrap();
        assert!(down_y.approx_eq(&StateVector::from_pairs(&[(h, 0.0), (0.0, -h)]).unwrap(), TOL));
    }

    #[test]
    fn basis_convert_round_trip_and_bad_index() {
        let s = StateVector::from_pairs(&[(0.1, 0.2), (0.3, -0.4), (0.5, 0.0), (-0.1, 0.6)])
            .unwrap()
            .normalized();
        for q in 0..2 {
            let there = basis_convert(&s, q, SpinBasis::Z, SpinBasis::X).unwrap();
            assert!((there.norm_sqr() - 1.0).abs() < TOL);
            let back = basis_convert(&there, q, SpinBasis::X, SpinBasis::Z).unwrap();
            assert!(back.approx_eq(&s, TOL));
        }
        assert!(matches!(
            basis_convert(&s, 2, SpinBasis::Z, SpinBasis::Y),
            Err(Error::IndexOutOfRange { .. })
        ));
    }

    #[test]
    fn eigenvectors_of_spin_match_basis_change() {
        for b in [SpinBasis::X, SpinBasis::Y, SpinBasis::Z] {
            let m = b.change_matrix();
            let up = StateVector::new(vec![m.get(0, 0), m.get(1, 0)]).unwrap();
            let down = StateVector::new(vec![m.get(0, 1), m.get(1, 1)]).unwrap();
            let s = pauli_along(&b.axis());
            assert!(s.apply(&up).unwrap().approx_eq(&up, TOL));
            assert!(s.apply(&down).unwrap().approx_eq(&-&down, TOL));
        }
    }

    #[test]
    fn operator_tags() {
        assert!(Operator::hadamard().is_unitary(TOL));
        assert!(Operator::hadamard().is_hermitian(TOL));
        let p = Operator::outer(&StateVector::up(), &StateVector::up());
        assert!(p.is_projector(TOL));
        assert!(!Operator::pauli_x().is_projector(TOL));
    }

    #[test]
    fn phase_equality() {
        let a = StateVector::from_pairs(&[(0.6, 0.0), (0.0, 0.8)]).unwrap();
        let b = a.scale(cis(1.234));
        assert!(!a.approx_eq(&b, 1e-6));
        assert!(a.approx_eq_up_to_phase(&b, TOL));
        assert!((a.overlap_modulus(&b).unwrap() - 1.0).abs() < TOL);
    }

    #[test]
    fn cis_is_exact_on_quarter_turns() {
        assert_eq!(cis(std::f64::consts::PI), c(-1.0, 0.0));
        assert_eq!(cis(std::f64::consts::FRAC_PI_2), I);
        assert_eq!(cis(-std::f64::consts::FRAC_PI_2), -I);
    }
}
