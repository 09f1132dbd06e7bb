//! Exact density-operator engine for small qubit registers.
//!
//! States are dense `2^N x 2^N` complex matrices with `N <= 8`. Gates are
//! product unitaries, entangling unitaries on a qubit subset, or probabilistic
//! mixtures of product unitaries (decoherence). Entangling gates are stored on
//! their subset and applied through index arithmetic instead of Kronecker
//! products with identity.
//!
//! Qubit 0 maps to the most significant bit of a basis index, so basis state
//! `|q0 q1 ... q_{N-1}>` has index `sum_j q_j * 2^(N-1-j)`.

use nalgebra::{DMatrix, Matrix2};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::tops;

pub type CMatrix = DMatrix<Complex64>;

/// Hard cap of the dense engine.
pub const MAX_QUBITS: usize = 8;
/// Tolerance for Hermiticity and unit-trace checks.
pub const STATE_TOL: f64 = 1e-12;
/// Smallest admissible eigenvalue of a density operator; the slack absorbs
/// round-off from repeated conjugation.
pub const PSD_TOL: f64 = -1e-10;
/// Tolerance for `U^dag U = I` checks on gate unitaries.
pub const UNITARY_TOL: f64 = 1e-12;

#[inline]
pub(crate) fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

#[inline]
pub(crate) fn cr(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// The four single-qubit Pauli operators; index 0 is the identity.
pub fn pauli(index: u8) -> Matrix2<Complex64> {
    match index {
        0 => Matrix2::new(cr(1.0), cr(0.0), cr(0.0), cr(1.0)),
        1 => Matrix2::new(cr(0.0), cr(1.0), cr(1.0), cr(0.0)),
        2 => Matrix2::new(cr(0.0), c(0.0, -1.0), c(0.0, 1.0), cr(0.0)),
        3 => Matrix2::new(cr(1.0), cr(0.0), cr(0.0), cr(-1.0)),
        _ => panic!("pauli index {index} out of range"),
    }
}

pub(crate) fn to_dmatrix(m: &Matrix2<Complex64>) -> CMatrix {
    CMatrix::from_fn(2, 2, |i, j| m[(i, j)])
}

/// max_ij |a_ij - b_ij|
pub(crate) fn max_abs_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    assert_eq!(a.shape(), b.shape());
    let mut d = 0.0f64;
    for i in 0..a.nrows() {
        for j in 0..a.ncols() {
            d = d.max((a[(i, j)] - b[(i, j)]).norm());
        }
    }
    d
}

/// max_ij |(U^dag U - I)_ij|
pub(crate) fn unitarity_deviation(u: &CMatrix) -> f64 {
    let n = u.nrows();
    max_abs_diff(&(u.adjoint() * u), &CMatrix::identity(n, n))
}

fn check_unitary(u: &CMatrix, tolerance: f64) -> Result<()> {
    if u.nrows() != u.ncols() || !u.nrows().is_power_of_two() {
        return Err(Error::InvalidGate(format!(
            "gate matrix must be square with power-of-two dimension, got {}x{}",
            u.nrows(),
            u.ncols()
        )));
    }
    let deviation = unitarity_deviation(u);
    if deviation > tolerance {
        return Err(Error::NotUnitary {
            deviation,
            tolerance,
        });
    }
    Ok(())
}

/// tr(a b) without materializing the product.
pub(crate) fn trace_product(a: &CMatrix, b: &CMatrix) -> Complex64 {
    debug_assert_eq!(a.ncols(), b.nrows());
    debug_assert_eq!(a.nrows(), b.ncols());
    let mut t = Complex64::default();
    for i in 0..a.nrows() {
        for j in 0..a.ncols() {
            t += a[(i, j)] * b[(j, i)];
        }
    }
    t
}

/// Scatter table for a set of bit slots within a register.
///
/// `positions[i]` is the register slot (0 = most significant) driven by local
/// bit `i` (0 = most significant of the local index). Entry `a` of the result
/// is the register index with the local bits of `a` placed in their slots.
fn scatter_table(positions: &[usize], reg_len: usize) -> Vec<usize> {
    let s = positions.len();
    (0..1usize << s)
        .map(|a| {
            let mut g = 0usize;
            for (i, &p) in positions.iter().enumerate() {
                g |= ((a >> (s - 1 - i)) & 1) << (reg_len - 1 - p);
            }
            g
        })
        .collect()
}

/// Embed `u`, acting on `gate_qubits`, into a register whose bit order is
/// given by `register` (entry 0 is the most significant bit).
pub(crate) fn embed_matrix(register: &[usize], gate_qubits: &[usize], u: &CMatrix) -> CMatrix {
    let reg_len = register.len();
    let positions: Vec<usize> = gate_qubits
        .iter()
        .map(|q| {
            register
                .iter()
                .position(|r| r == q)
                .expect("gate qubit not present in register")
        })
        .collect();
    let rest_positions: Vec<usize> = (0..reg_len).filter(|p| !positions.contains(p)).collect();
    let scat = scatter_table(&positions, reg_len);
    let rest = scatter_table(&rest_positions, reg_len);
    let ls = scat.len();
    let dim = 1usize << reg_len;
    let mut out = CMatrix::zeros(dim, dim);
    for &r in &rest {
        for a in 0..ls {
            for b in 0..ls {
                out[(r | scat[a], r | scat[b])] = u[(a, b)];
            }
        }
    }
    out
}

/// rho -> (U on subset) rho (U on subset)^dag without materializing the
/// embedded gate: the subset block of every (rest, rest') sector is
/// conjugated in place.
pub(crate) fn conjugate_on_subset(
    rho: &CMatrix,
    u: &CMatrix,
    qubits: &[usize],
    n_qubits: usize,
) -> CMatrix {
    let scat = scatter_table(qubits, n_qubits);
    let rest_positions: Vec<usize> = (0..n_qubits).filter(|q| !qubits.contains(q)).collect();
    let rest = scatter_table(&rest_positions, n_qubits);
    let ls = scat.len();
    let dim = 1usize << n_qubits;
    let mut out = CMatrix::zeros(dim, dim);
    let mut block = CMatrix::zeros(ls, ls);
    for &rg in &rest {
        for &rh in &rest {
            for a in 0..ls {
                for b in 0..ls {
                    block[(a, b)] = rho[(rg | scat[a], rh | scat[b])];
                }
            }
            let conj = u * &block * u.adjoint();
            for a in 0..ls {
                for b in 0..ls {
                    out[(rg | scat[a], rh | scat[b])] = conj[(a, b)];
                }
            }
        }
    }
    out
}

// ---------------------------------------------------------------------------
// Pauli strings
// ---------------------------------------------------------------------------

/// A tensor product of Pauli operators, one per qubit, with at least one
/// factor different from the identity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PauliString {
    betas: Vec<u8>,
}

impl PauliString {
    pub fn new(betas: Vec<u8>) -> Result<Self> {
        if betas.is_empty() {
            return Err(Error::InvalidPauliString("empty string".into()));
        }
        if let Some(&bad) = betas.iter().find(|&&b| b > 3) {
            return Err(Error::InvalidPauliString(format!(
                "index {bad} out of range 0..=3"
            )));
        }
        if betas.iter().all(|&b| b == 0) {
            return Err(Error::InvalidPauliString(
                "all-identity observable is not measurable".into(),
            ));
        }
        Ok(Self { betas })
    }

    pub fn betas(&self) -> &[u8] {
        &self.betas
    }

    pub fn n_qubits(&self) -> usize {
        self.betas.len()
    }

    /// The dense `2^N x 2^N` matrix of the tensor product.
    pub fn matrix(&self) -> CMatrix {
        let mut m = to_dmatrix(&pauli(self.betas[0]));
        for &b in &self.betas[1..] {
            m = m.kronecker(&to_dmatrix(&pauli(b)));
        }
        m
    }

    /// All `4^N - 1` nontrivial strings in lexicographic digit order.
    pub fn all_nontrivial(n_qubits: usize) -> Vec<PauliString> {
        let total = 4usize.pow(n_qubits as u32);
        (1..total)
            .map(|idx| {
                let betas = (0..n_qubits)
                    .map(|j| ((idx >> (2 * (n_qubits - 1 - j))) & 3) as u8)
                    .collect();
                PauliString { betas }
            })
            .collect()
    }
}

impl std::fmt::Display for PauliString {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for b in &self.betas {
            write!(f, "{b}")?;
        }
        Ok(())
    }
}

impl std::str::FromStr for PauliString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let betas = s
            .chars()
            .map(|ch| {
                ch.to_digit(10)
                    .filter(|&d| d <= 3)
                    .map(|d| d as u8)
                    .ok_or_else(|| {
                        Error::InvalidPauliString(format!("bad digit {ch:?} in {s:?}"))
                    })
            })
            .collect::<Result<Vec<u8>>>()?;
        PauliString::new(betas)
    }
}

// ---------------------------------------------------------------------------
// Density operators
// ---------------------------------------------------------------------------

/// A validated N-qubit density operator.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityOperator {
    n_qubits: usize,
    matrix: CMatrix,
}

impl DensityOperator {
    /// Validates Hermiticity, unit trace, positive semidefiniteness and the
    /// qubit-count cap before accepting the matrix.
    pub fn new(n_qubits: usize, matrix: CMatrix) -> Result<Self> {
        if n_qubits == 0 || n_qubits > MAX_QUBITS {
            return Err(Error::QubitCount(n_qubits));
        }
        let dim = 1usize << n_qubits;
        if matrix.nrows() != dim || matrix.ncols() != dim {
            return Err(Error::Dimension {
                expected: dim,
                got: matrix.nrows(),
            });
        }
        let op = Self { n_qubits, matrix };
        op.validate()?;
        Ok(op)
    }

    /// Caller guarantees validity (used on paths that preserve it, e.g.
    /// unitary conjugation of an already validated state).
    pub(crate) fn from_matrix_unchecked(n_qubits: usize, matrix: CMatrix) -> Self {
        debug_assert_eq!(matrix.nrows(), 1usize << n_qubits);
        Self { n_qubits, matrix }
    }

    /// Checks the density-operator invariants on the stored matrix.
    pub fn validate(&self) -> Result<()> {
        let herm = max_abs_diff(&self.matrix, &self.matrix.adjoint());
        if herm > STATE_TOL {
            return Err(Error::Config(format!(
                "matrix is not Hermitian (deviation {herm:.3e})"
            )));
        }
        let tr = self.matrix.trace();
        if (tr - cr(1.0)).norm() > STATE_TOL {
            return Err(Error::Config(format!("trace is {tr} instead of 1")));
        }
        let min_eig = self
            .eigenvalues()
            .first()
            .copied()
            .unwrap_or(f64::NEG_INFINITY);
        if min_eig < PSD_TOL {
            return Err(Error::Config(format!(
                "matrix is not positive semidefinite (min eigenvalue {min_eig:.3e})"
            )));
        }
        Ok(())
    }

    /// M = I / 2^N, the state carrying no magnetization signal.
    pub fn maximally_mixed(n_qubits: usize) -> Self {
        let dim = 1usize << n_qubits;
        Self::from_matrix_unchecked(
            n_qubits,
            CMatrix::identity(dim, dim) * cr(1.0 / dim as f64),
        )
    }

    /// Projector onto the computational basis state with the given index.
    pub fn basis_state(n_qubits: usize, index: usize) -> Self {
        let dim = 1usize << n_qubits;
        assert!(index < dim, "basis index out of range");
        let mut m = CMatrix::zeros(dim, dim);
        m[(index, index)] = cr(1.0);
        Self::from_matrix_unchecked(n_qubits, m)
    }

    /// Projector onto a (normalized) pure state vector.
    pub fn from_state_vector(n_qubits: usize, amplitudes: &[Complex64]) -> Result<Self> {
        let dim = 1usize << n_qubits;
        if amplitudes.len() != dim {
            return Err(Error::Dimension {
                expected: dim,
                got: amplitudes.len(),
            });
        }
        let norm: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
        if (norm - 1.0).abs() > 1e-9 {
            return Err(Error::Config(format!(
                "state vector norm^2 is {norm}, expected 1"
            )));
        }
        let m = CMatrix::from_fn(dim, dim, |i, j| amplitudes[i] * amplitudes[j].conj());
        Ok(Self::from_matrix_unchecked(n_qubits, m))
    }

    /// (1 - epsilon) M + epsilon rho1.
    pub fn pseudopure(n_qubits: usize, epsilon: f64, rho1: &DensityOperator) -> Result<Self> {
        if !(0.0..=1.0).contains(&epsilon) {
            return Err(Error::EpsilonRange(epsilon));
        }
        if rho1.n_qubits != n_qubits {
            return Err(Error::Dimension {
                expected: 1usize << n_qubits,
                got: rho1.dim(),
            });
        }
        let m = Self::maximally_mixed(n_qubits);
        let matrix = &m.matrix * cr(1.0 - epsilon) + &rho1.matrix * cr(epsilon);
        Ok(Self::from_matrix_unchecked(n_qubits, matrix))
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        1usize << self.n_qubits
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    /// Eigenvalues in ascending order (the matrix is Hermitian).
    pub fn eigenvalues(&self) -> Vec<f64> {
        let mut ev: Vec<f64> = self.matrix.symmetric_eigenvalues().iter().copied().collect();
        ev.sort_by(|a, b| a.partial_cmp(b).unwrap());
        ev
    }

    /// tr(rho^2)
    pub fn purity(&self) -> f64 {
        trace_product(&self.matrix, &self.matrix).re
    }

    /// Frobenius norm of the difference.
    pub fn frobenius_distance(&self, other: &DensityOperator) -> f64 {
        (&self.matrix - &other.matrix).norm()
    }

    /// Applies a gate: `U rho U^dag` for unitaries, `sum_l p_l U_l rho U_l^dag`
    /// for mixtures. The gate is validated first.
    pub fn apply(&self, gate: &GateOp) -> Result<DensityOperator> {
        gate.validate(self.n_qubits)?;
        Ok(self.apply_valid(gate))
    }

    fn apply_valid(&self, gate: &GateOp) -> DensityOperator {
        match gate {
            GateOp::Product(factors) => {
                let u = product_matrix(factors);
                DensityOperator::from_matrix_unchecked(
                    self.n_qubits,
                    &u * &self.matrix * u.adjoint(),
                )
            }
            GateOp::Entangling { qubits, matrix } => DensityOperator::from_matrix_unchecked(
                self.n_qubits,
                conjugate_on_subset(&self.matrix, matrix, qubits, self.n_qubits),
            ),
            GateOp::Mixture(branches) => {
                let dim = self.dim();
                let mut acc = CMatrix::zeros(dim, dim);
                for (p, branch) in branches {
                    acc += self.apply_valid(branch).matrix * cr(*p);
                }
                DensityOperator::from_matrix_unchecked(self.n_qubits, acc)
            }
        }
    }

    /// tr(rho * sigma_{b1} x ... x sigma_{bN}).
    pub fn expectation(&self, p: &PauliString) -> Result<f64> {
        if p.n_qubits() != self.n_qubits {
            return Err(Error::Dimension {
                expected: self.n_qubits,
                got: p.n_qubits(),
            });
        }
        let value = trace_product(&self.matrix, &p.matrix());
        debug_assert!(value.im.abs() < 1e-9, "expectation has imaginary part");
        Ok(value.re)
    }
}

/// epsilon = alpha * N / 2^N.
pub fn epsilon_from_alpha(n_qubits: usize, alpha: f64) -> Result<f64> {
    if n_qubits == 0 {
        return Err(Error::QubitCount(0));
    }
    if alpha <= 0.0 {
        return Err(Error::AlphaRange(alpha));
    }
    Ok(alpha * n_qubits as f64 / (1u64 << n_qubits) as f64)
}

// ---------------------------------------------------------------------------
// Gates
// ---------------------------------------------------------------------------

/// A circuit element.
#[derive(Debug, Clone, PartialEq)]
pub enum GateOp {
    /// One 2x2 unitary per qubit (identity factors allowed).
    Product(Vec<Matrix2<Complex64>>),
    /// A unitary on a qubit subset, stored in subset-local dimensions.
    /// `qubits[0]` drives the most significant bit of the local index.
    Entangling { qubits: Vec<usize>, matrix: CMatrix },
    /// A probabilistic mixture of product unitaries (decoherence).
    Mixture(Vec<(f64, GateOp)>),
}

fn product_matrix(factors: &[Matrix2<Complex64>]) -> CMatrix {
    let mut u = to_dmatrix(&factors[0]);
    for f in &factors[1..] {
        u = u.kronecker(&to_dmatrix(f));
    }
    u
}

impl GateOp {
    /// Product of identities.
    pub fn identity(n_qubits: usize) -> Self {
        GateOp::Product(vec![Matrix2::identity(); n_qubits])
    }

    /// Product gate with `u` on one qubit and identities elsewhere.
    pub fn single(n_qubits: usize, qubit: usize, u: Matrix2<Complex64>) -> Self {
        let mut factors = vec![Matrix2::identity(); n_qubits];
        factors[qubit] = u;
        GateOp::Product(factors)
    }

    pub fn is_entangling_variant(&self) -> bool {
        matches!(self, GateOp::Entangling { .. })
    }

    pub fn is_mixture(&self) -> bool {
        matches!(self, GateOp::Mixture(_))
    }

    /// Checks unitarity of every factor, subset sanity for entangling gates,
    /// and probability structure for mixtures (nonnegative, summing to one,
    /// product branches only).
    pub fn validate(&self, n_qubits: usize) -> Result<()> {
        match self {
            GateOp::Product(factors) => {
                if factors.len() != n_qubits {
                    return Err(Error::InvalidGate(format!(
                        "product gate has {} factors for {} qubits",
                        factors.len(),
                        n_qubits
                    )));
                }
                for f in factors {
                    check_unitary(&to_dmatrix(f), UNITARY_TOL)?;
                }
                Ok(())
            }
            GateOp::Entangling { qubits, matrix } => {
                if qubits.is_empty() {
                    return Err(Error::InvalidGate("empty qubit subset".into()));
                }
                let mut seen = vec![false; n_qubits];
                for &q in qubits {
                    if q >= n_qubits {
                        return Err(Error::InvalidGate(format!(
                            "qubit {q} out of range for {n_qubits} qubits"
                        )));
                    }
                    if seen[q] {
                        return Err(Error::InvalidGate(format!("duplicate qubit {q}")));
                    }
                    seen[q] = true;
                }
                let dim = 1usize << qubits.len();
                if matrix.nrows() != dim {
                    return Err(Error::Dimension {
                        expected: dim,
                        got: matrix.nrows(),
                    });
                }
                check_unitary(matrix, UNITARY_TOL)
            }
            GateOp::Mixture(branches) => {
                if branches.is_empty() {
                    return Err(Error::InvalidGate("empty mixture".into()));
                }
                let mut total = 0.0;
                for (p, branch) in branches {
                    if *p < 0.0 {
                        return Err(Error::InvalidGate(format!("negative probability {p}")));
                    }
                    total += p;
                    if !matches!(branch, GateOp::Product(_)) {
                        return Err(Error::InvalidGate(
                            "mixture branches must be product gates".into(),
                        ));
                    }
                    branch.validate(n_qubits)?;
                }
                if (total - 1.0).abs() > 1e-12 {
                    return Err(Error::InvalidGate(format!(
                        "mixture probabilities sum to {total}"
                    )));
                }
                Ok(())
            }
        }
    }

    /// The gate as a full `2^N x 2^N` unitary. Mixtures have no single matrix.
    pub fn full_matrix(&self, n_qubits: usize) -> Result<CMatrix> {
        match self {
            GateOp::Product(factors) => Ok(product_matrix(factors)),
            GateOp::Entangling { qubits, matrix } => {
                let register: Vec<usize> = (0..n_qubits).collect();
                Ok(embed_matrix(&register, qubits, matrix))
            }
            GateOp::Mixture(_) => Err(Error::InvalidGate(
                "a mixture has no single unitary matrix".into(),
            )),
        }
    }

    /// Qubits on which the gate can act nontrivially. For product gates these
    /// are the qubits whose factor deviates from the identity.
    pub fn involved_qubits(&self) -> Vec<usize> {
        match self {
            GateOp::Product(factors) => factors
                .iter()
                .enumerate()
                .filter(|(_, f)| {
                    max_abs_diff(&to_dmatrix(f), &CMatrix::identity(2, 2)) > UNITARY_TOL
                })
                .map(|(j, _)| j)
                .collect(),
            GateOp::Entangling { qubits, .. } => {
                let mut q = qubits.clone();
                q.sort_unstable();
                q
            }
            GateOp::Mixture(branches) => {
                let mut all: Vec<usize> = branches
                    .iter()
                    .flat_map(|(_, b)| b.involved_qubits())
                    .collect();
                all.sort_unstable();
                all.dedup();
                all
            }
        }
    }
}

/// Merges an ordered unitary gate sequence into a single entangling gate on
/// the union of the involved qubits. Applying the result equals applying the
/// sequence. Mixtures cannot be compiled.
pub fn compile_circuit(n_qubits: usize, gates: &[GateOp]) -> Result<GateOp> {
    if gates.is_empty() {
        return Err(Error::InvalidGate("cannot compile an empty gate list".into()));
    }
    let mut union: Vec<usize> = Vec::new();
    for g in gates {
        g.validate(n_qubits)?;
        if g.is_mixture() {
            return Err(Error::InvalidGate(
                "mixtures cannot be compiled into a single unitary".into(),
            ));
        }
        union.extend(g.involved_qubits());
    }
    union.sort_unstable();
    union.dedup();
    if union.is_empty() {
        // All-identity input: pin the gate to qubit 0.
        union.push(0);
    }
    let dim = 1usize << union.len();
    let mut acc = CMatrix::identity(dim, dim);
    for g in gates {
        let local = match g {
            GateOp::Product(factors) => {
                let mut u = CMatrix::identity(1, 1);
                for &q in &union {
                    u = u.kronecker(&to_dmatrix(&factors[q]));
                }
                u
            }
            GateOp::Entangling { qubits, matrix } => embed_matrix(&union, qubits, matrix),
            GateOp::Mixture(_) => unreachable!(),
        };
        acc = local * acc;
    }
    Ok(GateOp::Entangling {
        qubits: union,
        matrix: acc,
    })
}

/// Common gate matrices used by circuits.
pub mod gates {
    use super::*;
    use std::f64::consts::FRAC_1_SQRT_2;

    pub fn h() -> Matrix2<Complex64> {
        Matrix2::new(
            cr(FRAC_1_SQRT_2),
            cr(FRAC_1_SQRT_2),
            cr(FRAC_1_SQRT_2),
            cr(-FRAC_1_SQRT_2),
        )
    }

    pub fn x() -> Matrix2<Complex64> {
        pauli(1)
    }

    pub fn y() -> Matrix2<Complex64> {
        pauli(2)
    }

    pub fn z() -> Matrix2<Complex64> {
        pauli(3)
    }

    /// exp(-i theta sigma_x / 2)
    pub fn rx(theta: f64) -> Matrix2<Complex64> {
        let (s, co) = (theta / 2.0).sin_cos();
        Matrix2::new(cr(co), c(0.0, -s), c(0.0, -s), cr(co))
    }

    /// exp(-i theta sigma_y / 2)
    pub fn ry(theta: f64) -> Matrix2<Complex64> {
        let (s, co) = (theta / 2.0).sin_cos();
        Matrix2::new(cr(co), cr(-s), cr(s), cr(co))
    }

    /// exp(-i theta sigma_z / 2)
    pub fn rz(theta: f64) -> Matrix2<Complex64> {
        let (s, co) = (theta / 2.0).sin_cos();
        Matrix2::new(c(co, -s), cr(0.0), cr(0.0), c(co, s))
    }

    /// diag(1, 1, 1, -1): |0><0| x I + |1><1| x sigma_z. Symmetric in its two
    /// qubits.
    pub fn cphase() -> CMatrix {
        let mut m = CMatrix::identity(4, 4);
        m[(3, 3)] = cr(-1.0);
        m
    }

    /// Controlled-NOT with the first local qubit as control.
    pub fn cnot() -> CMatrix {
        let mut m = CMatrix::zeros(4, 4);
        m[(0, 0)] = cr(1.0);
        m[(1, 1)] = cr(1.0);
        m[(2, 3)] = cr(1.0);
        m[(3, 2)] = cr(1.0);
        m
    }
}

// ---------------------------------------------------------------------------
// Model parameters
// ---------------------------------------------------------------------------

/// Polarization and schedule parameters shared by the classical models.
///
/// `eta = 1/(1 + 2^(2N-1))` is both the separability threshold for
/// pseudopure states and the per-gate signal contraction of the classical
/// kernels. `k_max` is the largest number of entangling gates the hidden
/// model survives without signal loss: the largest K with
/// `epsilon <= eta^(K+1)` (`None` when even K = 0 fails, i.e. epsilon > eta).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    n_qubits: usize,
    alpha: f64,
    epsilon: f64,
    eta: f64,
    k_max: Option<u32>,
}

impl ModelParams {
    /// Derives epsilon from the polarization alpha.
    pub fn from_alpha(n_qubits: usize, alpha: f64) -> Result<Self> {
        let epsilon = epsilon_from_alpha(n_qubits, alpha)?;
        Self::build(n_qubits, alpha, epsilon)
    }

    /// Sets epsilon directly; the implied alpha is kept for reporting.
    pub fn from_epsilon(n_qubits: usize, epsilon: f64) -> Result<Self> {
        if n_qubits == 0 {
            return Err(Error::QubitCount(0));
        }
        if !(0.0..=1.0).contains(&epsilon) {
            return Err(Error::EpsilonRange(epsilon));
        }
        let alpha = epsilon * (1u64 << n_qubits) as f64 / n_qubits as f64;
        Self::build(n_qubits, alpha, epsilon)
    }

    fn build(n_qubits: usize, alpha: f64, epsilon: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&epsilon) {
            return Err(Error::EpsilonRange(epsilon));
        }
        let eta = tops::eta_of(n_qubits);
        Ok(Self {
            n_qubits,
            alpha,
            epsilon,
            eta,
            k_max: tops::k_from_epsilon(eta, epsilon),
        })
    }

    /// Replaces eta with an arbitrary value and recomputes the schedule.
    /// Diagnostic entry point for corruption tests; normal construction pins
    /// eta to `eta_of(n_qubits)`.
    pub fn with_eta(mut self, eta: f64) -> Self {
        self.eta = eta;
        self.k_max = tops::k_from_epsilon(eta, self.epsilon);
        self
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    pub fn k_max(&self) -> Option<u32> {
        self.k_max
    }

    /// eta_k schedule: eta^(K-k) below the counter ceiling K, then 1.
    pub fn eta_k(&self, k: u32) -> f64 {
        tops::theta_schedule(k, self)
    }

    /// The hidden model needs K >= 1, i.e. epsilon <= eta^2.
    pub fn require_hidden(&self) -> Result<u32> {
        let limit = self.eta * self.eta;
        match self.k_max {
            Some(k) if k >= 1 => Ok(k),
            _ => Err(Error::ModelInapplicable {
                epsilon: self.epsilon,
                limit,
            }),
        }
    }

    /// The naive model needs a nonnegative initial density, i.e.
    /// epsilon <= eta.
    pub fn require_naive(&self) -> Result<()> {
        if self.epsilon <= self.eta {
            Ok(())
        } else {
            Err(Error::ModelInapplicable {
                epsilon: self.epsilon,
                limit: self.eta,
            })
        }
    }
}
