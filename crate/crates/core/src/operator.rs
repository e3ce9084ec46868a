//! Dense and Pauli-coefficient representations of N-qubit operators.
//!
//! Qubit 1 is always the leftmost Kronecker factor, i.e. the most significant
//! bit of a row/column index.

use std::fmt;
use std::ops::{Add, Mul, Sub};

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;

/// State vector over the computational basis.
pub type Ket = DVector<C64>;

/// Largest qubit count for Pauli-coefficient, ζ and vec representations.
pub const MAX_PAULI_QUBITS: usize = 6;

/// Largest qubit count for dense operators (n-copy metrology systems).
pub const MAX_DENSE_QUBITS: usize = 10;

pub(crate) const ZERO: C64 = C64::new(0.0, 0.0);
pub(crate) const ONE: C64 = C64::new(1.0, 0.0);
pub(crate) const IMAG: C64 = C64::new(0.0, 1.0);

/// Single-qubit error basis element.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub const ALL: [Pauli; 4] = [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z];

    pub fn index(self) -> usize {
        match self {
            Pauli::I => 0,
            Pauli::X => 1,
            Pauli::Y => 2,
            Pauli::Z => 3,
        }
    }

    pub fn from_index(index: usize) -> Option<Pauli> {
        Pauli::ALL.get(index).copied()
    }

    pub fn from_char(c: char) -> Option<Pauli> {
        match c.to_ascii_uppercase() {
            'I' => Some(Pauli::I),
            'X' => Some(Pauli::X),
            'Y' => Some(Pauli::Y),
            'Z' => Some(Pauli::Z),
            _ => None,
        }
    }

    pub fn as_char(self) -> char {
        ['I', 'X', 'Y', 'Z'][self.index()]
    }

    /// Column and entry of the single nonzero element in `row`.
    fn monomial(self, row: usize) -> (usize, C64) {
        match (self, row) {
            (Pauli::I, b) => (b, ONE),
            (Pauli::X, b) => (1 - b, ONE),
            (Pauli::Y, 0) => (1, -IMAG),
            (Pauli::Y, _) => (0, IMAG),
            (Pauli::Z, 0) => (0, ONE),
            (Pauli::Z, _) => (1, -ONE),
        }
    }
}

/// The 2×2 matrix of a Pauli letter.
pub fn pauli_matrix(p: Pauli) -> OperatorMatrix {
    let mut m = DMatrix::from_element(2, 2, ZERO);
    for row in 0..2 {
        let (col, v) = p.monomial(row);
        m[(row, col)] = v;
    }
    OperatorMatrix { n_qubits: 1, entries: m }
}

fn check_pauli_qubits(n: usize) -> Result<()> {
    if n == 0 || n > MAX_PAULI_QUBITS {
        return Err(Error::QubitCount { found: n, max: MAX_PAULI_QUBITS });
    }
    Ok(())
}

fn check_dense_qubits(n: usize) -> Result<()> {
    if n == 0 || n > MAX_DENSE_QUBITS {
        return Err(Error::QubitCount { found: n, max: MAX_DENSE_QUBITS });
    }
    Ok(())
}

/// `log2(dim)` when `dim` is a power of two greater than one.
pub fn qubits_for_dim(dim: usize) -> Result<usize> {
    if dim < 2 || !dim.is_power_of_two() {
        return Err(Error::NotPowerOfTwo(dim));
    }
    Ok(dim.trailing_zeros() as usize)
}

/// Dense `2^N × 2^N` complex operator.
#[derive(Clone, Debug, PartialEq)]
pub struct OperatorMatrix {
    n_qubits: usize,
    entries: DMatrix<C64>,
}

impl OperatorMatrix {
    pub fn new(n_qubits: usize, entries: DMatrix<C64>) -> Result<Self> {
        check_dense_qubits(n_qubits)?;
        let dim = 1usize << n_qubits;
        if entries.nrows() != dim {
            return Err(Error::DimensionMismatch { expected: dim, found: entries.nrows() });
        }
        if entries.ncols() != dim {
            return Err(Error::DimensionMismatch { expected: dim, found: entries.ncols() });
        }
        Ok(Self { n_qubits, entries })
    }

    /// Wraps a square matrix, inferring the qubit count from its dimension.
    pub fn from_dense(entries: DMatrix<C64>) -> Result<Self> {
        if entries.nrows() != entries.ncols() {
            return Err(Error::DimensionMismatch { expected: entries.nrows(), found: entries.ncols() });
        }
        let n = qubits_for_dim(entries.nrows())?;
        Self::new(n, entries)
    }

    pub fn from_row_major(n_qubits: usize, data: &[C64]) -> Result<Self> {
        check_dense_qubits(n_qubits)?;
        let dim = 1usize << n_qubits;
        if data.len() != dim * dim {
            return Err(Error::DimensionMismatch { expected: dim * dim, found: data.len() });
        }
        Self::new(n_qubits, DMatrix::from_row_slice(dim, dim, data))
    }

    pub fn zeros(n_qubits: usize) -> Self {
        let dim = 1usize << n_qubits;
        Self { n_qubits, entries: DMatrix::from_element(dim, dim, ZERO) }
    }

    pub fn identity(n_qubits: usize) -> Self {
        let dim = 1usize << n_qubits;
        Self { n_qubits, entries: DMatrix::identity(dim, dim) }
    }

    /// `|psi><phi|`
    pub fn outer(psi: &DVector<C64>, phi: &DVector<C64>) -> Result<Self> {
        if psi.len() != phi.len() {
            return Err(Error::DimensionMismatch { expected: psi.len(), found: phi.len() });
        }
        Self::from_dense(psi * phi.adjoint())
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.entries
    }

    pub fn into_matrix(self) -> DMatrix<C64> {
        self.entries
    }

    pub fn get(&self, row: usize, col: usize) -> C64 {
        self.entries[(row, col)]
    }

    pub fn adjoint(&self) -> Self {
        Self { n_qubits: self.n_qubits, entries: self.entries.adjoint() }
    }

    pub fn transpose(&self) -> Self {
        Self { n_qubits: self.n_qubits, entries: self.entries.transpose() }
    }

    pub fn scale(&self, c: C64) -> Self {
        Self { n_qubits: self.n_qubits, entries: &self.entries * c }
    }

    pub fn kron(&self, other: &OperatorMatrix) -> Self {
        Self { n_qubits: self.n_qubits + other.n_qubits, entries: self.entries.kronecker(&other.entries) }
    }

    pub fn trace(&self) -> C64 {
        self.entries.trace()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.entries.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `||A - A†||_F`
    pub fn hermiticity_defect(&self) -> f64 {
        (&self.entries - self.entries.adjoint()).iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermiticity_defect() <= tol
    }

    pub fn apply(&self, v: &DVector<C64>) -> Result<DVector<C64>> {
        if v.len() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: v.len() });
        }
        Ok(&self.entries * v)
    }

    pub fn checked_mul(&self, rhs: &OperatorMatrix) -> Result<Self> {
        self.same_shape(rhs)?;
        Ok(Self { n_qubits: self.n_qubits, entries: &self.entries * &rhs.entries })
    }

    pub fn same_shape(&self, other: &OperatorMatrix) -> Result<()> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: other.dim() });
        }
        Ok(())
    }

    /// `I^{⊗position} ⊗ self ⊗ I^{⊗(blocks-1-position)}` with blocks of `self`'s size.
    pub fn embed(&self, position: usize, blocks: usize) -> Result<Self> {
        if position >= blocks {
            return Err(Error::invalid(format!("block position {position} out of range for {blocks} blocks")));
        }
        check_dense_qubits(self.n_qubits * blocks)?;
        let left = 1usize << (self.n_qubits * position);
        let right = 1usize << (self.n_qubits * (blocks - 1 - position));
        let entries = DMatrix::<C64>::identity(left, left)
            .kronecker(&self.entries)
            .kronecker(&DMatrix::<C64>::identity(right, right));
        Ok(Self { n_qubits: self.n_qubits * blocks, entries })
    }

    /// Relative Frobenius distance `||A - B|| / max(||A||, ||B||, 1e-300)`.
    pub fn relative_distance(&self, other: &OperatorMatrix) -> f64 {
        let diff = (&self.entries - &other.entries).iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        let scale = self.frobenius_norm().max(other.frobenius_norm());
        if scale == 0.0 {
            0.0
        } else {
            diff / scale
        }
    }

    pub fn max_abs_diff(&self, other: &OperatorMatrix) -> f64 {
        self.entries.iter().zip(other.entries.iter()).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }
}

impl Add for &OperatorMatrix {
    type Output = OperatorMatrix;

    /// Panics on dimension mismatch, like the underlying matrix addition.
    fn add(self, rhs: &OperatorMatrix) -> OperatorMatrix {
        OperatorMatrix { n_qubits: self.n_qubits, entries: &self.entries + &rhs.entries }
    }
}

impl Sub for &OperatorMatrix {
    type Output = OperatorMatrix;

    fn sub(self, rhs: &OperatorMatrix) -> OperatorMatrix {
        OperatorMatrix { n_qubits: self.n_qubits, entries: &self.entries - &rhs.entries }
    }
}

impl Mul for &OperatorMatrix {
    type Output = OperatorMatrix;

    fn mul(self, rhs: &OperatorMatrix) -> OperatorMatrix {
        OperatorMatrix { n_qubits: self.n_qubits, entries: &self.entries * &rhs.entries }
    }
}

/// `ab - ba`
pub fn commutator(a: &OperatorMatrix, b: &OperatorMatrix) -> Result<OperatorMatrix> {
    a.same_shape(b)?;
    Ok(OperatorMatrix { n_qubits: a.n_qubits, entries: &a.entries * &b.entries - &b.entries * &a.entries })
}

/// Coefficients `(a0, a1, a2, a3)` of `a0 I + a1 σx + a2 σy + a3 σz` on one qubit.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PauliFactor {
    coeffs: [C64; 4],
}

impl PauliFactor {
    pub const fn new(a0: C64, a1: C64, a2: C64, a3: C64) -> Self {
        Self { coeffs: [a0, a1, a2, a3] }
    }

    pub const fn from_coeffs(coeffs: [C64; 4]) -> Self {
        Self { coeffs }
    }

    pub fn identity() -> Self {
        Self::letter(Pauli::I)
    }

    pub fn zero() -> Self {
        Self { coeffs: [ZERO; 4] }
    }

    pub fn letter(p: Pauli) -> Self {
        let mut coeffs = [ZERO; 4];
        coeffs[p.index()] = ONE;
        Self { coeffs }
    }

    pub fn coeffs(&self) -> [C64; 4] {
        self.coeffs
    }

    pub fn coeff(&self, index: usize) -> C64 {
        self.coeffs[index]
    }

    /// Matrix entries `(e00, e01, e10, e11)`.
    pub fn to_entries(&self) -> [C64; 4] {
        let [a0, a1, a2, a3] = self.coeffs;
        [a0 + a3, a1 - IMAG * a2, a1 + IMAG * a2, a0 - a3]
    }

    /// Inverse of [`to_entries`](Self::to_entries).
    pub fn from_entries(e: [C64; 4]) -> Self {
        let [e00, e01, e10, e11] = e;
        Self::new((e00 + e11) / 2.0, (e01 + e10) / 2.0, (e10 - e01) / (2.0 * IMAG), (e00 - e11) / 2.0)
    }

    pub fn to_matrix(&self) -> DMatrix<C64> {
        let [e00, e01, e10, e11] = self.to_entries();
        DMatrix::from_row_slice(2, 2, &[e00, e01, e10, e11])
    }

    pub fn scaled(&self, c: C64) -> Self {
        Self { coeffs: self.coeffs.map(|a| a * c) }
    }

    /// Coefficients of the operator product `self · rhs`.
    pub fn compose(&self, rhs: &PauliFactor) -> Self {
        let [a0, a1, a2, a3] = self.coeffs;
        let [b0, b1, b2, b3] = rhs.coeffs;
        Self::new(
            a0 * b0 + a1 * b1 + a2 * b2 + a3 * b3,
            (a1 * b0 + a0 * b1) + IMAG * (a2 * b3 - a3 * b2),
            (a2 * b0 + a0 * b2) + IMAG * (a3 * b1 - a1 * b3),
            (a3 * b0 + a0 * b3) + IMAG * (a1 * b2 - a2 * b1),
        )
    }

    /// Coefficients of `[self, rhs]` from the Pauli commutation relations.
    pub fn commutator_coeffs(&self, rhs: &PauliFactor) -> Self {
        single_qubit_commutator_coeffs(self, rhs)
    }

    /// Largest-magnitude coefficient, first on near-ties; zero for the zero factor.
    pub fn leading_coeff(&self) -> C64 {
        let peak = self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
        self.coeffs.iter().copied().find(|c| c.norm() >= peak * (1.0 - 1e-12) && peak > 0.0).unwrap_or(ZERO)
    }

    pub fn is_zero(&self, tol: f64) -> bool {
        self.coeffs.iter().all(|c| c.norm() <= tol)
    }
}

/// `[A, B] = 2i((a2 b3 - b2 a3) σx + (a3 b1 - b3 a1) σy + (a1 b2 - b1 a2) σz)`.
pub fn single_qubit_commutator_coeffs(a: &PauliFactor, b: &PauliFactor) -> PauliFactor {
    let [_, a1, a2, a3] = a.coeffs;
    let [_, b1, b2, b3] = b.coeffs;
    let two_i = 2.0 * IMAG;
    PauliFactor::new(ZERO, two_i * (a2 * b3 - b2 * a3), two_i * (a3 * b1 - b3 * a1), two_i * (a1 * b2 - b1 * a2))
}

/// Tensor product of per-qubit [`PauliFactor`]s times a global scale.
#[derive(Clone, Debug, PartialEq)]
pub struct PauliProduct {
    pub(crate) factors: Vec<PauliFactor>,
    pub(crate) scale: C64,
}

impl PauliProduct {
    pub fn new(factors: Vec<PauliFactor>, scale: C64) -> Result<Self> {
        check_pauli_qubits(factors.len())?;
        Ok(Self { factors, scale })
    }

    pub fn unit(factors: Vec<PauliFactor>) -> Result<Self> {
        Self::new(factors, ONE)
    }

    pub fn identity(n_qubits: usize) -> Result<Self> {
        Self::unit(vec![PauliFactor::identity(); n_qubits])
    }

    /// Unit-coefficient letters such as `"XYIZ"`.
    pub fn from_letters(letters: &str) -> Result<Self> {
        let factors = letters
            .chars()
            .filter(|c| !c.is_whitespace())
            .map(|c| {
                Pauli::from_char(c)
                    .map(PauliFactor::letter)
                    .ok_or_else(|| Error::invalid(format!("invalid Pauli letter {c:?} in {letters:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::unit(factors)
    }

    pub fn n_qubits(&self) -> usize {
        self.factors.len()
    }

    pub fn factors(&self) -> &[PauliFactor] {
        &self.factors
    }

    pub fn scale(&self) -> C64 {
        self.scale
    }

    pub fn with_scale(mut self, scale: C64) -> Self {
        self.scale = scale;
        self
    }

    /// Folds the global scale into the first factor.
    pub fn with_unit_scale(&self) -> Self {
        let mut factors = self.factors.clone();
        factors[0] = factors[0].scaled(self.scale);
        Self { factors, scale: ONE }
    }

    pub fn to_matrix(&self) -> OperatorMatrix {
        let mut m = self.factors[0].to_matrix();
        for f in &self.factors[1..] {
            m = m.kronecker(&f.to_matrix());
        }
        OperatorMatrix { n_qubits: self.n_qubits(), entries: m * self.scale }
    }

    /// Operator product `self · rhs`, qubit by qubit.
    pub fn compose(&self, rhs: &PauliProduct) -> Result<Self> {
        if self.n_qubits() != rhs.n_qubits() {
            return Err(Error::DimensionMismatch { expected: self.n_qubits(), found: rhs.n_qubits() });
        }
        let factors = self.factors.iter().zip(&rhs.factors).map(|(a, b)| a.compose(b)).collect();
        Ok(Self { factors, scale: self.scale * rhs.scale })
    }

    /// Recovers a single tensor product from a dense operator, if it is one.
    ///
    /// The Pauli coefficient tensor of a product operator has rank one; the
    /// per-qubit factors are read off the slices through its largest entry.
    /// The zero operator maps to all-zero factors.
    pub fn factorize(m: &OperatorMatrix) -> Result<Option<Self>> {
        let n = m.n_qubits();
        let coeffs = pauli_coefficients(m)?;
        let (pivot, peak) =
            coeffs
                .iter()
                .enumerate()
                .map(|(i, c)| (i, c.norm()))
                .fold((0, 0.0), |acc, x| if x.1 > acc.1 { x } else { acc });
        if peak <= f64::MIN_POSITIVE || peak <= 1e-14 * m.frobenius_norm().max(1e-300) {
            return Ok(Some(Self { factors: vec![PauliFactor::zero(); n], scale: ONE }));
        }
        let pivot_value = coeffs[pivot];
        let digit = |idx: usize, q: usize| (idx >> (2 * (n - 1 - q))) & 3;
        let replace = |idx: usize, q: usize, k: usize| {
            let shift = 2 * (n - 1 - q);
            (idx & !(3 << shift)) | (k << shift)
        };
        let slices: Vec<[C64; 4]> = (0..n).map(|q| std::array::from_fn(|k| coeffs[replace(pivot, q, k)])).collect();
        let norm = pivot_value.powu((n - 1) as u32);
        for (idx, &c) in coeffs.iter().enumerate() {
            let predicted = (0..n).fold(ONE, |acc, q| acc * slices[q][digit(idx, q)]) / norm;
            if (predicted - c).norm() > 1e-10 * peak {
                return Ok(None);
            }
        }
        // Gauge: every factor after the first has its leading coefficient
        // (largest magnitude, first on ties) equal to one.
        let cutoff = 1e-14 * peak;
        let mut factors: Vec<PauliFactor> = slices
            .iter()
            .map(|s| PauliFactor::from_coeffs(s.map(|z| if z.norm() <= cutoff { ZERO } else { z })))
            .collect();
        let mut lead_product = ONE / norm;
        for f in factors.iter_mut().skip(1) {
            let lead = f.leading_coeff();
            *f = f.scaled(ONE / lead);
            lead_product *= lead;
        }
        factors[0] = factors[0].scaled(lead_product);
        Ok(Some(Self { factors, scale: ONE }))
    }
}

impl fmt::Display for PauliProduct {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", fmt_complex(self.scale))?;
        for factor in &self.factors {
            let c = factor.coeffs();
            write!(
                f,
                " ⊗ [{}, {}, {}, {}]",
                fmt_complex(c[0]),
                fmt_complex(c[1]),
                fmt_complex(c[2]),
                fmt_complex(c[3])
            )?;
        }
        Ok(())
    }
}

/// Linear combination of [`PauliProduct`] terms on a fixed qubit count.
///
/// The representation is not canonical; compare sums through [`to_matrix`](Self::to_matrix).
#[derive(Clone, Debug, PartialEq)]
pub struct PauliSum {
    n_qubits: usize,
    terms: Vec<PauliProduct>,
}

impl PauliSum {
    pub fn new(n_qubits: usize, terms: Vec<PauliProduct>) -> Result<Self> {
        check_pauli_qubits(n_qubits)?;
        for t in &terms {
            if t.n_qubits() != n_qubits {
                return Err(Error::DimensionMismatch { expected: n_qubits, found: t.n_qubits() });
            }
        }
        Ok(Self { n_qubits, terms })
    }

    pub fn zero(n_qubits: usize) -> Result<Self> {
        Self::new(n_qubits, Vec::new())
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn terms(&self) -> &[PauliProduct] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn push(&mut self, term: PauliProduct) -> Result<()> {
        if term.n_qubits() != self.n_qubits {
            return Err(Error::DimensionMismatch { expected: self.n_qubits, found: term.n_qubits() });
        }
        self.terms.push(term);
        Ok(())
    }

    pub fn to_matrix(&self) -> OperatorMatrix {
        self.terms.iter().fold(OperatorMatrix::zeros(self.n_qubits), |acc, t| &acc + &t.to_matrix())
    }

    /// Expansion in the Pauli product basis with coefficients `Tr{P† m} / 2^N`.
    ///
    /// On one qubit the result is a single term carrying all four
    /// coefficients; on more qubits each term is a unit-letter product.
    /// Zero coefficients are dropped, so the zero matrix gives no terms.
    pub fn from_matrix(m: &OperatorMatrix) -> Result<Self> {
        let n = m.n_qubits();
        let coeffs = pauli_coefficients(m)?;
        let cutoff = 1e-15 * m.frobenius_norm().max(1.0);
        if n == 1 {
            let terms = if coeffs.iter().any(|c| c.norm() > cutoff) {
                vec![PauliProduct {
                    factors: vec![PauliFactor::from_coeffs([coeffs[0], coeffs[1], coeffs[2], coeffs[3]])],
                    scale: ONE,
                }]
            } else {
                Vec::new()
            };
            return Self::new(1, terms);
        }
        let terms = coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| c.norm() > cutoff)
            .map(|(idx, &c)| PauliProduct {
                factors: (0..n).map(|q| PauliFactor::letter(Pauli::ALL[(idx >> (2 * (n - 1 - q))) & 3])).collect(),
                scale: c,
            })
            .collect();
        Self::new(n, terms)
    }

    /// The only term, when the sum has exactly one.
    pub fn single_product(&self) -> Option<&PauliProduct> {
        match self.terms.as_slice() {
            [t] => Some(t),
            _ => None,
        }
    }
}

impl From<PauliProduct> for PauliSum {
    fn from(p: PauliProduct) -> Self {
        Self { n_qubits: p.n_qubits(), terms: vec![p] }
    }
}

/// All `4^N` coefficients `Tr{P_k m} / 2^N`; `k` has base-4 digits per qubit, qubit 1 most significant.
pub fn pauli_coefficients(m: &OperatorMatrix) -> Result<Vec<C64>> {
    let n = m.n_qubits();
    check_pauli_qubits(n)?;
    let dim = 1usize << n;
    let count = 1usize << (2 * n);
    let norm = dim as f64;
    let mut out = Vec::with_capacity(count);
    for idx in 0..count {
        let letters: Vec<Pauli> = (0..n).map(|q| Pauli::ALL[(idx >> (2 * (n - 1 - q))) & 3]).collect();
        let mut acc = ZERO;
        for row in 0..dim {
            let mut col = 0usize;
            let mut phase = ONE;
            for (q, p) in letters.iter().enumerate() {
                let shift = n - 1 - q;
                let (c, v) = p.monomial((row >> shift) & 1);
                col |= c << shift;
                phase *= v;
            }
            acc += phase * m.entries[(col, row)];
        }
        out.push(acc / norm);
    }
    Ok(out)
}

/// `a+bi` literal, e.g. `1+0i`, `0-1i`.
pub fn fmt_complex(z: C64) -> String {
    format!("{}{:+}i", z.re, z.im)
}

/// Parses `a+bi`, `a-bi`, `a`, `bi`, `i` and `-i` (whitespace ignored).
pub fn parse_complex(text: &str) -> Result<C64> {
    let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let bad = || Error::Parse(format!("invalid complex literal {text:?}"));
    if s.is_empty() {
        return Err(bad());
    }
    let Some(body) = s.strip_suffix('i') else {
        return s.parse::<f64>().map(|re| C64::new(re, 0.0)).map_err(|_| bad());
    };
    // split before the last sign that is not leading and not part of an exponent
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let imag = |t: &str| -> Result<f64> {
        match t {
            "" | "+" => Ok(1.0),
            "-" => Ok(-1.0),
            _ => t.parse::<f64>().map_err(|_| bad()),
        }
    };
    match split {
        Some(k) => {
            let re = body[..k].parse::<f64>().map_err(|_| bad())?;
            Ok(C64::new(re, imag(&body[k..])?))
        }
        None => Ok(C64::new(0.0, imag(body)?)),
    }
}
