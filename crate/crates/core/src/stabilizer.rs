//! Stabilizer generators from jump operators and the codes they fix.

use std::cmp::Ordering;
use std::fmt::Write as _;
use std::str::FromStr;

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::linalg;
use crate::lindblad::{check_dfs, gamma_op, h_ev, DfsReport, LindbladModel, Verdict};
use crate::operator::{commutator, fmt_complex, OperatorMatrix, C64, ONE, ZERO};
use crate::tolerance;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CodeKind {
    Dfs,
    Sdfs,
}

impl CodeKind {
    pub fn as_str(self) -> &'static str {
        match self {
            CodeKind::Dfs => "dfs",
            CodeKind::Sdfs => "sdfs",
        }
    }

    /// Claim exercised by this kind: 1 for DFS, 2 for sDFS.
    pub fn claim(self) -> u8 {
        match self {
            CodeKind::Dfs => 1,
            CodeKind::Sdfs => 2,
        }
    }
}

impl FromStr for CodeKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "dfs" => Ok(CodeKind::Dfs),
            "sdfs" => Ok(CodeKind::Sdfs),
            _ => Err(Error::Parse(format!("unknown code kind {s:?} (expected dfs or sdfs)"))),
        }
    }
}

/// Generators `S_l = J_l / c_l` (plus `Γ / g` for sDFS).
#[derive(Clone, Debug, PartialEq)]
pub struct StabilizerSet {
    n_qubits: usize,
    generators: Vec<OperatorMatrix>,
    eigvals: Vec<C64>,
    kind: CodeKind,
}

impl StabilizerSet {
    /// `eigvals[i]` is the normalization applied to produce `generators[i]`.
    pub fn new(n_qubits: usize, generators: Vec<OperatorMatrix>, eigvals: Vec<C64>, kind: CodeKind) -> Result<Self> {
        if generators.len() != eigvals.len() {
            return Err(Error::DimensionMismatch { expected: generators.len(), found: eigvals.len() });
        }
        let reference = OperatorMatrix::zeros(n_qubits);
        for g in &generators {
            reference.same_shape(g)?;
        }
        Ok(Self { n_qubits, generators, eigvals, kind })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn generators(&self) -> &[OperatorMatrix] {
        &self.generators
    }

    pub fn eigvals(&self) -> &[C64] {
        &self.eigvals
    }

    pub fn kind(&self) -> CodeKind {
        self.kind
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    /// Largest pairwise `||[S_i, S_j]||_F`.
    pub fn max_commutator_norm(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for (i, a) in self.generators.iter().enumerate() {
            for b in &self.generators[i + 1..] {
                let n = commutator(a, b).expect("same shape").frobenius_norm();
                worst = worst.max(n);
            }
        }
        worst
    }
}

/// Orders candidate eigenvalues: multiplicity, then `|c|`, then real part, then imaginary part.
fn branch_order(a: &linalg::EigenCluster, b: &linalg::EigenCluster, scale: f64) -> Ordering {
    let tol = 1e-9 * scale.max(1.0);
    let cmp_f = |x: f64, y: f64| if (x - y).abs() <= tol { Ordering::Equal } else { x.total_cmp(&y) };
    a.multiplicity
        .cmp(&b.multiplicity)
        .then_with(|| cmp_f(a.value.norm(), b.value.norm()))
        .then_with(|| cmp_f(a.value.re, b.value.re))
        .then_with(|| cmp_f(a.value.im, b.value.im))
}

/// Default branch for `c_l`: the nonzero eigenvalue of largest geometric
/// multiplicity; ties go to the largest `|c|`, then the lexicographically
/// largest value. `None` when every eigenvalue is zero.
pub fn select_eigenvalue(op: &OperatorMatrix) -> Result<Option<C64>> {
    let scale = op.frobenius_norm();
    let clusters = linalg::eigen_clusters(op.matrix())?;
    let zero = 1e-10 * scale.max(1.0);
    Ok(clusters.iter().filter(|c| c.value.norm() > zero).max_by(|a, b| branch_order(a, b, scale)).map(|c| c.value))
}

pub fn build_stabilizers(model: &LindbladModel, kind: CodeKind) -> Result<StabilizerSet> {
    build_stabilizers_with(model, kind, None)
}

/// Like [`build_stabilizers`], optionally with explicit `c_l` (one per jump operator).
pub fn build_stabilizers_with(model: &LindbladModel, kind: CodeKind, eigvals: Option<&[C64]>) -> Result<StabilizerSet> {
    let jumps = model.jumps();
    if let Some(ev) = eigvals {
        if ev.len() != jumps.len() {
            return Err(Error::DimensionMismatch { expected: jumps.len(), found: ev.len() });
        }
    }
    let mut generators = Vec::with_capacity(jumps.len() + 1);
    let mut cs = Vec::with_capacity(jumps.len() + 1);
    for (l, j) in jumps.iter().enumerate() {
        let c = match eigvals {
            Some(ev) => Some(ev[l]).filter(|c| c.norm() > 0.0),
            None => select_eigenvalue(&j.op)?,
        };
        let c = c.ok_or(Error::NonInvertibleNormalization { index: l })?;
        generators.push(j.op.scale(ONE / c));
        cs.push(c);
    }
    if kind == CodeKind::Sdfs && !jumps.is_empty() {
        let g: f64 = jumps.iter().zip(&cs).map(|(j, c)| j.lambda * c.norm_sqr()).sum();
        if g <= 0.0 {
            return Err(Error::NonInvertibleNormalization { index: jumps.len() });
        }
        generators.push(gamma_op(model).scale(C64::new(1.0 / g, 0.0)));
        cs.push(C64::new(g, 0.0));
    }
    StabilizerSet::new(model.n_qubits(), generators, cs, kind)
}

pub fn is_abelian(s: &StabilizerSet) -> bool {
    for (i, a) in s.generators.iter().enumerate() {
        for b in &s.generators[i + 1..] {
            let n = commutator(a, b).expect("same shape").frobenius_norm();
            if n > tolerance::scaled(a.frobenius_norm() * b.frobenius_norm()) {
                return false;
            }
        }
    }
    true
}

/// `max_l ||[op, S_l]||_F`
pub fn centralizer_residual(op: &OperatorMatrix, s: &StabilizerSet) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for g in &s.generators {
        worst = worst.max(commutator(op, g)?.frobenius_norm());
    }
    Ok(worst)
}

/// `[op, S_l] = 0` for every generator.
pub fn centralizer_membership(op: &OperatorMatrix, s: &StabilizerSet) -> Result<bool> {
    for g in &s.generators {
        let n = commutator(op, g)?.frobenius_norm();
        if n > tolerance::scaled(op.frobenius_norm() * g.frobenius_norm()) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Orthonormal basis of a subspace, stored as matrix columns.
#[derive(Clone, Debug, PartialEq)]
pub struct CodeSpace {
    n_qubits: usize,
    basis: DMatrix<C64>,
}

impl CodeSpace {
    /// Orthonormalizes the given columns.
    pub fn from_columns(n_qubits: usize, columns: &DMatrix<C64>) -> Result<Self> {
        let dim = 1usize << n_qubits;
        if columns.nrows() != dim {
            return Err(Error::DimensionMismatch { expected: dim, found: columns.nrows() });
        }
        Ok(Self { n_qubits, basis: linalg::orthonormal_span(columns, tolerance::RANK) })
    }

    pub fn full(n_qubits: usize) -> Self {
        let dim = 1usize << n_qubits;
        Self { n_qubits, basis: DMatrix::identity(dim, dim) }
    }

    pub fn empty(n_qubits: usize) -> Self {
        Self { n_qubits, basis: DMatrix::from_element(1usize << n_qubits, 0, ZERO) }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    /// Code dimension K.
    pub fn dim(&self) -> usize {
        self.basis.ncols()
    }

    pub fn is_empty(&self) -> bool {
        self.dim() == 0
    }

    pub fn basis(&self) -> &DMatrix<C64> {
        &self.basis
    }

    pub fn basis_vectors(&self) -> Vec<DVector<C64>> {
        self.basis.column_iter().map(|c| c.into_owned()).collect()
    }

    pub fn projector(&self) -> DMatrix<C64> {
        &self.basis * self.basis.adjoint()
    }

    /// `||v - P v||`
    pub fn residual(&self, v: &DVector<C64>) -> Result<f64> {
        if v.len() != self.basis.nrows() {
            return Err(Error::DimensionMismatch { expected: self.basis.nrows(), found: v.len() });
        }
        let coeffs = self.basis.adjoint() * v;
        Ok(linalg::vnorm(&(v - &self.basis * coeffs)))
    }

    /// Membership with residual below [`tolerance::MEMBERSHIP`].
    pub fn contains(&self, v: &DVector<C64>) -> Result<bool> {
        Ok(self.residual(v)? < tolerance::MEMBERSHIP)
    }

    /// `Q^{⊗n}` with basis the Kronecker products of basis vectors.
    pub fn tensor_power(&self, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::invalid("tensor power needs at least one copy"));
        }
        let total = self.n_qubits * n;
        if total > crate::operator::MAX_DENSE_QUBITS {
            return Err(Error::QubitCount { found: total, max: crate::operator::MAX_DENSE_QUBITS });
        }
        let mut basis = self.basis.clone();
        for _ in 1..n {
            basis = basis.kronecker(&self.basis);
        }
        Ok(Self { n_qubits: total, basis })
    }

    /// Largest `||S v - v||` over generators and basis vectors.
    pub fn stabilizer_residual(&self, s: &StabilizerSet) -> f64 {
        let mut worst: f64 = 0.0;
        for g in s.generators() {
            let diff = g.matrix() * &self.basis - &self.basis;
            for col in diff.column_iter() {
                worst = worst.max(col.norm());
            }
        }
        worst
    }
}

/// Joint +1 eigenspace: the common kernel of all `S_l - I`.
pub fn joint_plus_one_eigenspace(s: &StabilizerSet) -> Result<CodeSpace> {
    if !is_abelian(s) {
        return Err(Error::NonAbelian(s.max_commutator_norm()));
    }
    if s.is_empty() {
        return Ok(CodeSpace::full(s.n_qubits));
    }
    let dim = 1usize << s.n_qubits;
    let mut stacked = DMatrix::from_element(dim * s.len(), dim, ZERO);
    let identity = DMatrix::<C64>::identity(dim, dim);
    for (i, g) in s.generators.iter().enumerate() {
        stacked.view_mut((i * dim, 0), (dim, dim)).copy_from(&(g.matrix() - &identity));
    }
    let basis = linalg::nullspace(&stacked, tolerance::RANK);
    Ok(CodeSpace { n_qubits: s.n_qubits, basis })
}

#[derive(Clone, Debug, PartialEq)]
pub struct Theorem7Report {
    pub kind: CodeKind,
    pub claim_used: u8,
    pub stabilizers: StabilizerSet,
    pub abelian: bool,
    pub max_generator_commutator: f64,
    pub code: CodeSpace,
    /// Abelian generators with a nonempty joint +1 eigenspace.
    pub is_stabilizer_code: bool,
    /// `H_ev` (claim 1) or `H_S` (claim 2) commutes with every generator.
    pub centralizer_ok: bool,
    pub centralizer_residual: f64,
    /// Largest `||S_l v - v||` on the code basis.
    pub stabilizer_residual: f64,
    pub is_dfs: bool,
    /// Dynamical check of the code basis, when the code is nonempty.
    pub dynamics: Option<DfsReport>,
    /// The algebraic verdict agrees with the dynamical one.
    pub consistent: bool,
}

impl Theorem7Report {
    pub fn passed(&self) -> bool {
        self.is_stabilizer_code && self.is_dfs
    }

    /// `key = value` lines.
    pub fn to_key_value(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "kind = {}", self.kind.as_str());
        let _ = writeln!(s, "claim = {}", self.claim_used);
        let _ = writeln!(s, "generators = {}", self.stabilizers.len());
        for (l, c) in self.stabilizers.eigvals().iter().enumerate() {
            let _ = writeln!(s, "c[{l}] = {}", fmt_complex(*c));
        }
        let _ = writeln!(s, "abelian = {}", self.abelian);
        let _ = writeln!(s, "max_generator_commutator = {:e}", self.max_generator_commutator);
        let _ = writeln!(s, "code_dimension = {}", self.code.dim());
        let _ = writeln!(s, "stabilizer_residual = {:e}", self.stabilizer_residual);
        let _ = writeln!(s, "is_stabilizer_code = {}", self.is_stabilizer_code);
        let _ = writeln!(s, "centralizer_ok = {}", self.centralizer_ok);
        let _ = writeln!(s, "centralizer_residual = {:e}", self.centralizer_residual);
        let _ = writeln!(s, "is_dfs = {}", self.is_dfs);
        match &self.dynamics {
            Some(d) => {
                let _ = writeln!(s, "dynamics_verdict = {}", d.verdict.as_str());
                let eig = d.eigenvalue_table.iter().map(|e| e.residual).fold(0.0, f64::max);
                let _ = writeln!(s, "eigen_residual = {eig:e}");
                let _ = writeln!(s, "commutator_residual = {:e}", d.commutator_residual);
            }
            None => {
                let _ = writeln!(s, "dynamics_verdict = none");
            }
        }
        let _ = writeln!(s, "consistent = {}", self.consistent);
        s
    }
}

pub fn verify_theorem_7(model: &LindbladModel, kind: CodeKind) -> Result<Theorem7Report> {
    verify_theorem_7_with(model, kind, None)
}

/// Stabilizer pipeline with optional explicit `c_l`.
pub fn verify_theorem_7_with(model: &LindbladModel, kind: CodeKind, eigvals: Option<&[C64]>) -> Result<Theorem7Report> {
    let stabilizers = build_stabilizers_with(model, kind, eigvals)?;
    let abelian = is_abelian(&stabilizers);
    let max_generator_commutator = stabilizers.max_commutator_norm();
    let code = if abelian { joint_plus_one_eigenspace(&stabilizers)? } else { CodeSpace::empty(model.n_qubits()) };
    let is_stabilizer_code = abelian && !code.is_empty();

    let jump_cs = &stabilizers.eigvals()[..model.jumps().len()];
    let probe = match kind {
        CodeKind::Dfs => h_ev(model, jump_cs)?,
        CodeKind::Sdfs => model.hamiltonian().clone(),
    };
    let centralizer_ok = centralizer_membership(&probe, &stabilizers)?;
    let centralizer_residual = centralizer_residual(&probe, &stabilizers)?;
    let stabilizer_residual = code.stabilizer_residual(&stabilizers);
    let is_dfs = is_stabilizer_code && centralizer_ok && stabilizer_residual < tolerance::MEMBERSHIP;

    let dynamics = if code.is_empty() { None } else { Some(check_dfs(model, &code.basis_vectors())?) };
    let dynamic_ok = match (&dynamics, kind) {
        (Some(d), CodeKind::Dfs) => d.passes_dfs(),
        (Some(d), CodeKind::Sdfs) => d.verdict == Verdict::Sdfs,
        (None, _) => false,
    };
    // A positive algebraic verdict must be confirmed; a negative one is consistent
    // unless the dynamics certify the code anyway.
    let consistent = is_dfs == dynamic_ok || (!is_dfs && !is_stabilizer_code);
    Ok(Theorem7Report {
        kind,
        claim_used: kind.claim(),
        stabilizers,
        abelian,
        max_generator_commutator,
        code,
        is_stabilizer_code,
        centralizer_ok,
        centralizer_residual,
        stabilizer_residual,
        is_dfs,
        dynamics,
        consistent,
    })
}
