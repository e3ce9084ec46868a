//! The ζ map from single tensor products to `C^{4N}`, its group law and
//! symplectic forms, and the additive-code existence check built on them.

use std::fmt;

use crate::error::{Error, Result};
use crate::lindblad::{h_ev, LindbladModel};
use crate::operator::{
    fmt_complex, parse_complex, OperatorMatrix, PauliFactor, PauliProduct, C64, MAX_PAULI_QUBITS, ONE, ZERO,
};
use crate::stabilizer::{build_stabilizers_with, verify_theorem_7_with, CodeKind, Theorem7Report};
use crate::tolerance;

/// Default `+_ζ` closure depth for the self-orthogonality check.
pub const DEFAULT_CLOSURE_DEPTH: usize = 2;

/// Length-4N coordinates `(a0_1..a0_N, a1_1..a1_N, a2_1..a2_N, a3_1..a3_N)`.
#[derive(Clone, Debug, PartialEq)]
pub struct ZetaVector {
    n_qubits: usize,
    coords: Vec<C64>,
}

impl ZetaVector {
    pub fn new(n_qubits: usize, coords: Vec<C64>) -> Result<Self> {
        if n_qubits == 0 || n_qubits > MAX_PAULI_QUBITS {
            return Err(Error::QubitCount { found: n_qubits, max: MAX_PAULI_QUBITS });
        }
        if coords.len() != 4 * n_qubits {
            return Err(Error::DimensionMismatch { expected: 4 * n_qubits, found: coords.len() });
        }
        Ok(Self { n_qubits, coords })
    }

    /// Infers N from a length divisible by four.
    pub fn from_coords(coords: Vec<C64>) -> Result<Self> {
        if !coords.len().is_multiple_of(4) {
            return Err(Error::invalid(format!("ζ vector length {} is not a multiple of 4", coords.len())));
        }
        Self::new(coords.len() / 4, coords)
    }

    /// `v_𝕀 = (1_N, 0_N, 0_N, 0_N)`
    pub fn identity(n_qubits: usize) -> Self {
        let mut coords = vec![ZERO; 4 * n_qubits];
        coords[..n_qubits].fill(ONE);
        Self { n_qubits, coords }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn coords(&self) -> &[C64] {
        &self.coords
    }

    /// Coordinate `a_{block, qubit}` with a 0-based qubit.
    pub fn get(&self, block: usize, qubit: usize) -> C64 {
        self.coords[block * self.n_qubits + qubit]
    }

    /// `(a0, a1, a2, a3)` of one qubit (0-based).
    pub fn factor(&self, qubit: usize) -> PauliFactor {
        PauliFactor::from_coeffs(std::array::from_fn(|b| self.get(b, qubit)))
    }

    fn from_factors(factors: &[PauliFactor]) -> Self {
        let n = factors.len();
        let mut coords = vec![ZERO; 4 * n];
        for (q, f) in factors.iter().enumerate() {
            for (b, a) in f.coeffs().into_iter().enumerate() {
                coords[b * n + q] = a;
            }
        }
        Self { n_qubits: n, coords }
    }

    pub fn max_abs_diff(&self, other: &ZetaVector) -> f64 {
        self.coords.iter().zip(&other.coords).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }

    fn peak(&self) -> f64 {
        self.coords.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Comma-separated `a+bi` literals in block order.
    pub fn to_text(&self) -> String {
        self.coords.iter().map(|z| fmt_complex(*z)).collect::<Vec<_>>().join(", ")
    }

    pub fn parse(text: &str) -> Result<Self> {
        let coords = text.trim().split(',').map(parse_complex).collect::<Result<Vec<_>>>()?;
        Self::from_coords(coords)
    }
}

impl fmt::Display for ZetaVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

/// ζ of a unit-scale product; fold scalars into a factor first (see [`PauliProduct::with_unit_scale`]).
pub fn zeta(p: &PauliProduct) -> Result<ZetaVector> {
    if (p.scale() - ONE).norm() > tolerance::EXACT {
        return Err(Error::invalid(format!(
            "ζ is defined on unit-scale products; global scale is {} (fold it into factor 1)",
            fmt_complex(p.scale())
        )));
    }
    Ok(ZetaVector::from_factors(p.factors()))
}

pub fn zeta_inverse(v: &ZetaVector) -> PauliProduct {
    PauliProduct::unit((0..v.n_qubits).map(|q| v.factor(q)).collect()).expect("qubit count checked on construction")
}

/// `v1 +_ζ v2`: per-qubit Pauli product rule, so that `ζ(AB) = ζ(A) +_ζ ζ(B)`.
pub fn zeta_sum(v1: &ZetaVector, v2: &ZetaVector) -> Result<ZetaVector> {
    if v1.n_qubits != v2.n_qubits {
        return Err(Error::DimensionMismatch { expected: v1.n_qubits, found: v2.n_qubits });
    }
    let factors: Vec<PauliFactor> = (0..v1.n_qubits).map(|q| v1.factor(q).compose(&v2.factor(q))).collect();
    Ok(ZetaVector::from_factors(&factors))
}

/// `<v1, v2>_{ζ(l, j)}` for axis `l ∈ 1..=3` and 1-based qubit `j`.
pub fn symplectic_form(v1: &ZetaVector, v2: &ZetaVector, l: usize, j: usize) -> Result<C64> {
    if v1.n_qubits != v2.n_qubits {
        return Err(Error::DimensionMismatch { expected: v1.n_qubits, found: v2.n_qubits });
    }
    if !(1..=v1.n_qubits).contains(&j) {
        return Err(Error::invalid(format!("qubit index {j} outside 1..={}", v1.n_qubits)));
    }
    let (p, q) = match l {
        1 => (2, 3),
        2 => (3, 1),
        3 => (1, 2),
        _ => return Err(Error::invalid(format!("form index {l} outside 1..=3"))),
    };
    let a = |b| v1.get(b, j - 1);
    let b = |b| v2.get(b, j - 1);
    Ok(a(p) * b(q) - a(q) * b(p))
}

fn forms_vanish(v: &ZetaVector, d: &ZetaVector) -> Result<bool> {
    let tol = tolerance::EXACT * (v.peak() * d.peak()).max(1.0);
    for j in 1..=v.n_qubits {
        for l in 1..=3 {
            if symplectic_form(v, d, l, j)?.norm() > tol {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Generator list of a `+_ζ`-additive code.
#[derive(Clone, Debug, PartialEq)]
pub struct ZetaCode {
    n_qubits: usize,
    generators: Vec<ZetaVector>,
}

impl ZetaCode {
    pub fn new(n_qubits: usize, generators: Vec<ZetaVector>) -> Result<Self> {
        for g in &generators {
            if g.n_qubits != n_qubits {
                return Err(Error::DimensionMismatch { expected: n_qubits, found: g.n_qubits });
            }
        }
        Ok(Self { n_qubits, generators })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn generators(&self) -> &[ZetaVector] {
        &self.generators
    }

    pub fn identity(&self) -> ZetaVector {
        ZetaVector::identity(self.n_qubits)
    }

    /// `v_𝕀` plus every `+_ζ` word of 1..=depth generators, without duplicates.
    pub fn closure(&self, depth: usize) -> Vec<ZetaVector> {
        let mut out = vec![self.identity()];
        let mut frontier = vec![self.identity()];
        for _ in 0..depth {
            let mut next = Vec::new();
            for f in &frontier {
                for g in &self.generators {
                    let v = zeta_sum(f, g).expect("same qubit count");
                    let tol = tolerance::EXACT * v.peak().max(1.0);
                    if !out.iter().any(|o| o.max_abs_diff(&v) <= tol) {
                        out.push(v.clone());
                        next.push(v);
                    }
                }
            }
            frontier = next;
        }
        out
    }
}

/// First pairwise commutation violation: `<a, b>_{ζ(l, j)} ≠ 0`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PairViolation {
    pub first: usize,
    pub second: usize,
    pub l: usize,
    pub j: usize,
    pub value: C64,
}

/// First generator/qubit whose `(a1, a2, a3)` is not of the shape `a_l = 0, a_i = ±i a_k`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ShapeViolation {
    pub generator: usize,
    pub j: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConstraintReport {
    pub condition_one_ok: bool,
    pub condition_one_violation: Option<PairViolation>,
    pub condition_two_ok: bool,
    pub condition_two_violation: Option<ShapeViolation>,
}

/// True when `(a1, a2, a3)` has one zero axis and the other two satisfy
/// `a_i = ±i a_k`, or is all zero, or has a single nonzero axis.
pub fn has_null_shape(f: &PauliFactor) -> bool {
    let a = [f.coeff(1), f.coeff(2), f.coeff(3)];
    let peak = a.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if peak == 0.0 {
        return true;
    }
    let tol = 1e-10 * peak;
    let zeros: Vec<bool> = a.iter().map(|z| z.norm() <= tol).collect();
    match zeros.iter().filter(|z| **z).count() {
        2 | 3 => true,
        1 => {
            let l = zeros.iter().position(|z| *z).expect("one zero");
            let (i, k) = ((l + 1) % 3, (l + 2) % 3);
            (a[i] * a[i] + a[k] * a[k]).norm() <= tol * peak
        }
        _ => false,
    }
}

/// Pairwise cross-product constraints and per-generator shape constraints, reported separately.
pub fn check_code_constraints(code: &ZetaCode) -> ConstraintReport {
    let mut pair = None;
    'outer: for (x, a) in code.generators.iter().enumerate() {
        for (y, b) in code.generators.iter().enumerate().skip(x + 1) {
            let tol = tolerance::EXACT * (a.peak() * b.peak()).max(1.0);
            for j in 1..=code.n_qubits {
                for l in 1..=3 {
                    let value = symplectic_form(a, b, l, j).expect("validated indices");
                    if value.norm() > tol {
                        pair = Some(PairViolation { first: x, second: y, l, j, value });
                        break 'outer;
                    }
                }
            }
        }
    }
    let shape = code.generators.iter().enumerate().find_map(|(g, v)| {
        (0..code.n_qubits).find(|&q| !has_null_shape(&v.factor(q))).map(|q| ShapeViolation { generator: g, j: q + 1 })
    });
    ConstraintReport {
        condition_one_ok: pair.is_none(),
        condition_one_violation: pair,
        condition_two_ok: shape.is_none(),
        condition_two_violation: shape,
    }
}

/// Every form against every generator vanishes.
pub fn in_zeta_dual(v: &ZetaVector, code: &ZetaCode) -> Result<bool> {
    if v.n_qubits != code.n_qubits {
        return Err(Error::DimensionMismatch { expected: code.n_qubits, found: v.n_qubits });
    }
    for d in &code.generators {
        if !forms_vanish(v, d)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// ζ of a dense operator that must be a single tensor product.
///
/// Operators below `zero_scale * tolerance::zero()` in Frobenius norm are
/// taken as exactly zero.
pub fn zeta_of_operator(m: &OperatorMatrix, zero_scale: f64, what: &str) -> Result<ZetaVector> {
    if m.frobenius_norm() <= tolerance::scaled(zero_scale) {
        return Ok(ZetaVector { n_qubits: m.n_qubits(), coords: vec![ZERO; 4 * m.n_qubits()] });
    }
    match PauliProduct::factorize(m)? {
        Some(p) => zeta(&p.with_unit_scale()),
        None => Err(Error::NotZetaRepresentable { what: what.to_string() }),
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Theorem16Report {
    pub kind: CodeKind,
    pub code: ZetaCode,
    pub closure_depth: usize,
    pub closure_size: usize,
    /// Every closure element lies in the symplectic dual (C ≤ C^⊥ζ).
    pub self_orthogonal: bool,
    /// `H_ev` (claim 1) or `H_S` (claim 2).
    pub hamiltonian_label: &'static str,
    pub hamiltonian_vector: ZetaVector,
    pub hamiltonian_in_dual: bool,
    pub constraints: ConstraintReport,
    pub exists: bool,
    pub theorem7: Theorem7Report,
    pub consistent: bool,
}

impl Theorem16Report {
    pub fn to_key_value(&self) -> String {
        let mut s = String::new();
        let line = |s: &mut String, k: &str, v: String| {
            s.push_str(k);
            s.push_str(" = ");
            s.push_str(&v);
            s.push('\n');
        };
        line(&mut s, "formalism", "zeta".into());
        line(&mut s, "kind", self.kind.as_str().into());
        for (i, g) in self.code.generators().iter().enumerate() {
            line(&mut s, &format!("generator[{i}]"), g.to_text());
        }
        line(&mut s, "closure_depth", self.closure_depth.to_string());
        line(&mut s, "closure_size", self.closure_size.to_string());
        line(&mut s, "self_orthogonal", self.self_orthogonal.to_string());
        line(&mut s, &format!("{}_vector", self.hamiltonian_label), self.hamiltonian_vector.to_text());
        line(&mut s, &format!("{}_in_dual", self.hamiltonian_label), self.hamiltonian_in_dual.to_string());
        line(&mut s, "condition_one_ok", self.constraints.condition_one_ok.to_string());
        if let Some(v) = &self.constraints.condition_one_violation {
            line(
                &mut s,
                "condition_one_violation",
                format!("generators {} and {} at l = {}, j = {}", v.first, v.second, v.l, v.j),
            );
        }
        line(&mut s, "condition_two_ok", self.constraints.condition_two_ok.to_string());
        if let Some(v) = &self.constraints.condition_two_violation {
            line(&mut s, "condition_two_violation", format!("generator {} at j = {}", v.generator, v.j));
        }
        line(&mut s, "exists", self.exists.to_string());
        line(&mut s, "theorem7_passed", self.theorem7.passed().to_string());
        line(&mut s, "consistent", self.consistent.to_string());
        s
    }
}

pub fn verify_theorem_16(model: &LindbladModel, kind: CodeKind) -> Result<Theorem16Report> {
    verify_theorem_16_with(model, kind, None, DEFAULT_CLOSURE_DEPTH)
}

/// ζ-formalism existence check with optional explicit `c_l` and closure depth.
pub fn verify_theorem_16_with(
    model: &LindbladModel,
    kind: CodeKind,
    eigvals: Option<&[C64]>,
    closure_depth: usize,
) -> Result<Theorem16Report> {
    let stabilizers = build_stabilizers_with(model, kind, eigvals)?;
    let n = model.n_qubits();
    let m = model.jumps().len();
    let mut generators = Vec::with_capacity(stabilizers.len());
    for (i, g) in stabilizers.generators().iter().enumerate() {
        let what = if i < m { format!("S_{}", i + 1) } else { format!("S_{} (Γ/g)", i + 1) };
        generators.push(zeta_of_operator(g, g.frobenius_norm(), &what)?);
    }
    let code = ZetaCode::new(n, generators)?;

    let (label, ham) = match kind {
        CodeKind::Dfs => ("h_ev", h_ev(model, &stabilizers.eigvals()[..m])?),
        CodeKind::Sdfs => ("h_s", model.hamiltonian().clone()),
    };
    let ham_scale = model.hamiltonian().frobenius_norm()
        + model.jumps().iter().map(|j| j.lambda * j.op.frobenius_norm().powi(2)).sum::<f64>();
    let hamiltonian_vector = zeta_of_operator(&ham, ham_scale, if label == "h_ev" { "H_ev" } else { "H_S" })?;

    let closure = code.closure(closure_depth);
    let mut self_orthogonal = true;
    for c in &closure {
        self_orthogonal &= in_zeta_dual(c, &code)?;
    }
    let hamiltonian_in_dual = in_zeta_dual(&hamiltonian_vector, &code)?;
    let constraints = check_code_constraints(&code);
    let exists = self_orthogonal && hamiltonian_in_dual;
    let theorem7 = verify_theorem_7_with(model, kind, eigvals)?;
    let consistent = !exists || theorem7.passed();
    Ok(Theorem16Report {
        kind,
        code,
        closure_depth,
        closure_size: closure.len(),
        self_orthogonal,
        hamiltonian_label: label,
        hamiltonian_vector,
        hamiltonian_in_dual,
        constraints,
        exists,
        theorem7,
        consistent,
    })
}
