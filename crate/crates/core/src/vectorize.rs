//! Operator vectorization: `vec(|i><j|) = |i>|j>`, the `+_vec` law, the
//! coordinate-sum symplectic form and the vec existence check.

use std::fmt;

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::lindblad::{h_ev, LindbladModel};
use crate::operator::{
    commutator, fmt_complex, parse_complex, OperatorMatrix, PauliProduct, C64, MAX_PAULI_QUBITS, ONE, ZERO,
};
use crate::stabilizer::{build_stabilizers_with, verify_theorem_7_with, CodeKind, Theorem7Report};
use crate::tolerance;

/// Header line of the text form.
pub const VEC_HEADER: &str = "# vec: row-major, coordinate (i1..iN, j1..jN) at binary index i-bits then j-bits";

/// Row-major flattening of a `2^N × 2^N` operator.
#[derive(Clone, Debug, PartialEq)]
pub struct VecVector {
    n_qubits: usize,
    coords: Vec<C64>,
}

impl VecVector {
    pub fn new(n_qubits: usize, coords: Vec<C64>) -> Result<Self> {
        if n_qubits == 0 || n_qubits > MAX_PAULI_QUBITS {
            return Err(Error::QubitCount { found: n_qubits, max: MAX_PAULI_QUBITS });
        }
        let len = 1usize << (2 * n_qubits);
        if coords.len() != len {
            return Err(Error::DimensionMismatch { expected: len, found: coords.len() });
        }
        Ok(Self { n_qubits, coords })
    }

    pub fn from_coords(coords: Vec<C64>) -> Result<Self> {
        let len = coords.len();
        let n = (1..=MAX_PAULI_QUBITS)
            .find(|n| 1usize << (2 * n) == len)
            .ok_or_else(|| Error::invalid(format!("vec length {len} is not 4^N for N in 1..={MAX_PAULI_QUBITS}")))?;
        Self::new(n, coords)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn coords(&self) -> &[C64] {
        &self.coords
    }

    pub fn dim(&self) -> usize {
        1 << self.n_qubits
    }

    /// Coordinate `(row, col)` of the underlying matrix.
    pub fn at(&self, row: usize, col: usize) -> C64 {
        self.coords[row * self.dim() + col]
    }

    pub fn coordinate_sum(&self) -> C64 {
        self.coords.iter().sum()
    }

    pub fn max_abs_diff(&self, other: &VecVector) -> f64 {
        self.coords.iter().zip(&other.coords).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }

    /// Header line, then comma-separated literals.
    pub fn to_text(&self) -> String {
        let body = self.coords.iter().map(|z| fmt_complex(*z)).collect::<Vec<_>>().join(", ");
        format!("{VEC_HEADER}\n{body}\n")
    }

    /// Accepts the output of [`to_text`](Self::to_text); `#` lines are skipped.
    pub fn parse(text: &str) -> Result<Self> {
        let body: Vec<&str> =
            text.lines().filter(|l| !l.trim_start().starts_with('#') && !l.trim().is_empty()).collect();
        let coords = body.join(",").split(',').map(parse_complex).collect::<Result<Vec<_>>>()?;
        Self::from_coords(coords)
    }
}

impl fmt::Display for VecVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

pub fn vectorize(m: &OperatorMatrix) -> Result<VecVector> {
    let d = m.dim();
    let mut coords = Vec::with_capacity(d * d);
    for i in 0..d {
        for j in 0..d {
            coords.push(m.get(i, j));
        }
    }
    VecVector::new(m.n_qubits(), coords)
}

pub fn devectorize(v: &VecVector) -> OperatorMatrix {
    OperatorMatrix::from_row_major(v.n_qubits, &v.coords).expect("length checked on construction")
}

fn check_pair(a: &OperatorMatrix, n_qubits: usize) -> Result<()> {
    if a.n_qubits() != n_qubits {
        return Err(Error::DimensionMismatch { expected: 1 << n_qubits, found: a.dim() });
    }
    Ok(())
}

/// `(A ⊗ 𝕀) v` without forming the `4^N × 4^N` matrix.
pub fn apply_left(a: &OperatorMatrix, v: &VecVector) -> Result<VecVector> {
    check_pair(a, v.n_qubits)?;
    let d = v.dim();
    let mut out = vec![ZERO; d * d];
    for i in 0..d {
        for k in 0..d {
            let aik = a.get(i, k);
            if aik == ZERO {
                continue;
            }
            for j in 0..d {
                out[i * d + j] += aik * v.coords[k * d + j];
            }
        }
    }
    VecVector::new(v.n_qubits, out)
}

/// `(𝕀 ⊗ A^T) v`, i.e. `vec(B A)`.
pub fn apply_right(a: &OperatorMatrix, v: &VecVector) -> Result<VecVector> {
    check_pair(a, v.n_qubits)?;
    let d = v.dim();
    let mut out = vec![ZERO; d * d];
    for i in 0..d {
        for k in 0..d {
            let bik = v.coords[i * d + k];
            if bik == ZERO {
                continue;
            }
            for j in 0..d {
                out[i * d + j] += bik * a.get(k, j);
            }
        }
    }
    VecVector::new(v.n_qubits, out)
}

/// `A +_vec vec(B) = (A ⊗ 𝕀) vec(B) = vec(AB)`.
pub fn vec_sum(a: &OperatorMatrix, vec_b: &VecVector) -> Result<VecVector> {
    apply_left(a, vec_b)
}

/// `vec([A, B]) = (A ⊗ 𝕀 − 𝕀 ⊗ A^T) vec(B)`.
pub fn vec_commutator(a: &OperatorMatrix, vec_b: &VecVector) -> Result<VecVector> {
    let l = apply_left(a, vec_b)?;
    let r = apply_right(a, vec_b)?;
    let coords = l.coords.iter().zip(&r.coords).map(|(x, y)| x - y).collect();
    VecVector::new(vec_b.n_qubits, coords)
}

/// Coordinate sum of `vec([A, B])`. Vanishes whenever the pair commutes, not only then.
pub fn vec_symplectic(a: &OperatorMatrix, b: &OperatorMatrix) -> Result<C64> {
    a.same_shape(b)?;
    Ok(vec_commutator(a, &vectorize(b)?)?.coordinate_sum())
}

/// `‖[A, B]‖_F`, the residual behind the strict dual test.
pub fn vec_symplectic_strict(a: &OperatorMatrix, b: &OperatorMatrix) -> Result<f64> {
    Ok(commutator(a, b)?.frobenius_norm())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum DualForm {
    /// `‖[v, d]‖_F` below tolerance for every generator.
    #[default]
    Strict,
    /// Coordinate sum of `vec([v, d])` below tolerance.
    CoordinateSum,
}

impl DualForm {
    pub fn as_str(self) -> &'static str {
        match self {
            DualForm::Strict => "strict",
            DualForm::CoordinateSum => "coordinate-sum",
        }
    }
}

fn pair_in_dual(v: &OperatorMatrix, d: &OperatorMatrix, form: DualForm) -> Result<bool> {
    let scale = v.frobenius_norm().max(1.0) * d.frobenius_norm().max(1.0);
    match form {
        DualForm::CoordinateSum => Ok(vec_symplectic(v, d)?.norm() <= tolerance::EXACT * scale),
        DualForm::Strict => {
            // the strict variant implies the coordinate-sum one
            Ok(vec_symplectic_strict(v, d)? <= tolerance::scaled(scale) && pair_in_dual(v, d, DualForm::CoordinateSum)?)
        }
    }
}

pub fn in_vec_dual(v: &VecVector, generators: &[OperatorMatrix], form: DualForm) -> Result<bool> {
    let m = devectorize(v);
    for d in generators {
        m.same_shape(d)?;
        if !pair_in_dual(&m, d, form)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Per-qubit product of `(A_j B_j)_{i r}` entries computed from ζ coordinates,
/// compared against the flattened matrix product.
#[derive(Clone, Debug, PartialEq)]
pub struct EquivalenceReport {
    pub n_qubits: usize,
    pub from_zeta: VecVector,
    pub direct: VecVector,
    pub max_deviation: f64,
}

pub fn zeta_vec_equivalence(a: &PauliProduct, b: &PauliProduct) -> Result<EquivalenceReport> {
    if a.n_qubits() != b.n_qubits() {
        return Err(Error::DimensionMismatch { expected: a.n_qubits(), found: b.n_qubits() });
    }
    let n = a.n_qubits();
    // entries (AB)_{ir} for each qubit
    let blocks: Vec<[C64; 4]> = a
        .factors()
        .iter()
        .zip(b.factors())
        .map(|(fa, fb)| {
            let [a00, a01, a10, a11] = fa.to_entries();
            let [b00, b01, b10, b11] = fb.to_entries();
            [a00 * b00 + a01 * b10, a00 * b01 + a01 * b11, a10 * b00 + a11 * b10, a10 * b01 + a11 * b11]
        })
        .collect();
    let d = 1usize << n;
    let scale = a.scale() * b.scale();
    let mut coords = Vec::with_capacity(d * d);
    for i in 0..d {
        for r in 0..d {
            let mut z = scale;
            for (q, e) in blocks.iter().enumerate() {
                let shift = n - 1 - q;
                z *= e[2 * ((i >> shift) & 1) + ((r >> shift) & 1)];
            }
            coords.push(z);
        }
    }
    let from_zeta = VecVector::new(n, coords)?;
    let direct = vectorize(&a.to_matrix().checked_mul(&b.to_matrix())?)?;
    let max_deviation = from_zeta.max_abs_diff(&direct);
    Ok(EquivalenceReport { n_qubits: n, from_zeta, direct, max_deviation })
}

/// Entries `(A00, A01, A10, A11)` of `X(a) Z(b)`.
pub fn xz_entries(a: bool, b: bool) -> [i8; 4] {
    let a = a as i8;
    let s = if b { -1 } else { 1 };
    [1 - a, s * a, a, s * (1 - a)]
}

/// `(AB)_{pq}` for `A = X(a1)Z(b1)`, `B = X(a2)Z(b2)` from the entry formulas.
pub fn xz_composition(a1: bool, b1: bool, a2: bool, b2: bool) -> [i8; 4] {
    let (a1, a2) = (a1 as i8, a2 as i8);
    let s1 = if b1 { -1 } else { 1 };
    let s2 = if b2 { -1 } else { 1 };
    [
        (1 - a1) * (1 - a2) + s1 * a1 * a2,
        (1 - a1) * s2 * a2 + s1 * a1 * s2 * (1 - a2),
        a1 * (1 - a2) + s1 * (1 - a1) * a2,
        a1 * s2 * a2 + s1 * (1 - a1) * s2 * (1 - a2),
    ]
}

fn entries_matrix(e: [i8; 4]) -> DMatrix<C64> {
    DMatrix::from_row_slice(2, 2, &e.map(|x| C64::new(x as f64, 0.0)))
}

#[derive(Clone, Debug, PartialEq)]
pub struct StandardRoundtripReport {
    pub a_bits: Vec<bool>,
    pub b_bits: Vec<bool>,
    pub entries: Vec<[i8; 4]>,
    pub vec: VecVector,
    pub recovered_a: Vec<bool>,
    pub recovered_b: Vec<bool>,
    pub roundtrip_ok: bool,
    /// Single-qubit `(a1, b1, a2, b2)` cases where [`xz_composition`] disagrees with the matrix product.
    pub composition_mismatches: usize,
}

/// Builds `⊗ X(a_j)Z(b_j)`, vectorizes it and reads `(a, b)` back from the coordinates.
pub fn standard_formalism_roundtrip(a_bits: &[bool], b_bits: &[bool]) -> Result<StandardRoundtripReport> {
    if a_bits.len() != b_bits.len() {
        return Err(Error::DimensionMismatch { expected: a_bits.len(), found: b_bits.len() });
    }
    let n = a_bits.len();
    if n == 0 || n > MAX_PAULI_QUBITS {
        return Err(Error::QubitCount { found: n, max: MAX_PAULI_QUBITS });
    }
    let entries: Vec<[i8; 4]> = a_bits.iter().zip(b_bits).map(|(&a, &b)| xz_entries(a, b)).collect();
    let m = entries.iter().skip(1).fold(entries_matrix(entries[0]), |acc, e| acc.kronecker(&entries_matrix(*e)));
    let vec = vectorize(&OperatorMatrix::new(n, m)?)?;

    // exactly one nonzero coordinate has all column bits 0; its row bits are a
    let d = 1usize << n;
    let row =
        (0..d).find(|&i| vec.at(i, 0) != ZERO).ok_or_else(|| Error::Numerical("no nonzero in column 0".into()))?;
    let recovered_a: Vec<bool> = (0..n).map(|q| (row >> (n - 1 - q)) & 1 == 1).collect();
    // flipping qubit q's row bit and setting its column bit reads A_{1-a,1} = (-1)^b
    let recovered_b: Vec<bool> = (0..n)
        .map(|q| {
            let bit = 1usize << (n - 1 - q);
            vec.at(row ^ bit, bit).re < 0.0
        })
        .collect();
    let roundtrip_ok = recovered_a == a_bits && recovered_b == b_bits && vec.at(row, 0) == ONE;

    let mut composition_mismatches = 0;
    for case in 0..16u8 {
        let [a1, b1, a2, b2] = [case & 8 != 0, case & 4 != 0, case & 2 != 0, case & 1 != 0];
        let product = entries_matrix(xz_entries(a1, b1)) * entries_matrix(xz_entries(a2, b2));
        if product != entries_matrix(xz_composition(a1, b1, a2, b2)) {
            composition_mismatches += 1;
        }
    }
    Ok(StandardRoundtripReport {
        a_bits: a_bits.to_vec(),
        b_bits: b_bits.to_vec(),
        entries,
        vec,
        recovered_a,
        recovered_b,
        roundtrip_ok,
        composition_mismatches,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct VecTheoremReport {
    pub kind: CodeKind,
    pub form: DualForm,
    pub generators: Vec<VecVector>,
    /// Every generator pair lies in the dual (C ≤ C^⊥vec).
    pub self_orthogonal: bool,
    pub hamiltonian_label: &'static str,
    pub hamiltonian_in_dual: bool,
    pub hamiltonian_residual: f64,
    pub exists: bool,
    pub theorem7: Theorem7Report,
    pub consistent: bool,
}

impl VecTheoremReport {
    pub fn to_key_value(&self) -> String {
        let mut s = String::new();
        let mut line = |k: &str, v: String| s.push_str(&format!("{k} = {v}\n"));
        line("formalism", "vec".into());
        line("kind", self.kind.as_str().into());
        line("dual_form", self.form.as_str().into());
        line("generators", self.generators.len().to_string());
        line("self_orthogonal", self.self_orthogonal.to_string());
        line(&format!("{}_in_dual", self.hamiltonian_label), self.hamiltonian_in_dual.to_string());
        line(&format!("{}_residual", self.hamiltonian_label), format!("{:e}", self.hamiltonian_residual));
        line("exists", self.exists.to_string());
        line("theorem7_passed", self.theorem7.passed().to_string());
        line("consistent", self.consistent.to_string());
        s
    }
}

pub fn verify_vec_theorem(model: &LindbladModel, kind: CodeKind) -> Result<VecTheoremReport> {
    verify_vec_theorem_with(model, kind, None, DualForm::Strict)
}

pub fn verify_vec_theorem_with(
    model: &LindbladModel,
    kind: CodeKind,
    eigvals: Option<&[C64]>,
    form: DualForm,
) -> Result<VecTheoremReport> {
    let stabilizers = build_stabilizers_with(model, kind, eigvals)?;
    let ops = stabilizers.generators();
    let generators = ops.iter().map(vectorize).collect::<Result<Vec<_>>>()?;

    let mut self_orthogonal = true;
    for v in &generators {
        self_orthogonal &= in_vec_dual(v, ops, form)?;
    }

    let m = model.jumps().len();
    let (label, ham) = match kind {
        CodeKind::Dfs => ("h_ev", h_ev(model, &stabilizers.eigvals()[..m])?),
        CodeKind::Sdfs => ("h_s", model.hamiltonian().clone()),
    };
    let hamiltonian_in_dual = in_vec_dual(&vectorize(&ham)?, ops, form)?;
    let hamiltonian_residual =
        ops.iter().map(|d| vec_symplectic_strict(&ham, d)).collect::<Result<Vec<_>>>()?.into_iter().fold(0.0, f64::max);
    let exists = self_orthogonal && hamiltonian_in_dual;
    let theorem7 = verify_theorem_7_with(model, kind, eigvals)?;
    let consistent = !exists || theorem7.passed();
    Ok(VecTheoremReport {
        kind,
        form,
        generators,
        self_orthogonal,
        hamiltonian_label: label,
        hamiltonian_in_dual,
        hamiltonian_residual,
        exists,
        theorem7,
        consistent,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model;
    use crate::operator::{pauli_matrix, Pauli};
    use crate::zeta::verify_theorem_16;

    fn letters(s: &str) -> OperatorMatrix {
        PauliProduct::from_letters(s).unwrap().to_matrix()
    }

    fn nonzeros(v: &VecVector) -> Vec<(usize, C64)> {
        v.coords().iter().copied().enumerate().filter(|(_, z)| z.norm() > 1e-14).collect()
    }

    fn re(x: f64) -> C64 {
        C64::new(x, 0.0)
    }

    #[test]
    fn vectorize_examples() {
        let a = (&letters("XI") + &letters("IX")).clone();
        let idx: Vec<usize> = nonzeros(&vectorize(&a).unwrap()).iter().map(|(i, _)| *i).collect();
        assert_eq!(idx, vec![1, 2, 4, 7, 8, 11, 13, 14]);
        assert!(nonzeros(&vectorize(&a).unwrap()).iter().all(|(_, z)| *z == ONE));
        assert_eq!(vectorize(&OperatorMatrix::identity(1)).unwrap().coords(), &[ONE, ZERO, ZERO, ONE]);
        let x = nonzeros(&vectorize(&letters("XI")).unwrap());
        assert_eq!(x, vec![(2, ONE), (7, ONE), (8, ONE), (13, ONE)]);
    }

    #[test]
    fn vec_sum_examples() {
        let ab = vec_sum(&letters("XI"), &vectorize(&letters("IZ")).unwrap()).unwrap();
        assert_eq!(nonzeros(&ab), vec![(2, ONE), (7, -ONE), (8, ONE), (13, -ONE)]);
        assert_eq!(ab, vectorize(&letters("XZ")).unwrap());
        // coordinate 11 is not where the -1 lands
        assert_eq!(ab.coords()[11], ZERO);
        let b = vectorize(&letters("YZ")).unwrap();
        assert_eq!(vec_sum(&OperatorMatrix::identity(2), &b).unwrap(), b);
        assert!(vec_sum(&OperatorMatrix::identity(1), &b).is_err());
    }

    #[test]
    fn symplectic_examples() {
        let x = pauli_matrix(Pauli::X);
        let y = pauli_matrix(Pauli::Y);
        let z = pauli_matrix(Pauli::Z);
        assert_eq!(vec_symplectic(&x, &x).unwrap(), ZERO);
        assert!(vec_symplectic(&x, &y).unwrap().norm() < 1e-15);
        assert!(vec_symplectic_strict(&x, &y).unwrap() > 1.0);
        let hl = model::example_hl(0.5, 1.0).unwrap();
        let s = build_stabilizers_with(&hl, CodeKind::Dfs, None).unwrap();
        let hs = vectorize(hl.hamiltonian()).unwrap();
        assert!(in_vec_dual(&hs, s.generators(), DualForm::Strict).unwrap());
        assert!(in_vec_dual(
            &vectorize(&OperatorMatrix::identity(1)).unwrap(),
            &[x.clone(), z.clone()],
            DualForm::Strict
        )
        .unwrap());
        let vx = vectorize(&x).unwrap();
        assert!(in_vec_dual(&vx, std::slice::from_ref(&z), DualForm::CoordinateSum).unwrap());
        assert!(!in_vec_dual(&vx, &[z], DualForm::Strict).unwrap());
    }

    #[test]
    fn equivalence_examples() {
        let a = PauliProduct::from_letters("XI").unwrap();
        let b = PauliProduct::from_letters("IZ").unwrap();
        let r = zeta_vec_equivalence(&a, &b).unwrap();
        assert_eq!(r.max_deviation, 0.0);
        assert_eq!(r.from_zeta, vectorize(&letters("XZ")).unwrap());
        let id = PauliProduct::identity(3).unwrap();
        assert_eq!(zeta_vec_equivalence(&id, &id).unwrap().max_deviation, 0.0);
    }

    #[test]
    fn standard_roundtrip_examples() {
        assert_eq!(xz_entries(false, false), [1, 0, 0, 1]);
        assert_eq!(xz_entries(true, false), [0, 1, 1, 0]);
        assert_eq!(xz_entries(true, true), [0, -1, 1, 0]);
        let r = standard_formalism_roundtrip(&[true, false, true], &[true, true, false]).unwrap();
        assert!(r.roundtrip_ok);
        assert_eq!(r.composition_mismatches, 0);
        let xz = standard_formalism_roundtrip(&[true], &[true]).unwrap();
        assert_eq!(xz.vec.coords(), &[ZERO, -ONE, ONE, ZERO]);
        assert!(standard_formalism_roundtrip(&[true], &[]).is_err());
    }

    #[test]
    fn text_roundtrip() {
        let v = vectorize(&letters("XY")).unwrap();
        let text = v.to_text();
        assert!(text.starts_with("# vec:"));
        assert_eq!(VecVector::parse(&text).unwrap(), v);
        assert!(VecVector::parse("1, 2, 3").is_err());
    }

    #[test]
    fn theorem_examples() {
        let hl = verify_vec_theorem(&model::example_hl(0.5, 1.0).unwrap(), CodeKind::Dfs).unwrap();
        assert!(hl.exists && hl.consistent);

        let ex2 = model::example2(0.5, 1.0).unwrap();
        let v = verify_vec_theorem(&ex2, CodeKind::Dfs).unwrap();
        let z = verify_theorem_16(&ex2, CodeKind::Dfs).unwrap();
        assert!(v.exists && z.exists && v.consistent, "{}", v.to_key_value());

        let counter = verify_vec_theorem(&model::counter_model(), CodeKind::Dfs).unwrap();
        assert!(!counter.exists && !counter.hamiltonian_in_dual);
        assert!(counter.hamiltonian_residual > 1.0);
        let j = &ex2.jumps()[0].op;
        let hev = h_ev(&ex2, &[re(model::squeeze_sum(0.5) / 2.0)]).unwrap();
        assert!(vec_symplectic(&hev, j).unwrap().norm() < 1e-9);
        let product = model::example2_product_hamiltonian(0.5, 1.0).to_matrix();
        assert!(vec_symplectic(&product, j).unwrap().norm() > 1.0);
        let loose =
            verify_vec_theorem_with(&model::counter_model(), CodeKind::Dfs, None, DualForm::CoordinateSum).unwrap();
        assert!(loose.hamiltonian_in_dual);
    }
}
