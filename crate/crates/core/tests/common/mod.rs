//! Samplers and reference computations shared by the integration tests.
#![allow(dead_code)]

use dfstab::operator::{Pauli, PauliFactor, PauliProduct};
use dfstab::{pauli_matrix, OperatorMatrix, ZetaVector, C64};
use nalgebra::DMatrix;
use rand::Rng;

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub fn rand_c<R: Rng>(rng: &mut R) -> C64 {
    C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
}

pub fn rand_vec3<R: Rng>(rng: &mut R) -> [C64; 3] {
    [rand_c(rng), rand_c(rng), rand_c(rng)]
}

pub fn rand_factor<R: Rng>(rng: &mut R) -> PauliFactor {
    PauliFactor::new(rand_c(rng), rand_c(rng), rand_c(rng), rand_c(rng))
}

pub fn rand_product<R: Rng>(rng: &mut R, n: usize) -> PauliProduct {
    PauliProduct::unit((0..n).map(|_| rand_factor(rng)).collect()).unwrap()
}

pub fn rand_zeta<R: Rng>(rng: &mut R, n: usize) -> ZetaVector {
    ZetaVector::from_coords((0..4 * n).map(|_| rand_c(rng)).collect()).unwrap()
}

pub fn rand_dense<R: Rng>(rng: &mut R, n: usize) -> OperatorMatrix {
    let d = 1 << n;
    OperatorMatrix::new(n, DMatrix::from_fn(d, d, |_, _| rand_c(rng))).unwrap()
}

/// Per-qubit axes `u_q`; family members are `⊗(a0 𝕀 + α u_q·σ)`.
pub fn rand_axes<R: Rng>(rng: &mut R, n: usize) -> Vec<[C64; 3]> {
    (0..n).map(|_| rand_vec3(rng)).collect()
}

pub fn family_member(axes: &[[C64; 3]], a0: &[C64], alpha: &[C64]) -> PauliProduct {
    let factors = axes
        .iter()
        .zip(a0.iter().zip(alpha))
        .map(|(u, (&z, &s))| PauliFactor::new(z, s * u[0], s * u[1], s * u[2]))
        .collect();
    PauliProduct::unit(factors).unwrap()
}

/// Two random members of one commuting family on `n` qubits.
pub fn commuting_pair<R: Rng>(rng: &mut R, n: usize) -> (PauliProduct, PauliProduct) {
    let axes = rand_axes(rng, n);
    let member = |rng: &mut R| {
        let a0: Vec<C64> = (0..n).map(|_| rand_c(rng)).collect();
        let alpha: Vec<C64> = (0..n).map(|_| rand_c(rng)).collect();
        family_member(&axes, &a0, &alpha)
    };
    let a = member(rng);
    let b = member(rng);
    (a, b)
}

/// Complex `u` with `u·u = 0`: `x + i y` for real orthogonal `x`, `y` of equal length, times a phase.
pub fn null_axis<R: Rng>(rng: &mut R) -> [C64; 3] {
    let x: [f64; 3] = [rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)];
    let mut y: [f64; 3] = [rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)];
    let dot = |p: &[f64; 3], q: &[f64; 3]| p[0] * q[0] + p[1] * q[1] + p[2] * q[2];
    let k = dot(&x, &y) / dot(&x, &x);
    for i in 0..3 {
        y[i] -= k * x[i];
    }
    let s = (dot(&x, &x) / dot(&y, &y)).sqrt();
    let phase = C64::from_polar(1.0, rng.gen_range(0.0..std::f64::consts::TAU));
    [0, 1, 2].map(|i| phase * C64::new(x[i], s * y[i]))
}

/// Member of the null family: `a0 = 1`, vector part `α_q u_q`.
pub fn null_member(axes: &[[C64; 3]], alpha: &[C64]) -> ZetaVector {
    let n = axes.len();
    let mut coords = vec![C64::new(0.0, 0.0); 4 * n];
    for q in 0..n {
        coords[q] = C64::new(1.0, 0.0);
        for l in 0..3 {
            coords[(l + 1) * n + q] = alpha[q] * axes[q][l];
        }
    }
    ZetaVector::from_coords(coords).unwrap()
}

/// Pauli coefficients of a 2×2 matrix from `Tr(σ_k M) / 2`.
pub fn pauli_decompose(m: &DMatrix<C64>) -> [C64; 4] {
    Pauli::ALL.map(|p| (pauli_matrix(p).matrix() * m).trace() / 2.0)
}

/// ζ of `AB` from per-qubit 2×2 products of the factor matrices.
pub fn zeta_of_product(a: &PauliProduct, b: &PauliProduct) -> ZetaVector {
    let n = a.n_qubits();
    let mut coords = vec![C64::new(0.0, 0.0); 4 * n];
    for q in 0..n {
        let coeffs = pauli_decompose(&(a.factors()[q].to_matrix() * b.factors()[q].to_matrix()));
        for (blk, z) in coeffs.into_iter().enumerate() {
            coords[blk * n + q] = z;
        }
    }
    ZetaVector::from_coords(coords).unwrap()
}

pub fn max_abs(v: &[C64]) -> f64 {
    v.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn max_diff(a: &[C64], b: &[C64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

/// `max|a - b| / max(1, max|b|)`
pub fn rel_diff(a: &[C64], b: &[C64]) -> f64 {
    max_diff(a, b) / max_abs(b).max(1.0)
}

/// `exp(t L)` applied to `ρ` with `L` the dense Liouvillian in row-major vec form.
pub fn exact_evolution(model: &dfstab::LindbladModel, rho: &DMatrix<C64>, t: f64) -> DMatrix<C64> {
    let d = model.dim();
    let id = DMatrix::<C64>::identity(d, d);
    let i = C64::new(0.0, 1.0);
    let h = model.hamiltonian().matrix();
    // vec(A ρ B) = (A ⊗ B^T) vec(ρ) for row-major flattening
    let mut l = (h.kronecker(&id) - id.kronecker(&h.transpose())) * (-i);
    for j in model.jumps() {
        let jm = j.op.matrix();
        let jdj = jm.adjoint() * jm;
        let lam = C64::new(j.lambda, 0.0);
        l += (jm.kronecker(&jm.conjugate())
            - (jdj.kronecker(&id) + id.kronecker(&jdj.transpose())) * C64::new(0.5, 0.0))
            * lam;
    }
    let prop = (l * C64::new(t, 0.0)).exp();
    let v = DMatrix::from_row_iterator(d * d, 1, rho.transpose().iter().copied());
    let out = prop * v;
    DMatrix::from_row_iterator(d, d, out.iter().copied())
}
