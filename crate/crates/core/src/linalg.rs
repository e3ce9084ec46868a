//! Numerical kernels: nullspaces, spectra and orthonormal bases.

use nalgebra::{DMatrix, DVector, Schur, SymmetricEigen};

use crate::error::{Error, Result};
use crate::operator::{C64, ZERO};
use crate::tolerance;

/// Orthonormal basis (as columns) of `ker(m)`.
///
/// Singular values below `rel_tol * sigma_max` count as zero. A zero matrix has
/// the whole space as its kernel.
pub fn nullspace(m: &DMatrix<C64>, rel_tol: f64) -> DMatrix<C64> {
    let cols = m.ncols();
    // Pad wide inputs so the SVD returns a full V.
    let padded;
    let a = if m.nrows() < cols {
        padded = {
            let mut p = DMatrix::from_element(cols, cols, ZERO);
            p.view_mut((0, 0), (m.nrows(), cols)).copy_from(m);
            p
        };
        &padded
    } else {
        m
    };
    let svd = a.clone().svd(false, true);
    let v_t = svd.v_t.expect("requested V");
    let sigma = &svd.singular_values;
    let sigma_max = sigma.iter().cloned().fold(0.0, f64::max);
    if sigma_max == 0.0 {
        return DMatrix::identity(cols, cols);
    }
    let cutoff = rel_tol * sigma_max;
    let rank = sigma.iter().filter(|s| **s > cutoff).count();
    let null: Vec<DVector<C64>> = (rank..cols).map(|i| v_t.row(i).adjoint()).collect();
    columns_to_matrix(cols, &null)
}

/// Dimension of `ker(m)` under the same criterion as [`nullspace`].
pub fn nullity(m: &DMatrix<C64>, rel_tol: f64) -> usize {
    nullspace(m, rel_tol).ncols()
}

pub(crate) fn columns_to_matrix(dim: usize, cols: &[DVector<C64>]) -> DMatrix<C64> {
    let mut out = DMatrix::from_element(dim, cols.len(), ZERO);
    for (j, c) in cols.iter().enumerate() {
        out.set_column(j, c);
    }
    out
}

/// Eigenvalues of a general complex square matrix (Schur diagonal).
pub fn eigenvalues(m: &DMatrix<C64>) -> Result<Vec<C64>> {
    if m.nrows() != m.ncols() {
        return Err(Error::DimensionMismatch { expected: m.nrows(), found: m.ncols() });
    }
    let schur = Schur::try_new(m.clone(), f64::EPSILON, 0)
        .ok_or_else(|| Error::Numerical("Schur decomposition did not converge".into()))?;
    let (_, t) = schur.unpack();
    Ok(t.diagonal().iter().copied().collect())
}

/// Distinct eigenvalue with its geometric multiplicity.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EigenCluster {
    pub value: C64,
    pub multiplicity: usize,
}

/// Groups the spectrum of `m` into distinct values.
///
/// Eigenvalues within `1e-6 * max(1, ||m||)` of each other are merged; the
/// multiplicity reported is the nullity of `m - c I`, i.e. geometric.
pub fn eigen_clusters(m: &DMatrix<C64>) -> Result<Vec<EigenCluster>> {
    let values = eigenvalues(m)?;
    let scale = m.norm().max(1.0);
    let merge = 1e-6 * scale;
    let mut groups: Vec<Vec<C64>> = Vec::new();
    for v in values {
        match groups.iter_mut().find(|g| (g[0] - v).norm() <= merge) {
            Some(g) => g.push(v),
            None => groups.push(vec![v]),
        }
    }
    let dim = m.nrows();
    let identity = DMatrix::<C64>::identity(dim, dim);
    let mut out = Vec::with_capacity(groups.len());
    for g in groups {
        let mean = g.iter().sum::<C64>() / g.len() as f64;
        let value = snap(mean, scale);
        let shifted = m - &identity * value;
        // Relative to the operator scale, not the shifted matrix, so exact
        // eigenvalues are not lost when `m - cI` is itself tiny.
        let svd = shifted.svd(false, false);
        let cutoff = 1e-8 * scale;
        let multiplicity = svd.singular_values.iter().filter(|s| **s <= cutoff).count();
        out.push(EigenCluster { value, multiplicity: multiplicity.max(1) });
    }
    Ok(out)
}

/// Rounds parts that are tiny relative to `scale` to exactly zero.
pub fn snap(z: C64, scale: f64) -> C64 {
    let eps = 1e-13 * scale.max(1.0);
    C64::new(if z.re.abs() < eps { 0.0 } else { z.re }, if z.im.abs() < eps { 0.0 } else { z.im })
}

/// Hermitian eigendecomposition with eigenvalues in ascending order.
pub fn hermitian_eigen(m: &DMatrix<C64>) -> Result<(Vec<f64>, DMatrix<C64>)> {
    if m.nrows() != m.ncols() {
        return Err(Error::DimensionMismatch { expected: m.nrows(), found: m.ncols() });
    }
    let defect = (m - m.adjoint()).norm();
    if defect > tolerance::scaled(m.norm()) {
        return Err(Error::NotHermitian(defect));
    }
    let herm = (m + m.adjoint()) * C64::new(0.5, 0.0);
    let eig = SymmetricEigen::try_new(herm, f64::EPSILON, 0)
        .ok_or_else(|| Error::Numerical("Hermitian eigensolver did not converge".into()))?;
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]).then(a.cmp(&b)));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let cols: Vec<DVector<C64>> = order.iter().map(|&i| eig.eigenvectors.column(i).into_owned()).collect();
    Ok((values, columns_to_matrix(m.nrows(), &cols)))
}

/// Orthonormal basis for the span of the given columns (rank-revealing via SVD).
pub fn orthonormal_span(m: &DMatrix<C64>, rel_tol: f64) -> DMatrix<C64> {
    if m.ncols() == 0 {
        return m.clone();
    }
    let svd = m.clone().svd(true, false);
    let u = svd.u.expect("requested U");
    let sigma_max = svd.singular_values.iter().cloned().fold(0.0, f64::max);
    if sigma_max == 0.0 {
        return DMatrix::from_element(m.nrows(), 0, ZERO);
    }
    let rank = svd.singular_values.iter().filter(|s| **s > rel_tol * sigma_max).count();
    u.columns(0, rank).into_owned()
}

/// Rotates the global phase so the largest-magnitude entry (first on ties) is real positive.
pub fn fix_phase(v: &mut DVector<C64>) {
    let mut best = 0;
    let mut best_norm = -1.0;
    for (i, z) in v.iter().enumerate() {
        let n = z.norm();
        if n > best_norm * (1.0 + 1e-9) + 1e-15 {
            best = i;
            best_norm = n;
        }
    }
    if best_norm > 0.0 {
        let phase = v[best].conj() / best_norm;
        *v *= phase;
    }
}

/// Euclidean norm of a complex vector.
pub fn vnorm(v: &DVector<C64>) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}
