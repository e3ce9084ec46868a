//! Markovian master equation: dissipator, RK4 integration and DFS/sDFS checks.

use std::io::Write;

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::linalg;
use crate::operator::{commutator, OperatorMatrix, PauliSum, C64, IMAG, ZERO};
use crate::tolerance;

/// Weighted jump operator `(λ, J)`.
#[derive(Clone, Debug, PartialEq)]
pub struct JumpOperator {
    pub lambda: f64,
    pub op: OperatorMatrix,
}

/// `dρ/dt = -i[H_S, ρ] + ½ Σ λ_l (2 J_l ρ J_l† - J_l†J_l ρ - ρ J_l†J_l)`.
#[derive(Clone, Debug, PartialEq)]
pub struct LindbladModel {
    n_qubits: usize,
    h_s: OperatorMatrix,
    jumps: Vec<JumpOperator>,
}

impl LindbladModel {
    pub fn new(h_s: OperatorMatrix, jumps: Vec<JumpOperator>) -> Result<Self> {
        let defect = h_s.hermiticity_defect();
        if defect > tolerance::scaled(h_s.frobenius_norm()) {
            return Err(Error::NotHermitian(defect));
        }
        for (l, j) in jumps.iter().enumerate() {
            h_s.same_shape(&j.op)?;
            if !(j.lambda.is_finite() && j.lambda >= 0.0) {
                return Err(Error::invalid(format!("rate lambda[{l}] = {} must be finite and nonnegative", j.lambda)));
            }
        }
        Ok(Self { n_qubits: h_s.n_qubits(), h_s, jumps })
    }

    pub fn from_pauli(h_s: &PauliSum, jumps: &[(f64, PauliSum)]) -> Result<Self> {
        let n = h_s.n_qubits();
        let jumps = jumps
            .iter()
            .map(|(lambda, op)| {
                if op.n_qubits() != n {
                    return Err(Error::DimensionMismatch { expected: n, found: op.n_qubits() });
                }
                Ok(JumpOperator { lambda: *lambda, op: op.to_matrix() })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(h_s.to_matrix(), jumps)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.h_s.dim()
    }

    pub fn hamiltonian(&self) -> &OperatorMatrix {
        &self.h_s
    }

    pub fn jumps(&self) -> &[JumpOperator] {
        &self.jumps
    }

    /// Same Hamiltonian, no dissipation.
    pub fn without_jumps(&self) -> Self {
        Self { n_qubits: self.n_qubits, h_s: self.h_s.clone(), jumps: Vec::new() }
    }

    pub fn with_hamiltonian(&self, h_s: OperatorMatrix) -> Result<Self> {
        Self::new(h_s, self.jumps.clone())
    }

    /// Largest characteristic rate: `max(||H_S||, λ_l ||J_l||²)` in spectral norm, at least 1e-12.
    pub fn rate_scale(&self) -> f64 {
        let spectral = |m: &DMatrix<C64>| m.clone().svd(false, false).singular_values.max();
        let mut scale = spectral(self.h_s.matrix());
        for j in &self.jumps {
            let s = spectral(j.op.matrix());
            scale = scale.max(j.lambda * s * s);
        }
        scale.max(1e-12)
    }

    /// `1e-3 / rate_scale()`
    pub fn default_dt(&self) -> f64 {
        1e-3 / self.rate_scale()
    }
}

/// Validated density operator: Hermitian, unit trace, positive semidefinite.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix(OperatorMatrix);

impl DensityMatrix {
    pub fn new(m: OperatorMatrix) -> Result<Self> {
        let tol = tolerance::DEFAULT_ZERO;
        let defect = m.hermiticity_defect();
        if defect > tol {
            return Err(Error::NotHermitian(defect));
        }
        let tr = m.trace();
        if (tr - C64::new(1.0, 0.0)).norm() > tol {
            return Err(Error::invalid(format!("density matrix trace {} + {}i is not 1", tr.re, tr.im)));
        }
        let (vals, _) = linalg::hermitian_eigen(m.matrix())?;
        if let Some(&min) = vals.first() {
            if min < -tol {
                return Err(Error::invalid(format!("density matrix has negative eigenvalue {min:.3e}")));
            }
        }
        Ok(Self(m))
    }

    /// `|ψ><ψ|` for a unit vector ψ.
    pub fn pure(psi: &DVector<C64>) -> Result<Self> {
        let norm = linalg::vnorm(psi);
        if (norm - 1.0).abs() > 1e-10 {
            return Err(Error::invalid(format!("state vector has norm {norm}, expected 1")));
        }
        Ok(Self(OperatorMatrix::outer(psi, psi)?))
    }

    /// Equal-weight mixture of the given unit vectors.
    pub fn mixture(states: &[DVector<C64>]) -> Result<Self> {
        let first = states.first().ok_or_else(|| Error::invalid("empty mixture"))?;
        let w = C64::new(1.0 / states.len() as f64, 0.0);
        let mut acc = OperatorMatrix::zeros(linalg_qubits(first.len())?);
        for s in states {
            acc = &acc + &DensityMatrix::pure(s)?.0.scale(w);
        }
        Self::new(acc)
    }

    pub fn maximally_mixed(n_qubits: usize) -> Self {
        let d = (1usize << n_qubits) as f64;
        Self(OperatorMatrix::identity(n_qubits).scale(C64::new(1.0 / d, 0.0)))
    }

    pub fn as_operator(&self) -> &OperatorMatrix {
        &self.0
    }

    pub fn into_operator(self) -> OperatorMatrix {
        self.0
    }

    pub fn purity(&self) -> f64 {
        purity(&self.0)
    }
}

fn linalg_qubits(dim: usize) -> Result<usize> {
    crate::operator::qubits_for_dim(dim)
}

/// `Tr{ρ²}` (real part).
pub fn purity(rho: &OperatorMatrix) -> f64 {
    let m = rho.matrix();
    // Tr(ρρ) = Σ_ij ρ_ij ρ_ji
    let mut acc = ZERO;
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            acc += m[(i, j)] * m[(j, i)];
        }
    }
    acc.re
}

/// `L_D(ρ)` in GKSL form; accepts any operator of matching dimension.
pub fn dissipator(model: &LindbladModel, rho: &OperatorMatrix) -> Result<OperatorMatrix> {
    model.h_s.same_shape(rho)?;
    let r = rho.matrix();
    let mut out = DMatrix::from_element(r.nrows(), r.ncols(), ZERO);
    for j in &model.jumps {
        let jm = j.op.matrix();
        let jd = jm.adjoint();
        let jdj = &jd * jm;
        let term = (jm * r * &jd) * C64::new(2.0, 0.0) - &jdj * r - r * &jdj;
        out += term * C64::new(0.5 * j.lambda, 0.0);
    }
    OperatorMatrix::new(model.n_qubits, out)
}

/// `Γ = Σ λ_l J_l† J_l`
pub fn gamma_op(model: &LindbladModel) -> OperatorMatrix {
    let mut out = OperatorMatrix::zeros(model.n_qubits);
    for j in &model.jumps {
        out = &out + &(&j.op.adjoint() * &j.op).scale(C64::new(j.lambda, 0.0));
    }
    out
}

/// `H_ev = H_S + (i/2) Σ λ_l (c_l* J_l - c_l J_l†)`
pub fn h_ev(model: &LindbladModel, eigvals: &[C64]) -> Result<OperatorMatrix> {
    if eigvals.len() != model.jumps.len() {
        return Err(Error::DimensionMismatch { expected: model.jumps.len(), found: eigvals.len() });
    }
    let mut out = model.h_s.clone();
    for (j, &c) in model.jumps.iter().zip(eigvals) {
        let term = &j.op.scale(c.conj()) - &j.op.adjoint().scale(c);
        out = &out + &term.scale(IMAG * 0.5 * j.lambda);
    }
    Ok(out)
}

/// Precomputed pieces of the right-hand side: `-i(H_eff ρ - ρ H_eff†) + Σ λ J ρ J†`.
struct Generator {
    h_eff: DMatrix<C64>,
    h_eff_dag: DMatrix<C64>,
    jumps: Vec<(DMatrix<C64>, DMatrix<C64>)>,
}

impl Generator {
    fn new(model: &LindbladModel) -> Self {
        let k = gamma_op(model);
        let h_eff = model.h_s.matrix() - k.matrix() * (IMAG * 0.5);
        let h_eff_dag = h_eff.adjoint();
        let jumps = model
            .jumps
            .iter()
            .filter(|j| j.lambda != 0.0)
            .map(|j| (j.op.matrix() * C64::new(j.lambda, 0.0), j.op.matrix().adjoint()))
            .collect();
        Self { h_eff, h_eff_dag, jumps }
    }

    fn apply(&self, rho: &DMatrix<C64>) -> DMatrix<C64> {
        let mut out = (&self.h_eff * rho - rho * &self.h_eff_dag) * (-IMAG);
        for (lj, jd) in &self.jumps {
            out += lj * rho * jd;
        }
        out
    }
}

/// `dρ/dt` of the master equation.
pub fn rhs(model: &LindbladModel, rho: &OperatorMatrix) -> Result<OperatorMatrix> {
    model.h_s.same_shape(rho)?;
    OperatorMatrix::new(model.n_qubits, Generator::new(model).apply(rho.matrix()))
}

/// `d Tr{ρ²}/dt = 2 Re Tr{ρ dρ/dt}`
pub fn purity_derivative(model: &LindbladModel, rho: &DensityMatrix) -> Result<f64> {
    let r = rho.as_operator();
    let d = rhs(model, r)?;
    let prod = r.matrix() * d.matrix();
    Ok(2.0 * prod.trace().re)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EvolveOptions {
    /// Record every `sample_every`-th step (the final step is always recorded).
    pub sample_every: usize,
    /// Keep the density matrix of each recorded sample.
    pub keep_states: bool,
}

impl Default for EvolveOptions {
    fn default() -> Self {
        Self { sample_every: 1, keep_states: true }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TrajectoryPoint {
    pub t: f64,
    pub purity: f64,
    pub trace: C64,
    pub rho: Option<OperatorMatrix>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Trajectory {
    pub points: Vec<TrajectoryPoint>,
    pub dt: f64,
    pub steps: usize,
    pub final_state: OperatorMatrix,
}

impl Trajectory {
    pub fn min_purity(&self) -> f64 {
        self.points.iter().map(|p| p.purity).fold(f64::INFINITY, f64::min)
    }

    pub fn max_purity(&self) -> f64 {
        self.points.iter().map(|p| p.purity).fold(f64::NEG_INFINITY, f64::max)
    }

    /// Largest `|Tr ρ - 1|` over the recorded samples.
    pub fn max_trace_drift(&self) -> f64 {
        self.points.iter().map(|p| (p.trace - C64::new(1.0, 0.0)).norm()).fold(0.0, f64::max)
    }

    /// CSV with `t, purity, trace_re, trace_im` and optionally flattened ρ (`rho_r_c_re`, `rho_r_c_im`).
    pub fn write_csv<W: Write>(&self, writer: W, with_rho: bool) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        let dim = self.final_state.dim();
        let mut header = vec!["t".to_string(), "purity".into(), "trace_re".into(), "trace_im".into()];
        if with_rho {
            for r in 0..dim {
                for c in 0..dim {
                    header.push(format!("rho_{r}_{c}_re"));
                    header.push(format!("rho_{r}_{c}_im"));
                }
            }
        }
        w.write_record(&header).map_err(csv_err)?;
        for p in &self.points {
            let mut row = vec![p.t.to_string(), p.purity.to_string(), p.trace.re.to_string(), p.trace.im.to_string()];
            if with_rho {
                let rho = p.rho.as_ref().ok_or_else(|| Error::invalid("trajectory was recorded without states"))?;
                for r in 0..dim {
                    for c in 0..dim {
                        let z = rho.get(r, c);
                        row.push(z.re.to_string());
                        row.push(z.im.to_string());
                    }
                }
            }
            w.write_record(&row).map_err(csv_err)?;
        }
        w.flush()?;
        Ok(())
    }
}

fn csv_err(e: csv::Error) -> Error {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::Io(io),
        other => Error::Numerical(format!("csv: {other:?}")),
    }
}

/// Trace drift that aborts an integration.
pub const TRACE_ABORT: f64 = 1e-4;

/// Fixed-step RK4 from `t = 0` to `t_final`, recording every step.
pub fn evolve(model: &LindbladModel, rho0: &DensityMatrix, t_final: f64, dt: f64) -> Result<Trajectory> {
    evolve_with(model, rho0, t_final, dt, EvolveOptions::default())
}

/// Fixed-step RK4. The step is `t_final / ceil(t_final / dt)` so the run ends exactly at `t_final`.
pub fn evolve_with(
    model: &LindbladModel,
    rho0: &DensityMatrix,
    t_final: f64,
    dt: f64,
    options: EvolveOptions,
) -> Result<Trajectory> {
    if !(dt.is_finite() && dt > 0.0) {
        return Err(Error::invalid(format!("dt = {dt} must be positive")));
    }
    if !(t_final.is_finite() && t_final >= 0.0) {
        return Err(Error::invalid(format!("t_final = {t_final} must be nonnegative")));
    }
    model.h_s.same_shape(rho0.as_operator())?;
    let steps = if t_final == 0.0 { 0 } else { ((t_final / dt) - 1e-9).ceil().max(1.0) as usize };
    let h = if steps == 0 { dt } else { t_final / steps as f64 };
    let sample_every = options.sample_every.max(1);
    let gen = Generator::new(model);

    let mut rho = rho0.as_operator().matrix().clone();
    let mut points = Vec::with_capacity(steps / sample_every + 2);
    let record = |t: f64, rho: &DMatrix<C64>, points: &mut Vec<TrajectoryPoint>| -> Result<()> {
        let op = OperatorMatrix::new(model.n_qubits, rho.clone())?;
        let trace = op.trace();
        let drift = (trace - C64::new(1.0, 0.0)).norm();
        if !drift.is_finite() || drift > TRACE_ABORT {
            return Err(Error::TraceDrift { t, dt: h, trace: trace.re });
        }
        points.push(TrajectoryPoint { t, purity: purity(&op), trace, rho: options.keep_states.then_some(op) });
        Ok(())
    };
    record(0.0, &rho, &mut points)?;
    let half = C64::new(h / 2.0, 0.0);
    let full = C64::new(h, 0.0);
    let sixth = C64::new(h / 6.0, 0.0);
    for step in 1..=steps {
        let k1 = gen.apply(&rho);
        let k2 = gen.apply(&(&rho + &k1 * half));
        let k3 = gen.apply(&(&rho + &k2 * half));
        let k4 = gen.apply(&(&rho + &k3 * full));
        rho += (k1 + (k2 + k3) * C64::new(2.0, 0.0) + k4) * sixth;
        if step % sample_every == 0 || step == steps {
            record(step as f64 * h, &rho, &mut points)?;
        }
    }
    Ok(Trajectory { points, dt: h, steps, final_state: OperatorMatrix::new(model.n_qubits, rho)? })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Dfs,
    Sdfs,
    Neither,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Dfs => "DFS",
            Verdict::Sdfs => "sDFS",
            Verdict::Neither => "neither",
        }
    }
}

/// `<ψ_k|J_l|ψ_k>` with the residual `||J_l ψ_k - c_l ψ_k||` against the extracted `c_l`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EigenEntry {
    pub jump: usize,
    pub basis: usize,
    pub estimate: C64,
    pub residual: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DfsReport {
    /// `c_l` extracted from the first basis vector.
    pub eigvals: Vec<C64>,
    pub eigenvalue_table: Vec<EigenEntry>,
    pub eigen_condition_ok: bool,
    pub commutator_condition_ok: bool,
    /// Largest `||[H_ev, J_l] ψ_k||`.
    pub commutator_residual: f64,
    /// `g = Σ λ_l |c_l|²` when the sDFS conditions hold.
    pub sdfs_gamma_eigenvalue: Option<C64>,
    /// Largest residual among the sDFS conditions.
    pub sdfs_residual: f64,
    pub verdict: Verdict,
}

impl DfsReport {
    pub fn passes_dfs(&self) -> bool {
        self.verdict != Verdict::Neither
    }
}

/// Eigenvector and commutator check of a candidate subspace given by `basis`.
pub fn check_dfs(model: &LindbladModel, basis: &[DVector<C64>]) -> Result<DfsReport> {
    if basis.is_empty() {
        return Err(Error::invalid("empty basis"));
    }
    let dim = model.dim();
    for (k, v) in basis.iter().enumerate() {
        if v.len() != dim {
            return Err(Error::DimensionMismatch { expected: dim, found: v.len() });
        }
        let n = linalg::vnorm(v);
        if (n - 1.0).abs() > 1e-8 {
            return Err(Error::invalid(format!("basis vector {k} has norm {n}, expected 1")));
        }
    }
    let stacked = linalg::columns_to_matrix(dim, basis);
    if linalg::orthonormal_span(&stacked, tolerance::RANK).ncols() != basis.len() {
        return Err(Error::invalid("basis vectors are linearly dependent"));
    }

    let mut eigvals = Vec::with_capacity(model.jumps.len());
    let mut table = Vec::new();
    let mut eigen_ok = true;
    for (l, j) in model.jumps.iter().enumerate() {
        let jm = j.op.matrix();
        let c = basis[0].dotc(&(jm * &basis[0]));
        let tol = tolerance::scaled(j.op.frobenius_norm());
        for (k, v) in basis.iter().enumerate() {
            let jv = jm * v;
            let residual = linalg::vnorm(&(&jv - v * c));
            eigen_ok &= residual <= tol;
            table.push(EigenEntry { jump: l, basis: k, estimate: v.dotc(&jv), residual });
        }
        eigvals.push(c);
    }

    let hev = h_ev(model, &eigvals)?;
    let mut comm_residual: f64 = 0.0;
    let mut comm_ok = true;
    for j in &model.jumps {
        let cm = commutator(&hev, &j.op)?;
        let tol = tolerance::scaled(hev.frobenius_norm().max(1.0) * j.op.frobenius_norm());
        for v in basis {
            let r = linalg::vnorm(&(cm.matrix() * v));
            comm_residual = comm_residual.max(r);
            comm_ok &= r <= tol;
        }
    }

    // sDFS: [H_S, J_l] and [H_S, Γ] annihilate the basis and Γ ψ = g ψ.
    let gamma = gamma_op(model);
    let g: f64 = model.jumps.iter().zip(&eigvals).map(|(j, c)| j.lambda * c.norm_sqr()).sum();
    let hs_norm = model.h_s.frobenius_norm().max(1.0);
    let mut sdfs_residual: f64 = 0.0;
    let mut sdfs_ok = true;
    let mut check = |m: &DMatrix<C64>, scale: f64| {
        for v in basis {
            let r = linalg::vnorm(&(m * v));
            sdfs_residual = sdfs_residual.max(r);
            sdfs_ok &= r <= tolerance::scaled(scale);
        }
    };
    for j in &model.jumps {
        check(commutator(&model.h_s, &j.op)?.matrix(), hs_norm * j.op.frobenius_norm());
    }
    check(commutator(&model.h_s, &gamma)?.matrix(), hs_norm * gamma.frobenius_norm());
    let shifted = gamma.matrix() - DMatrix::<C64>::identity(dim, dim) * C64::new(g, 0.0);
    check(&shifted, gamma.frobenius_norm());

    let verdict = match (eigen_ok && comm_ok, eigen_ok && sdfs_ok) {
        (true, true) => Verdict::Sdfs,
        (true, false) => Verdict::Dfs,
        _ => Verdict::Neither,
    };
    Ok(DfsReport {
        eigvals,
        eigenvalue_table: table,
        eigen_condition_ok: eigen_ok,
        commutator_condition_ok: comm_ok,
        commutator_residual: comm_residual,
        sdfs_gamma_eigenvalue: (verdict == Verdict::Sdfs).then_some(C64::new(g, 0.0)),
        sdfs_residual,
        verdict,
    })
}
